//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Tolerances are pinned here, in code:
//! - amplitude / projection checks: exact or 1e-12
//! - distribution checks: 1e-9 entrywise
//! - statistical checks: 3σ binomial bands around the analytic value
//! - pass-rate-1 claims: exact integer equality, zero failures tolerated

use ghz_game::game::{Color, GuardId, RobberId, SideView};
use ghz_game::harness::audit::{audit_session, read_capture};
use ghz_game::harness::transcript::read_transcript_log;
use ghz_game::harness::{run_trials, GuardPolicy, SessionConfig, Stats, StrategyKind};
use ghz_game::oracle::{
    ambiguity_cover, classical_game_value, enumerate_colorings, max_satisfiable,
    product_argument, satisfied_guards, testable_statements, Coloring, GuardSet,
};
use ghz_game::qsim::{basis_vectors, BasisTriple, MeasBasis, MeasOutcome, QubitId, StateVector};
use num_complex::Complex64;
use std::time::Instant;

const ALL_ORDERS: [[QubitId; 3]; 6] = {
    use QubitId::{A, B, C};
    [
        [A, B, C],
        [A, C, B],
        [B, A, C],
        [B, C, A],
        [C, A, B],
        [C, B, A],
    ]
};

#[test]
fn criterion_1_inconsistency() {
    let start = Instant::now();

    let satisfying_all_four = enumerate_colorings()
        .filter(|c| satisfied_guards(*c) == GuardSet::ALL)
        .count();
    assert_eq!(satisfying_all_four, 0, "no coloring satisfies all four statements");

    let enumeration = max_satisfiable();
    assert_eq!(enumeration.max_satisfied, 3);
    assert_eq!(enumeration.satisfying_all_four, 0);

    let proof = product_argument();
    assert_eq!(proof.joint_product, 1);
    assert_eq!(proof.required_product, -1);
    assert!(proof.contradiction);
    assert!(proof.side_multiplicities.iter().all(|m| m.count == 2));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!("criterion 1 (inconsistency, exercise 1): PASS in {elapsed:?}");
}

#[test]
fn criterion_2_paper_witnesses() {
    // Red backs and green fronts satisfy exactly guards 1-3.
    let red_backs = Coloring::from_fn(|_, side| match side {
        SideView::Back => Color::Red,
        SideView::Front => Color::Green,
    });
    assert_eq!(
        satisfied_guards(red_backs),
        GuardSet::from_iter([GuardId::G1, GuardId::G2, GuardId::G3])
    );

    // A green on both sides, B and C green in front and red in back,
    // satisfy exactly guards 2-4.
    let a_green = Coloring::from_fn(|robber, side| match (robber, side) {
        (RobberId::A, _) => Color::Green,
        (_, SideView::Front) => Color::Green,
        (_, SideView::Back) => Color::Red,
    });
    assert_eq!(
        satisfied_guards(a_green),
        GuardSet::from_iter([GuardId::G2, GuardId::G3, GuardId::G4])
    );
    println!("criterion 2 (paper witness colorings): PASS");
}

#[test]
fn criterion_3_testability() {
    for guard in GuardId::ALL {
        let testable = testable_statements(guard);
        assert_eq!(testable.len(), 1, "guard {guard}: exactly one testable statement");
        assert!(testable.contains(guard));
        assert_eq!(ambiguity_cover(guard), GuardSet::ALL, "guard {guard}");
    }
    println!("criterion 3 (testability, exercise 2a/2b): PASS");
}

#[test]
fn criterion_4_quantum_guarantee() {
    let start = Instant::now();
    for guard in GuardId::ALL {
        let config = SessionConfig::local(
            0xC0FFEE,
            10_000,
            GuardPolicy::Fixed(guard),
            StrategyKind::Quantum,
        );
        let stats = run_trials(&config).unwrap();
        assert_eq!(stats.completed, 10_000, "guard {guard}");
        assert_eq!(stats.aborted, 0, "guard {guard}");
        // Exactly 1.0: zero failures tolerated.
        assert_eq!(stats.passes, 10_000, "guard {guard} had a failing trial");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!("criterion 4 (quantum guarantee, 4 x 10000 trials): PASS in {elapsed:?}");
}

#[test]
fn criterion_5_projection_algebra() {
    let ghz = StateVector::ghz();

    // A measured in X with a draw selecting +1.
    let (outcome_a, after_a) = ghz.measure_qubit(QubitId::A, MeasBasis::X, 0.2).unwrap();
    assert_eq!(outcome_a, MeasOutcome::Plus);
    let mut bc = [Complex64::ZERO; 8];
    bc[0] = Complex64::new(0.5, 0.0);
    bc[3] = Complex64::new(-0.5, 0.0);
    bc[4] = Complex64::new(0.5, 0.0);
    bc[7] = Complex64::new(-0.5, 0.0);
    let bc = StateVector::from_amplitudes(bc).unwrap();
    assert!(after_a.equal_up_to_global_phase(&bc, 1e-12));

    // B measured in Y with a draw selecting +1.
    let (outcome_b, after_b) = after_a.measure_qubit(QubitId::B, MeasBasis::Y, 0.3).unwrap();
    assert_eq!(outcome_b, MeasOutcome::Plus);
    let [x_plus, _] = basis_vectors(MeasBasis::X);
    let [y_plus, _] = basis_vectors(MeasBasis::Y);
    let product = StateVector::product(x_plus, y_plus, y_plus);
    assert!(after_b.equal_up_to_global_phase(&product, 1e-12));

    // C's Y measurement is now analytically certain.
    let p_plus = after_b.outcome_probability(QubitId::C, MeasBasis::Y, MeasOutcome::Plus);
    assert!((p_plus - 1.0).abs() <= 1e-12);
    println!("criterion 5 (projection algebra): PASS");
}

#[test]
fn criterion_6_parity_law() {
    let ghz = StateVector::ghz();
    let cases = [
        (BasisTriple::new(MeasBasis::X, MeasBasis::X, MeasBasis::X), -1i8),
        (BasisTriple::new(MeasBasis::X, MeasBasis::Y, MeasBasis::Y), 1),
        (BasisTriple::new(MeasBasis::Y, MeasBasis::X, MeasBasis::Y), 1),
        (BasisTriple::new(MeasBasis::Y, MeasBasis::Y, MeasBasis::X), 1),
    ];
    for (bases, expected_sign) in cases {
        let dist = ghz.joint_distribution(bases);
        for (outcomes, p) in dist.entries() {
            let sign: i32 = outcomes.iter().map(|o| o.sign() as i32).product();
            let expected = if sign == expected_sign as i32 { 0.25 } else { 0.0 };
            assert!(
                (p - expected).abs() <= 1e-9,
                "{bases}: cell {outcomes:?} = {p}, expected {expected}"
            );
        }
        assert!((dist.sign_product_mass(expected_sign) - 1.0).abs() <= 1e-9);

        let reference = ghz.joint_distribution_ordered(bases, ALL_ORDERS[0]);
        for order in &ALL_ORDERS[1..] {
            let other = ghz.joint_distribution_ordered(bases, *order);
            assert!(
                reference.max_abs_diff(&other) <= 1e-9,
                "{bases}: order {order:?} disagrees"
            );
        }
    }
    println!("criterion 6 (GHZ parity law + order independence): PASS");
}

#[test]
fn criterion_7_classical_value() {
    let value = classical_game_value();
    assert_eq!(value.as_fraction(), (3, 4), "enumeration must give exactly 3/4");

    let config = SessionConfig::local(
        42,
        10_000,
        GuardPolicy::Uniform,
        StrategyKind::ClassicalBest,
    );
    let stats = run_trials(&config).unwrap();
    assert_eq!(stats.completed, 10_000);
    let rate = stats.pass_rate();
    let band = 3.0 * (0.1875f64 / 10_000.0).sqrt();
    assert!(
        (rate - 0.75).abs() <= band,
        "pass rate {rate} outside 0.75 ± {band}"
    );
    println!("criterion 7 (classical value 3/4): PASS (simulated rate {rate})");
}

#[test]
fn criterion_8_no_signaling() {
    let config = SessionConfig::local(42, 40_000, GuardPolicy::Uniform, StrategyKind::Quantum);
    let stats = run_trials(&config).unwrap();
    assert_eq!(stats.completed, 40_000);
    assert_no_signaling(&stats);
    println!("criterion 8 (no-signaling marginals, 40000 trials): PASS");
}

fn assert_no_signaling(stats: &Stats) {
    for suspect in RobberId::ALL {
        for guard in GuardId::ALL {
            let n = stats.per_suspect[suspect.index()].answers_by_guard[guard.index()];
            assert!(n > 0, "no trials tested guard {guard}");
            let freq = stats.red_frequency_given(suspect, guard);
            let band = 3.0 * (0.25f64 / n as f64).sqrt();
            assert!(
                (freq - 0.5).abs() <= band,
                "suspect {suspect} | guard {guard}: red frequency {freq} outside 0.5 ± {band} (n = {n})"
            );
        }
    }
}

// ------------------------------------------------------------ criterion 9

mod distributed {
    use super::*;
    use std::collections::BTreeMap;
    use std::io::{BufRead, BufReader};
    use std::process::{Child, Command, Stdio};
    use std::time::Duration;

    /// Kills the child on teardown so a failing test never leaks processes.
    struct Reaped(Child, &'static str);

    impl Drop for Reaped {
        fn drop(&mut self) {
            let _ = self.0.kill();
            let _ = self.0.wait();
        }
    }

    fn binary() -> &'static str {
        env!("CARGO_BIN_EXE_ghz-game")
    }

    /// Spawns a serve role and reads its `listening <role> <addr>` line.
    fn spawn_listening(name: &'static str, args: &[String]) -> (Reaped, String) {
        let mut child = Command::new(binary())
            .args(args)
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .unwrap_or_else(|e| panic!("spawning {name}: {e}"));
        let stdout = child.stdout.take().expect("piped stdout");
        let mut reader = BufReader::new(stdout);
        let mut line = String::new();
        reader.read_line(&mut line).expect("listening line");
        let addr = line
            .trim()
            .rsplit(' ')
            .next()
            .unwrap_or_else(|| panic!("{name}: unparseable listening line {line:?}"))
            .to_string();
        assert!(line.starts_with("listening"), "{name} printed {line:?}");
        // Drain the rest of stdout in the background so the child never
        // blocks on a full pipe.
        std::thread::spawn(move || {
            let mut sink = String::new();
            while matches!(reader.read_line(&mut sink), Ok(n) if n > 0) {
                sink.clear();
            }
        });
        (Reaped(child, name), addr)
    }

    fn wait_exit(mut child: Reaped, budget: Duration) {
        let start = Instant::now();
        loop {
            match child.0.try_wait().expect("try_wait") {
                Some(status) => {
                    assert!(status.success(), "{} exited with {status}", child.1);
                    std::mem::forget(child);
                    return;
                }
                None if start.elapsed() > budget => {
                    panic!("{} did not exit within {budget:?}", child.1);
                }
                None => std::thread::sleep(Duration::from_millis(50)),
            }
        }
    }

    #[test]
    fn criterion_9_distributed_equivalence() {
        let start = Instant::now();
        let dir = tempfile::tempdir().unwrap();
        let device_capture = dir.path().join("device.capture");
        let transcript_log = dir.path().join("transcripts.log");
        let session = "acceptance-9";

        let (device, device_addr) = spawn_listening(
            "device",
            &[
                "serve".into(),
                "device".into(),
                "--seed".into(),
                "90".into(),
                "--endpoint".into(),
                "device=127.0.0.1:0".into(),
                "--log".into(),
                device_capture.display().to_string(),
                "--session".into(),
                session.into(),
            ],
        );

        let mut agents = Vec::new();
        let mut agent_captures = BTreeMap::new();
        let mut agent_addrs = Vec::new();
        for suspect in RobberId::ALL {
            let capture = dir.path().join(format!("agent-{suspect}.capture"));
            agent_captures.insert(suspect, capture.clone());
            let name: &'static str = match suspect {
                RobberId::A => "agent-a",
                RobberId::B => "agent-b",
                RobberId::C => "agent-c",
            };
            let (child, addr) = spawn_listening(
                name,
                &[
                    "serve".into(),
                    "agent".into(),
                    "--suspect".into(),
                    suspect.to_string(),
                    "--endpoint".into(),
                    format!("{name}=127.0.0.1:0"),
                    "--endpoint".into(),
                    format!("device={device_addr}"),
                    "--log".into(),
                    capture.display().to_string(),
                    "--session".into(),
                    session.into(),
                ],
            );
            agents.push(child);
            agent_addrs.push(addr);
        }

        let output = Command::new(binary())
            .args([
                "play",
                "--mode",
                "distributed",
                "--trials",
                "1000",
                "--guard",
                "uniform",
                "--seed",
                "90",
                "--report",
                "json",
                "--log",
                &transcript_log.display().to_string(),
                "--session",
                session,
                "--endpoint",
                &format!("device={device_addr}"),
                "--endpoint",
                &format!("agent-a={}", agent_addrs[0]),
                "--endpoint",
                &format!("agent-b={}", agent_addrs[1]),
                "--endpoint",
                &format!("agent-c={}", agent_addrs[2]),
            ])
            .output()
            .expect("running the referee");
        assert!(
            output.status.success(),
            "referee failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );

        let report: serde_json::Value =
            serde_json::from_slice(&output.stdout).expect("referee JSON report");
        assert_eq!(report["pass_rate"], 1.0, "distributed pass rate must be exactly 1.0");
        let stats: Stats = serde_json::from_value(report["stats"].clone()).unwrap();
        assert_eq!(stats.completed, 1000);
        assert_eq!(stats.passes, 1000);
        assert_eq!(stats.aborted, 0);

        // The serve processes wind down once the referee hangs up.
        for agent in agents {
            wait_exit(agent, Duration::from_secs(10));
        }
        wait_exit(device, Duration::from_secs(10));

        // Replay the traffic: each agent saw only its own questions and
        // outcomes, and every verdict checks out.
        let transcripts = read_transcript_log(&transcript_log).unwrap();
        assert_eq!(transcripts.len(), 1000);
        let agent_records: BTreeMap<RobberId, Vec<_>> = agent_captures
            .iter()
            .map(|(suspect, path)| (*suspect, read_capture(path).unwrap()))
            .collect();
        let device_records = read_capture(&device_capture).unwrap();
        let report = audit_session(&agent_records, Some(&device_records), &transcripts);
        assert!(report.is_clean(), "audit violations: {:?}", report.violations());
        for agent in &report.agents {
            assert_eq!(agent.asks_received, 1000);
            assert_eq!(agent.outcomes_received, 1000);
            assert!(agent.violations.is_empty());
        }
        for group in &report.order_groups {
            assert_eq!(group.passes, group.trials, "order {} had failures", group.order);
        }

        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
        println!("criterion 9 (distributed equivalence, 4 processes): PASS in {elapsed:?}");
    }
}
