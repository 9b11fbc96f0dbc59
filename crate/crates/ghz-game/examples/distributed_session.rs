//! The four-role session on loopback sockets, in one process for
//! convenience: a device thread holding the register, three agent threads in
//! their sealed rooms, and the referee driving trials. Afterwards the
//! traffic auditor replays the captures and confirms that no agent received
//! anything beyond its own questions and outcomes.
//!
//!     cargo run --example distributed_session
//!
//! The same roles run as real OS processes via the CLI:
//!
//!     ghz-game serve device  --endpoint device=127.0.0.1:7601 --seed 9 --log device.capture
//!     ghz-game serve agent   --suspect A --endpoint agent-a=127.0.0.1:7602 \
//!                            --endpoint device=127.0.0.1:7601 --log agent-a.capture
//!     ...                    (same for B and C)
//!     ghz-game play --mode distributed --trials 1000 --seed 9 \
//!                   --endpoint device=127.0.0.1:7601 --endpoint agent-a=127.0.0.1:7602 \
//!                   --endpoint agent-b=... --endpoint agent-c=... --log transcripts.log

use ghz_game::game::RobberId;
use ghz_game::harness::agent::{AgentConfig, AgentServer, AgentStrategy};
use ghz_game::harness::audit::{audit_session, read_capture};
use ghz_game::harness::device::{DeviceConfig, DeviceServer};
use ghz_game::harness::{
    run_session, Endpoints, GuardPolicy, Mode, Role, SessionConfig, StrategyKind,
};
use std::collections::BTreeMap;
use std::thread;
use std::time::Duration;

fn main() {
    let dir = std::env::temp_dir().join(format!("ghz-game-demo-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let session = "demo".to_string();

    // Device first; port 0 lets the OS pick.
    let device_capture = dir.join("device.capture");
    let device = DeviceServer::bind(DeviceConfig {
        listen: "127.0.0.1:0".into(),
        seed: 9,
        session: session.clone(),
        capture_path: Some(device_capture.clone()),
        timeout: Duration::from_secs(5),
    })
    .unwrap();
    let device_addr = device.local_addr().unwrap().to_string();
    println!("device listening on {device_addr}");
    let device_thread = thread::spawn(move || device.run().unwrap());

    // Three agents, each with its own capture file.
    let mut endpoints = Endpoints::new();
    endpoints.insert(Role::Device, device_addr.clone());
    let mut agent_threads = Vec::new();
    let mut capture_paths = BTreeMap::new();
    for suspect in RobberId::ALL {
        let capture = dir.join(format!("agent-{suspect}.capture"));
        capture_paths.insert(suspect, capture.clone());
        let server = AgentServer::bind(AgentConfig {
            suspect,
            listen: "127.0.0.1:0".into(),
            device: device_addr.clone(),
            session: session.clone(),
            strategy: AgentStrategy::Quantum,
            capture_path: Some(capture),
            timeout: Duration::from_secs(5),
        })
        .unwrap();
        let addr = server.local_addr().unwrap().to_string();
        println!("agent {suspect} listening on {addr}");
        endpoints.insert(Role::Agent(suspect), addr);
        agent_threads.push(thread::spawn(move || server.run().unwrap()));
    }

    // The referee drives 500 trials.
    let mut config = SessionConfig::local(9, 500, GuardPolicy::Uniform, StrategyKind::Quantum);
    config.mode = Mode::Distributed;
    config.endpoints = endpoints;
    config.session = Some(session);
    let result = run_session(&config).unwrap();
    println!(
        "\nreferee: {} trials completed, {} passes, {} aborted",
        result.stats.completed, result.stats.passes, result.stats.aborted
    );

    for handle in agent_threads {
        let summary = handle.join().unwrap();
        println!("agent wound down after {} answers", summary.answered);
    }
    let device_summary = device_thread.join().unwrap();
    println!(
        "device wound down after {} measurements across {} trials",
        device_summary.measures, device_summary.trials_completed
    );

    // Replay the captured traffic.
    let agent_captures: BTreeMap<RobberId, Vec<_>> = capture_paths
        .iter()
        .map(|(suspect, path)| (*suspect, read_capture(path).unwrap()))
        .collect();
    let device_records = read_capture(&device_capture).unwrap();
    let report = audit_session(&agent_captures, Some(&device_records), &result.transcripts);

    println!("\naudit clean: {}", report.is_clean());
    for agent in &report.agents {
        println!(
            "  agent {}: {} inbound messages, all of them its own ASK/OUTCOME/handshake",
            agent.suspect, agent.inbound_messages
        );
    }
    println!("  pass rate by device arrival order:");
    for group in &report.order_groups {
        println!(
            "    {}: {}/{} passed",
            group.order, group.passes, group.trials
        );
    }
    println!("\ncaptures and transcripts left in {}", dir.display());
}
