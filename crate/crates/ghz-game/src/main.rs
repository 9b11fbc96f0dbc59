fn main() {
    std::process::exit(ghz_game::harness::cli::run());
}
