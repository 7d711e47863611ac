fn main() {
    std::process::exit(active_flux::harness::run_cli(std::env::args()));
}
