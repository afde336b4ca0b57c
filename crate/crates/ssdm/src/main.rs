fn main() {
    std::process::exit(ssdm::cli::run_command(std::env::args()));
}
