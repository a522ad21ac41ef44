fn main() {
    std::process::exit(qubitflux::cli::run());
}
