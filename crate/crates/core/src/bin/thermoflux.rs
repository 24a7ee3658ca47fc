fn main() {
    std::process::exit(thermoflux::cli::run(std::env::args_os()));
}
