fn main() {
    std::process::exit(specmat::cli::run(std::env::args_os()));
}
