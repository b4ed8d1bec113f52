fn main() {
    std::process::exit(sigquiver::cli::run(std::env::args_os()));
}
