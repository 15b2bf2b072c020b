fn main() {
    std::process::exit(dactx::cli::run(std::env::args_os()));
}
