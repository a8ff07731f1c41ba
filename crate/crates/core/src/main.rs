fn main() {
    std::process::exit(nakamura::cli::run(std::env::args_os()));
}
