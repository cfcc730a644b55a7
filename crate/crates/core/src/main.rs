fn main() {
    std::process::exit(lpbm::cli::main_with_args(std::env::args_os()));
}
