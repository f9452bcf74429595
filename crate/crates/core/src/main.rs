fn main() {
    std::process::exit(sgcm::cli::main_with_args(std::env::args_os()));
}
