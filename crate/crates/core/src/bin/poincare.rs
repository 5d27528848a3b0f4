fn main() {
    std::process::exit(poincare::cli::main_with_args(std::env::args_os()));
}
