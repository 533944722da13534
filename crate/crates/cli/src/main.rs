fn main() {
    std::process::exit(pacsdiv_cli::main_with_args(std::env::args_os()));
}
