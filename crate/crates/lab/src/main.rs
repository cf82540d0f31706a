fn main() {
    std::process::exit(typicality::cli::main_with_args(std::env::args_os()));
}
