fn main() {
    std::process::exit(arboreal::cli::main_with_args(std::env::args_os()));
}
