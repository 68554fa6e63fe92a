fn main() {
    std::process::exit(klr_hopfield::cli::main_with_args(std::env::args_os()));
}
