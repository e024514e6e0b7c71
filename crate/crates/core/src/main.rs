fn main() {
    std::process::exit(bsps::cli::main_with_args(std::env::args_os()));
}
