fn main() {
    std::process::exit(kolchin_core::cli::main_with_args(std::env::args_os()));
}
