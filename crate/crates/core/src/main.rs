fn main() {
    std::process::exit(hereditary::cli::main_with(std::env::args_os()));
}
