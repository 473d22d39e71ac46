fn main() {
    std::process::exit(riccati_catalan::cli::main_with_args(std::env::args_os()));
}
