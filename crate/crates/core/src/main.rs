fn main() {
    std::process::exit(hecke_core::cli::main_with_args(std::env::args_os()));
}
