fn main() {
    std::process::exit(circumdiv::cli::main_with_args(std::env::args_os()));
}
