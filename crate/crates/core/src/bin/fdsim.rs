fn main() {
    std::process::exit(fdmimo::cli::main_with_args(std::env::args_os()));
}
