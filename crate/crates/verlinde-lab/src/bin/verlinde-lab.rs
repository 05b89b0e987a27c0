fn main() {
    std::process::exit(verlinde_lab::cli::main_with_args(std::env::args_os()));
}
