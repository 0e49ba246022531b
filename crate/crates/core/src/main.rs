fn main() {
    std::process::exit(lefschetz_lab::cli::main_with_args(std::env::args_os()));
}
