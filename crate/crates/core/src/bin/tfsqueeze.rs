fn main() {
    std::process::exit(tfsqueeze::cli::main_with(std::env::args_os()));
}
