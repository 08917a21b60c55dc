fn main() {
    std::process::exit(wayaudit_cli::main_with(std::env::args_os()));
}
