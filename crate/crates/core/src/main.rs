fn main() {
    std::process::exit(diracosc::cli::main_with_args(std::env::args_os()));
}
