fn main() {
    std::process::exit(typetwo::cli::main_with_args(std::env::args()));
}
