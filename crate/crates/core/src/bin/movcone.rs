fn main() {
    std::process::exit(movcone::cli::main_with_env());
}
