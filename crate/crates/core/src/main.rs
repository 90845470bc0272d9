fn main() {
    std::process::exit(probscheme::cli::main());
}
