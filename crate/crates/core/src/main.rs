fn main() {
    std::process::exit(casimir::cli::main());
}
