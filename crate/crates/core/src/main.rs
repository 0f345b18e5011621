fn main() {
    std::process::exit(cliquenet::cli::main());
}
