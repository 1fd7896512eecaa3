fn main() {
    std::process::exit(pleatlab::cli::main());
}
