fn main() {
    std::process::exit(hybrid_mmd::cli::main());
}
