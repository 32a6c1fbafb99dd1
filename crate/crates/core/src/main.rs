fn main() {
    std::process::exit(homalg::cli::main());
}
