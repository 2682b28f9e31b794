fn main() {
    std::process::exit(graphprod::cli::run());
}
