fn main() {
    std::process::exit(exforge::cli::run());
}
