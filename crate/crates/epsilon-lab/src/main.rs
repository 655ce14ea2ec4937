fn main() {
    std::process::exit(epsilon_lab::cli::run());
}
