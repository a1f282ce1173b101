fn main() {
    std::process::exit(starsylv::cli::run());
}
