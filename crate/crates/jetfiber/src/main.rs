fn main() {
    std::process::exit(jetfiber::cli::run())
}
