fn main() {
    std::process::exit(stirling_parking::cli::run(std::env::args_os()));
}
