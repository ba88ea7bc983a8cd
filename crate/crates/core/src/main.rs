fn main() {
    std::process::exit(rosenlin::cli::run(std::env::args_os()));
}
