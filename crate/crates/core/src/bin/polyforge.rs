fn main() {
    std::process::exit(polyforge::cli::run(std::env::args_os()));
}
