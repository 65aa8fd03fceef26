fn main() {
    std::process::exit(riccati_forge::cli::run(std::env::args_os()));
}
