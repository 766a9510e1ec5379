fn main() {
    std::process::exit(cedensity::cli::run(std::env::args_os()));
}
