fn main() {
    std::process::exit(wishart_roots_cli::run(std::env::args_os()));
}
