fn main() {
    std::process::exit(polariton_cli::run(std::env::args_os()));
}
