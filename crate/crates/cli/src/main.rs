fn main() {
    std::process::exit(odoni_cli::run(std::env::args_os()));
}
