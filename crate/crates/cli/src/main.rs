fn main() {
    std::process::exit(foguel_cli::run(std::env::args_os()));
}
