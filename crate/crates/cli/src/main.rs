fn main() {
    std::process::exit(ethos_cli::run(std::env::args_os()));
}
