fn main() {
    std::process::exit(gsw_cli::run(std::env::args_os()));
}
