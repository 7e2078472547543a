fn main() {
    std::process::exit(adequacy_cli::run(std::env::args_os()));
}
