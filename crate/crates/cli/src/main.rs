fn main() {
    std::process::exit(cayleylab_cli::run(std::env::args_os()));
}
