fn main() {
    std::process::exit(ncg_cli::run(std::env::args_os()));
}
