fn main() {
    std::process::exit(irvzone_cli::run_cli(std::env::args_os()));
}
