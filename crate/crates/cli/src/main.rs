fn main() {
    std::process::exit(quatrange_cli::run_cli(std::env::args_os()));
}
