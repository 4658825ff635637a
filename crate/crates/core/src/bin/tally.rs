fn main() {
    std::process::exit(tally::cli::run_cli(std::env::args_os()));
}
