fn main() {
    std::process::exit(conjrot::cli::run(std::env::args_os()));
}
