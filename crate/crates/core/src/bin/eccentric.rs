fn main() {
    std::process::exit(eccentric::cli::run(std::env::args_os()));
}
