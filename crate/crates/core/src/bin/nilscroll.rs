fn main() {
    std::process::exit(nilscroll::cli::run(std::env::args_os()));
}
