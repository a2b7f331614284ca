fn main() {
    std::process::exit(tightoa::cli::run(std::env::args_os()));
}
