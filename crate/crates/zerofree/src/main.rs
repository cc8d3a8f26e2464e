fn main() {
    std::process::exit(zerofree::cli::run(std::env::args_os()));
}
