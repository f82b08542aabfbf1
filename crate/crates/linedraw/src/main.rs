fn main() {
    std::process::exit(linedraw::cli::run(std::env::args_os()));
}
