fn main() {
    std::process::exit(cyrat::cli::run(std::env::args_os()));
}
