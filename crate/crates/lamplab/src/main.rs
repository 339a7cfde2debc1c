fn main() {
    std::process::exit(lamplab::cli::run(std::env::args_os()));
}
