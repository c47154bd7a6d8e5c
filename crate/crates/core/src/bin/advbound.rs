fn main() {
    std::process::exit(advbound::cli::run(std::env::args_os()));
}
