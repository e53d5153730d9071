fn main() {
    std::process::exit(kickedtop::cli::run(std::env::args_os()));
}
