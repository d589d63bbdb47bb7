fn main() {
    std::process::exit(redorb::cli::run(std::env::args_os()));
}
