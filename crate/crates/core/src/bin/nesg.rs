fn main() {
    std::process::exit(nesg::harness::cli::run(std::env::args_os()));
}
