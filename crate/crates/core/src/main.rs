fn main() {
    std::process::exit(qschur::cli::run(std::env::args_os()));
}
