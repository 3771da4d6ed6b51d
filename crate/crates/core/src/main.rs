fn main() {
    std::process::exit(proca_ab::cli::run(std::env::args_os()));
}
