fn main() {
    std::process::exit(tdinv::cli::main_with_args(std::env::args().skip(1)));
}
