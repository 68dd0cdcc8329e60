fn main() {
    std::process::exit(qsnp::cli::main_with_args(std::env::args_os()));
}
