fn main() {
    std::process::exit(povm_cli::run(std::env::args_os()));
}
