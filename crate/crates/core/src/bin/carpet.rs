fn main() {
    std::process::exit(bmcarpet::cli::main_with_args(std::env::args_os()));
}
