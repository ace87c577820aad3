fn main() {
    std::process::exit(stb_cli::run(std::env::args_os()));
}
