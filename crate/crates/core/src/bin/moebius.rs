fn main() {
    std::process::exit(moebius::cli::main_with(std::env::args_os()));
}
