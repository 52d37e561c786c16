fn main() {
    let code = qrbound::cli::run(std::env::args_os());
    std::process::exit(code);
}
