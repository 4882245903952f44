fn main() {
    let ci = std::env::var("QTEMBED_CI").is_ok_and(|v| v == "1");
    let code = qtembed::cli::run(std::env::args_os(), ci, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
