fn main() {
    if let Err(error) = diacomb_cli::cli::run() {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}
