fn main() {
    let code = daniell_core::cli::dispatch(std::env::args());
    std::process::exit(code);
}
