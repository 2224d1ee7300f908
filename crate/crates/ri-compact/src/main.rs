fn main() {
    std::process::exit(ri_compact::cli::run(std::env::args_os()));
}
