fn main() {
    std::process::exit(bessel_struve::cli::run(std::env::args_os()));
}
