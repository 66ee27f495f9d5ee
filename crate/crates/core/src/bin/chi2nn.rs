fn main() {
    std::process::exit(chi2nn::cli::run(std::env::args_os()));
}
