fn main() {
    std::process::exit(poisson_cp::cli::run(std::env::args_os()));
}
