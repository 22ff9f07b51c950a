fn main() {
    std::process::exit(scalemodel::cli::run(std::env::args()));
}
