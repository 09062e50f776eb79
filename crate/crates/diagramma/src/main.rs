use std::process::exit;

fn main() {
    exit(diagramma::cli::run(std::env::args()));
}
