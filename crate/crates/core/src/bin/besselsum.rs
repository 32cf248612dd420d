use std::process::exit;

fn main() {
    exit(bessel_lattice::cli::run(std::env::args()));
}
