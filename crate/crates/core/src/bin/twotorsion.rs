fn main() {
    std::process::exit(twotorsion::cli::run(std::env::args_os()));
}
