fn main() {
    std::process::exit(pcpvec::cli::run(std::env::args_os()));
}
