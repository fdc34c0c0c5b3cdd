fn main() {
    std::process::exit(rosetta_sim::cli::run(std::env::args_os()));
}
