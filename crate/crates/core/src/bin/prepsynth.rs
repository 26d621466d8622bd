fn main() {
    std::process::exit(prepsynth::cli::run(std::env::args_os()));
}
