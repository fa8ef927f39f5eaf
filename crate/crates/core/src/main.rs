fn main() {
    std::process::exit(inertia_forge::cli::run(std::env::args_os()));
}
