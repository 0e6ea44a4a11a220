fn main() {
    std::process::exit(vortex_holonomy::cli::run());
}
