fn main() {
    std::process::exit(hs_mc::cli::run());
}
