fn main() {
    std::process::exit(netgen::cli::main_exit());
}
