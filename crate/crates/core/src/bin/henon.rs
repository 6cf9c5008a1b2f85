fn main() {
    std::process::exit(henon_heights::cli::main_entry());
}
