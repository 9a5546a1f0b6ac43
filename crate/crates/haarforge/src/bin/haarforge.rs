fn main() {
    std::process::exit(haarforge::cli::main_entry());
}
