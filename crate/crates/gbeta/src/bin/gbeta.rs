fn main() {
    std::process::exit(gbeta::cli::main_entry());
}
