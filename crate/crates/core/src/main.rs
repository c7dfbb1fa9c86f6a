fn main() {
    std::process::exit(choose_lang::cli::main());
}
