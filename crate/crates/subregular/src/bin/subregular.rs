fn main() {
    std::process::exit(subregular::cli::main_with(std::env::args()));
}
