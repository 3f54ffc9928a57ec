fn main() {
    std::process::exit(markov_snake::cli::run());
}
