fn main() {
    std::process::exit(hypercube_walk::cli::main_entry());
}
