fn main() {
    std::process::exit(sdr_core::cli::main());
}
