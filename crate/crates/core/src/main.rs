fn main() {
    std::process::exit(uipq_core::cli::main_with_args(std::env::args_os()));
}
