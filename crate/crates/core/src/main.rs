fn main() {
    std::process::exit(feestat::cli::main_with_args(std::env::args_os()));
}
