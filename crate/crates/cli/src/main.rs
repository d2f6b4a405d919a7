fn main() {
    std::process::exit(qcinterp_cli::main_with_args(std::env::args_os()));
}
