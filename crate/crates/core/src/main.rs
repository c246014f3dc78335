fn main() {
    std::process::exit(hinf_attitude::harness::cli::cli_main(std::env::args_os()));
}
