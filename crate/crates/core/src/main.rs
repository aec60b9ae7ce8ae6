fn main() {
    std::process::exit(shiftlab::harness::cli_main(std::env::args_os()));
}
