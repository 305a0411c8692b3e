fn main() -> std::process::ExitCode {
    welded_harness::cli::main()
}
