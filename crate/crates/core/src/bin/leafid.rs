fn main() -> std::process::ExitCode {
    leafid::cli::main()
}
