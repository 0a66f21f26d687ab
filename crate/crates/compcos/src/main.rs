fn main() -> std::process::ExitCode {
    compcos::cli::main()
}
