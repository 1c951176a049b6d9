use std::process::ExitCode;

fn main() -> ExitCode {
    hyperdiss::cli::main()
}
