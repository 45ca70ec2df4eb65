use std::process::ExitCode;

fn main() -> ExitCode {
    cakecut::cli::main_from_env()
}
