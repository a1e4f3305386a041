use std::process::ExitCode;

fn main() -> ExitCode {
    pgblrc::cli::main()
}
