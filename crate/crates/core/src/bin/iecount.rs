use std::process::ExitCode;

fn main() -> ExitCode {
    iecount::cli::main_with(std::env::args_os())
}
