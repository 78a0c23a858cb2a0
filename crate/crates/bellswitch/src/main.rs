use std::process::ExitCode;

fn main() -> ExitCode {
    bellswitch::cli::main_with(std::env::args_os())
}
