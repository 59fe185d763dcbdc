use std::process::ExitCode;

fn main() -> ExitCode {
    herglotz_tools::cli::main_with(std::env::args_os())
}
