use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hepta::cli::run(std::env::args_os()))
}
