use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(contrasolver::cli::run(std::env::args_os()) as u8)
}
