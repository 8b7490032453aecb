use std::process::ExitCode;

fn main() -> ExitCode {
    let code = stirap_recoil::cli::main_with_args(std::env::args());
    ExitCode::from(code.clamp(0, 255) as u8)
}
