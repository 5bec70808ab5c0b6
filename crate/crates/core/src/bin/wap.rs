use std::process::ExitCode;

fn main() -> ExitCode {
    let code = match std::panic::catch_unwind(|| wap_core::cli::run(std::env::args_os())) {
        Ok(code) => code,
        Err(_) => wap_core::cli::EXIT_INTERNAL,
    };
    ExitCode::from(code as u8)
}
