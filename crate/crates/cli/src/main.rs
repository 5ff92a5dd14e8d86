use std::process::ExitCode;

fn main() -> ExitCode {
    let env = std::env::var(kchi::MAX_DIM_ENV).ok();
    let code = kchi::main_with(
        std::env::args_os().collect(),
        env.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
