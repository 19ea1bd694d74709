use std::process::ExitCode;

use ksverify::cli;

fn main() -> ExitCode {
    let (report, pretty) = match cli::run(std::env::args_os()) {
        Ok(r) => r,
        Err(e) => e.exit(),
    };
    println!("{}", report.to_json(pretty));
    if !report.message.is_empty() {
        eprintln!("error: {}", report.message);
    }
    ExitCode::from(report.exit_code() as u8)
}
