use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let env_seed = std::env::var("BSK_SEED").ok().and_then(|s| s.parse().ok());
    let outcome = bsk::run(&argv, env_seed);
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.exit as u8)
}
