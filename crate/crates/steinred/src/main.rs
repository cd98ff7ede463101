use std::io;

use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::new().filter_or("STEINRED_LOG_LEVEL", "warn")).init();
    let code = steinred::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
