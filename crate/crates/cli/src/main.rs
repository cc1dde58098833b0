use std::io::Write;

use mslab_cli::config::ProcessEnv;

fn main() {
    let r = mslab_cli::main_with(std::env::args_os(), &ProcessEnv);
    let _ = std::io::stdout().write_all(r.stdout.as_bytes());
    let _ = std::io::stderr().write_all(r.stderr.as_bytes());
    std::process::exit(r.code);
}
