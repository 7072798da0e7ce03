use std::io::{Read, Write};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut input = None;
    if affbound::cli::wants_stdin(&args) {
        let mut s = String::new();
        if std::io::stdin().read_to_string(&mut s).is_ok() {
            input = Some(s);
        }
    }
    let out = affbound::cli::run(&args, input.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
