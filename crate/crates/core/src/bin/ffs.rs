use std::io::Write;

fn main() {
    let (code, out) = factored_sets::cli::run(std::env::args_os());
    // input errors go to stderr, everything else to stdout
    let _ = if code == 2 {
        std::io::stderr().lock().write_all(out.as_bytes())
    } else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush())
    };
    std::process::exit(code);
}
