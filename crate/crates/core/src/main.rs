use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = korenblum::cli::run_with_writer(&args, &mut lock);
    let _ = lock.flush();
    std::process::exit(code);
}
