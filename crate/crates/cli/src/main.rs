use std::io::Write;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let out = divaria_cli::run(&args);
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    if out.report.is_some() {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    std::process::exit(out.code);
}
