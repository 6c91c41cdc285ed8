use std::io::Write;

fn main() {
    if let Some(threads) = std::env::var("PAIRFRAME_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = pairframe::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
