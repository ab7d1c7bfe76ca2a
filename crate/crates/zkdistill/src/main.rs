use std::io::Write;

fn main() {
    let code = {
        let stdout = std::io::stdout();
        let stderr = std::io::stderr();
        let (mut out, mut err) = (stdout.lock(), stderr.lock());
        let code = zkdistill::cli::run(std::env::args_os(), |k| std::env::var(k).ok(), &mut out, &mut err);
        let _ = out.flush();
        code
    };
    std::process::exit(code);
}
