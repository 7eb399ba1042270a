use std::process::ExitCode;

fn main() -> ExitCode {
    let r = graphk_cli::run(std::env::args_os());
    if r.code == 2 {
        eprint!("{}", r.text);
    } else {
        print!("{}", r.text);
    }
    ExitCode::from(r.code as u8)
}
