use clap::error::ErrorKind;
use clap::Parser;

use twoway_ic::args::Cli;
use twoway_ic::commands::CmdError;
use twoway_ic::{init_thread_pool, run};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };
    if let Err(msg) = init_thread_pool() {
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
    let mut stdout = std::io::stdout();
    let code = match run(&cli, &mut stdout) {
        Ok(code) => code,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        // downstream consumer closed the pipe; not our failure
        Err(CmdError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(CmdError::Io(e)) => {
            eprintln!("error: writing output failed: {e}");
            1
        }
    };
    std::process::exit(code);
}
