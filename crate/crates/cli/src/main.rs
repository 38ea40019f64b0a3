use clap::error::ErrorKind;
use clap::Parser;
use qcycle_cli::config::Cli;
use qcycle_cli::CliError;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit();
        }
        Err(e) => {
            let first = e.to_string();
            let msg = first.lines().next().unwrap_or("invalid arguments");
            let msg = msg.trim_start_matches("error: ").to_string();
            fail(CliError::Config(msg));
        }
    };
    let (kind, flags) = cli.command.split();
    let result = qcycle_cli::resolve(kind, flags).and_then(|cfg| qcycle_cli::run(&cfg));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ! {
    eprintln!("{}", e.to_line());
    std::process::exit(e.exit_code());
}
