use clap::Parser;

fn main() {
    let cli = cmtt_cli::Cli::parse();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = cmtt_cli::run(&cli, &mut out, &mut err);
    std::process::exit(code);
}
