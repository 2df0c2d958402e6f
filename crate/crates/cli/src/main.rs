use clap::Parser;

fn main() {
    let cli = frobenius_cli::Cli::parse();
    let (outcome, format) = frobenius_cli::run(cli);
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    if outcome.exit == frobenius_cli::EXIT_INPUT {
        eprint!("{}", outcome.text);
        if format == frobenius_cli::Format::Json {
            print!("{}", outcome.render(format));
        }
    } else {
        print!("{}", outcome.render(format));
    }
    std::process::exit(outcome.exit);
}
