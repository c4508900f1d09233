use clap::Parser;

fn main() {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    let cli = mailmood::Cli::parse();
    if let Err(e) = mailmood::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
