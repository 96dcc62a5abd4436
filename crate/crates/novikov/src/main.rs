use clap::Parser;

fn main() {
    let cli = novikov::cli::Cli::parse();
    match novikov::cli::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
