use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::Result;
use clap::Parser;

/// Write the first COUNT zeta zeros and zeta'(rho) as CSV.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[arg(long)]
    count: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    let args = Args::parse();
    match args.out {
        Some(path) => zerotab::ensure_table(&path, args.count),
        None => {
            let zeros = zerotab::generate(args.count)?;
            zerotab::write_csv(BufWriter::new(std::io::stdout().lock()), &zeros)?;
            Ok(())
        }
    }
}
