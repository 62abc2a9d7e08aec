//! Writes oracle-computed `dist` tables used as golden files by the tests.
//!
//! One CSV per λ, in the same layout `poisson-maxima dist` emits, covering
//! n = 10^0, 10^2, ..., 10^12 and k up to the library's scan window.

use std::path::PathBuf;

use clap::Parser;
use poisson_maxima::maxdist;
use poisson_maxima::oracle::oracle_log_max_pmf_row;
use poisson_maxima::sweep::{Cell, GridPoint, SweepTable};
use poisson_maxima::ProblemInstance;
use rayon::prelude::*;

const LAMBDAS: [(f64, &str); 4] = [(0.5, "0.5"), (1.0, "1"), (2.0, "2"), (5.0, "5")];
const EXPONENTS: [u32; 7] = [0, 2, 4, 6, 8, 10, 12];

#[derive(Parser)]
#[command(about = "Generate oracle golden tables for the dist command")]
struct Args {
    /// Output directory.
    #[arg(long, default_value = "crates/core/tests/golden")]
    out_dir: PathBuf,
}

fn rows_for(lambda: f64, exponent: u32) -> Vec<Vec<Cell>> {
    let n = 10u64.pow(exponent);
    let point = GridPoint::from_count(n);
    let inst = ProblemInstance::from_count(lambda, n).expect("valid instance");
    let k_max = maxdist::mode(&inst).expect("scan window").scan_hi;
    oracle_log_max_pmf_row(lambda, n, k_max)
        .into_iter()
        .enumerate()
        .map(|(k, ln_p)| {
            vec![
                Cell::Real(lambda),
                Cell::Real(point.log10_n),
                Cell::Int(k as u64),
                Cell::Real(ln_p.exp().to_f64()),
                Cell::Real(ln_p.to_f64()),
            ]
        })
        .collect()
}

fn main() -> std::io::Result<()> {
    let args = Args::parse();
    std::fs::create_dir_all(&args.out_dir)?;
    for (lambda, tag) in LAMBDAS {
        let blocks: Vec<Vec<Vec<Cell>>> = EXPONENTS.par_iter().map(|&e| rows_for(lambda, e)).collect();
        let table = SweepTable {
            columns: vec!["lambda", "log10_n", "k", "pmf", "log_pmf"],
            rows: blocks.into_iter().flatten().collect(),
        };
        let path = args.out_dir.join(format!("dist_lambda_{tag}.csv"));
        std::fs::write(&path, table.to_csv())?;
        eprintln!("wrote {} ({} rows)", path.display(), table.rows.len());
    }
    Ok(())
}
