//! Regenerates the shipped order-≤2 weight table.
//!
//! ```text
//! cargo run --release -p defq-core --example build_weight_table -- [samples] [out.json]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use defq::graphs::enumerate;
use defq::weights::{snap, weight_mc, WeightTable};

const MAX_DENOMINATOR: u64 = 24;
const SEED: u64 = 20240607;

fn main() -> defq::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args.next().map(|s| s.parse().expect("sample count")).unwrap_or(4_000_000);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/weights_order2.json")));

    let mut table = WeightTable::new();
    for n in 0..=2 {
        for g in enumerate(n, 2, 2)? {
            if g.has_parallel_edges() {
                continue;
            }
            let t = Instant::now();
            let est = weight_mc(&g, samples, SEED)?;
            let snapped = snap(&est, MAX_DENOMINATOR);
            eprintln!(
                "{:<24} {:>+.6} ± {:.1e}  -> {:>6}  ({:.1?})",
                est.graph.as_str(),
                est.mean,
                est.stderr,
                snapped.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "none".into()),
                t.elapsed()
            );
            table.insert(&est, snapped);
        }
    }
    table.save(&out)?;
    eprintln!("wrote {} entries to {}", table.len(), out.display());
    Ok(())
}
