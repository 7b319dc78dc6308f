//! Library-level census run for the larger fields that sit behind the CLI's
//! --deep flag. Prints one line per (q, m) row.
//!
//!     cargo run --release -p peisert-core --example deep_census

use std::sync::Arc;
use std::time::Instant;

use peisert_core::classify::census;
use peisert_core::fields::make_tower;
use peisert_core::plane::TowerBasis;

fn main() {
    for (p, n, label) in [(2u32, 4u32, "q=16"), (17, 1, "q=17")] {
        let start = Instant::now();
        let basis = TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap();
        let q = basis.q();
        let rows = census(&basis, 3..=q - 2, None).unwrap();
        for r in &rows {
            println!(
                "{label} m={} graphs={} strict={} without={} undecided={}",
                r.m, r.graphs, r.strict_ekr, r.without, r.undecided
            );
        }
        println!("{label} census took {:?}", start.elapsed());
    }
}
