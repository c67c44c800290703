//! Side-by-side report for two carpets.

use bmcarpet::corpus;
use bmcarpet::grid::Caps;
use bmcarpet::theory::lipschitz_report;

fn main() {
    let a = std::env::args().nth(1).unwrap_or_else(|| "d1".into());
    let b = std::env::args().nth(2).unwrap_or_else(|| "d2".into());
    let (da, db) = (corpus::load(&a).expect("corpus name"), corpus::load(&b).expect("corpus name"));
    let r = lipschitz_report(&da, &db, 4, &Caps::default());
    println!(
        "box dimension      {:.12} {:.12} witness {:?}",
        r.a.box_dimension, r.b.box_dimension, r.box_dimension_witness
    );
    println!(
        "Hausdorff dimension {:.12} {:.12} witness {:?}",
        r.a.hausdorff_dimension, r.b.hausdorff_dimension, r.hausdorff_dimension_witness
    );
    println!("full rows          {:?}", r.full_rows);
    println!("cardinality        {:?} {:?}", r.a.cardinality.verdict, r.b.cardinality.verdict);
    println!("exponents          {:?} {:?}", r.a.predicted.gamma, r.b.predicted.gamma);
    println!("verdict            {:?} ({})", r.comparability.verdict, r.comparability.basis);
    println!("{}", r.conclusion);
}
