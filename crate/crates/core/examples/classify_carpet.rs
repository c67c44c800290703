//! Classification and dimensions of a digit set.
//!
//! cargo run --example classify_carpet -- [corpus name or JSON path]

use bmcarpet::carpet::DigitSet;
use bmcarpet::corpus;

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "d1".into());
    let ds = corpus::load(&arg).unwrap_or_else(|| DigitSet::from_path(&arg).expect("readable digit set"));
    let c = ds.classify();
    println!("n = {}, m = {}, N = {}, M = {}", ds.n(), ds.m(), c.digit_count, c.nonempty_rows);
    println!("row counts {:?}, empty rows {:?}", c.row_counts, c.empty_rows);
    println!("linear: {:?}", c.linearity);
    println!("one-sided: {:?}", c.one_sided);
    println!("full rows: {}", c.has_full_rows);
    println!("box dimension {:.12}", ds.box_dimension());
    println!("Hausdorff dimension {:.12}", ds.hausdorff_dimension());
}
