//! Gap sequence of `Q_k` against the Cantor reference values.

use bmcarpet::corpus;
use bmcarpet::gaps::{cantor_gap_reference, component_gap_sequence};
use bmcarpet::grid::Caps;

fn main() {
    let k: u32 = std::env::args().nth(1).map_or(6, |s| s.parse().expect("level"));
    let ds = corpus::load("cantor_product").unwrap();
    let gaps = component_gap_sequence(&ds, k, &Caps::default()).expect("within caps");
    let reference = cantor_gap_reference(3, 2, k).unwrap();
    println!("{:>12} {:>6} {:>12} {:>6}", "level gap", "mult", "limit", "mult");
    for (g, r) in gaps.entries.iter().zip(&reference.entries) {
        println!("{:>12} {:>6} {:>12} {:>6}", g.value.to_string(), g.multiplicity, r.value.to_string(), r.multiplicity);
    }
    println!("h(0) = {}", gaps.step_function().last().unwrap().1);
}
