//! Search for a component separated from the rest of the 3x3 tiling, then
//! re-check it independently.

use bmcarpet::connectivity::{find_csc_certificate, infer_component_cardinality, verify_certificate};
use bmcarpet::corpus;
use bmcarpet::grid::Caps;

fn main() {
    let caps = Caps::default();
    for name in corpus::NAMES {
        let ds = corpus::load(name).unwrap();
        let cert = find_csc_certificate(&ds, 4, &caps).expect("levels within cap");
        let verdict = infer_component_cardinality(&ds, &ds.classify(), 4, &caps).verdict;
        match cert {
            Some(c) => println!(
                "{name:<18} level {} anchor ({}, {}) cells {} verified {} -> {verdict:?}",
                c.level,
                c.anchor.x,
                c.anchor.y,
                c.cell_count,
                verify_certificate(&ds, &c)
            ),
            None => println!("{name:<18} no certificate up to level 4 -> {verdict:?}"),
        }
    }
}
