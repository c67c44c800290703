//! `#C(Q_k)` for increasing k, with vertical/horizontal component counts.

use bmcarpet::connectivity::{count_components, Domain};
use bmcarpet::corpus;
use bmcarpet::grid::Caps;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "e3_standin".into());
    let k_max: u32 = std::env::args().nth(2).map_or(6, |s| s.parse().expect("level"));
    let ds = corpus::load(&name).expect("corpus name");
    let caps = Caps::default();
    println!("k  components  vertical  horizontal  cells");
    for k in 1..=k_max {
        match count_components(&ds, k, Domain::Plain, &caps) {
            Ok(s) => println!(
                "{k:<2} {:>10} {:>9} {:>11} {:>6}",
                s.component_count, s.vertical_components, s.horizontal_components, s.occupied_cells
            ),
            Err(e) => {
                println!("{k:<2} stopped: {e}");
                break;
            }
        }
    }
}
