//! Writes `Q_k` as an SVG file.

use bmcarpet::corpus;
use bmcarpet::grid::{render_svg, RENDER_MAX_CELLS};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "d1".into());
    let k: u32 = std::env::args().nth(2).map_or(2, |s| s.parse().expect("level"));
    let ds = corpus::load(&name).expect("corpus name");
    let svg = render_svg(&ds, k, RENDER_MAX_CELLS).expect("small enough to draw");
    let path = format!("{name}_k{k}.svg");
    std::fs::write(&path, svg).expect("writable directory");
    println!("wrote {path}");
}
