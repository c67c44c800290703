//! Bounds on the number of δ-classes over a schedule of δ, and the fitted
//! exponent next to the predicted one.
//!
//! cargo run --release --example h_bracket_fit -- strong_separation 9 1 5 2 2

use bmcarpet::carpet::predicted_exponent;
use bmcarpet::connectivity::infer_component_cardinality;
use bmcarpet::corpus;
use bmcarpet::gaps::{collect_samples, fit_h_exponent, SampleSchedule};
use bmcarpet::grid::Caps;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let name = args.first().map_or("strong_separation", String::as_str);
    let num = |i: usize, default: u64| args.get(i).map_or(default, |s| s.parse().expect("integer"));
    let schedule = SampleSchedule {
        base: num(1, 9),
        k_min: num(2, 1) as u32,
        k_max: num(3, 5) as u32,
        level_scale: num(4, 2) as u32,
        level_offset: num(5, 2) as u32,
    };
    let ds = corpus::load(name).expect("corpus name");
    let caps = Caps::with_max_cells(200_000_000);
    let samples = collect_samples(&ds, &schedule, &caps).expect("levels within cap");
    println!("delta       L   h_low  h_high  tight");
    for b in &samples {
        println!("{:<10} {:>2} {:>7} {:>7}  {}", b.delta.to_string(), b.level, b.h_low, b.h_high, b.is_tight());
    }
    let cls = ds.classify();
    let verdict = infer_component_cardinality(&ds, &cls, 3, &caps).verdict;
    match fit_h_exponent(&samples, Some(predicted_exponent(&cls, &ds, verdict))) {
        Ok(r) => println!(
            "fitted {:.6} ± {:.6}, predicted {:?}, relative error {:?}",
            r.fitted_gamma, r.stderr, r.predicted.gamma, r.relative_error
        ),
        Err(e) => println!("no fit: {e}"),
    }
}
