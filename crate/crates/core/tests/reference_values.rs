use bmcarpet::carpet::DigitSet;
use bmcarpet::connectivity::{count_components, find_csc_certificate, verify_certificate, Domain};
use bmcarpet::corpus;
use bmcarpet::gaps::{h_bracket, liberal_reach, Rational};
use bmcarpet::grid::{occupied_count, Caps, LevelSize};
use bmcarpet::oracle;

#[test]
fn parse_rejections() {
    assert!(DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0]]}"#).is_err());
    assert!(DigitSet::from_json(r#"{"n":3,"m":4,"digits":[[0,0],[1,1]]}"#).is_err());
    assert!(DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0],[0,0]]}"#).is_err());
    assert!(DigitSet::from_json(r#"{"n":3,"m":2,"digits":[[0,0],[3,0]]}"#).is_err());
    assert!(DigitSet::from_json(r#"{"n":3,"m":2,"#).is_err());
}

#[test]
fn d1_levels() {
    let d1 = corpus::load("d1").unwrap();
    let caps = Caps::default();
    let plain = count_components(&d1, 1, Domain::Plain, &caps).unwrap();
    assert_eq!(plain.component_count, 6);
    assert_eq!(count_components(&d1, 1, Domain::Tilde, &caps).unwrap().occupied_cells, 72);
    assert_eq!(occupied_count(&d1, 2), 64);
    let cert = find_csc_certificate(&d1, 5, &caps).unwrap().unwrap();
    assert!(verify_certificate(&d1, &cert));
    assert!(!oracle::has_csc_brute(&d1, 1) && oracle::has_csc_brute(&d1, 2));
}

#[test]
fn strong_separation_bracket_matches_closure() {
    let ds = corpus::load("strong_separation").unwrap();
    let delta = Rational::new(1, 7);
    let b = h_bracket(&ds, 3, &delta, &Caps::default()).unwrap();
    let cells = oracle::cells_by_words(&ds, 3);
    let r = liberal_reach(&delta, &LevelSize::new(&ds, 3).unwrap());
    assert_eq!(b.h_low, oracle::closure_count(&cells, r.dx, r.dy));
    assert!(b.h_low <= b.h_high && b.h_high <= 8);
}

#[test]
fn streaming_matches_flood_fill_on_corpus() {
    for (name, ds) in corpus::all() {
        for k in 1..=3 {
            if occupied_count(&ds, k) > 20_000 {
                break;
            }
            let cells = oracle::cells_by_words(&ds, k);
            let streamed = count_components(&ds, k, Domain::Plain, &Caps::default()).unwrap();
            assert_eq!(streamed.component_count, oracle::flood_fill_count(&cells), "{name} k={k}");
            assert_eq!(streamed.occupied_cells, cells.len() as u64);
        }
    }
}

#[test]
fn deeper_levels_never_loosen_brackets() {
    for (name, ds) in corpus::all() {
        for delta in [Rational::new(1, 2), Rational::new(1, 9), Rational::new(1, 27)] {
            // a trivial h_high is not a bound, so only real ones are compared
            let (mut low, mut high) = (0, u64::MAX);
            for level in 1..=8 {
                if occupied_count(&ds, level) > 2_000_000 {
                    break;
                }
                let b = h_bracket(&ds, level, &delta, &Caps::default()).unwrap();
                assert!(b.h_low >= low, "{name} δ={delta} L={level}");
                low = b.h_low;
                if !b.high_is_trivial {
                    assert!(b.h_high <= high && b.h_low <= b.h_high, "{name} δ={delta} L={level}");
                    high = b.h_high;
                }
            }
        }
    }
}
