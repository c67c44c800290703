//! The shipped digit sets, embedded so tests and examples need no paths.
//!
//! `e1_standin`, `e2_standin` and `e3_standin` are reconstructions with the
//! same `n`, `m`, `N`, `M` and linearity as the three carpets of the usual
//! `n = 7`, `m = 3` illustration, whose exact digits are only drawn.

use crate::carpet::DigitSet;

pub const NAMES: [&str; 8] =
    ["d1", "d2", "cantor_product", "e1_standin", "e2_standin", "e3_standin", "strong_separation", "full_square"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "d1" => include_str!("../corpus/d1.json"),
        "d2" => include_str!("../corpus/d2.json"),
        "cantor_product" => include_str!("../corpus/cantor_product.json"),
        "e1_standin" => include_str!("../corpus/e1_standin.json"),
        "e2_standin" => include_str!("../corpus/e2_standin.json"),
        "e3_standin" => include_str!("../corpus/e3_standin.json"),
        "strong_separation" => include_str!("../corpus/strong_separation.json"),
        "full_square" => include_str!("../corpus/full_square.json"),
        _ => return None,
    })
}

/// Parsed corpus entry; panics only if a shipped file is malformed.
pub fn load(name: &str) -> Option<DigitSet> {
    source(name).map(|text| DigitSet::from_json(text).unwrap_or_else(|e| panic!("corpus {name}: {e}")))
}

pub fn all() -> Vec<(&'static str, DigitSet)> {
    NAMES.iter().map(|&name| (name, load(name).expect("listed"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        let all = all();
        assert_eq!(all.len(), NAMES.len());
        assert!(load("missing").is_none());
        let d2 = load("d2").unwrap().classify();
        assert_eq!((d2.digit_count, d2.nonempty_rows), (12, 2));
        for name in ["e1_standin", "e2_standin", "e3_standin"] {
            let ds = load(name).unwrap();
            assert_eq!((ds.n(), ds.m(), ds.len()), (7, 3, 6));
        }
        assert_eq!(load("e2_standin").unwrap().classify().nonempty_rows, 2);
        assert!(load("e3_standin").unwrap().classify().is_linear);
        assert!(!load("e1_standin").unwrap().classify().is_linear);
    }
}
