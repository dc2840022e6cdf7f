//! Dehn-twist word calculus on a surface with a declared curve system.

mod chart;
mod rewrite;
mod symplectic;
mod word;

pub use chart::{
    builtin_chart, chart_from_toml, lantern_chart, lantern_tower, lantern_tower_word,
    standard_chart, CurveData, SurfaceChart,
};
pub use symplectic::{pairing, SymplecticMatrix};
pub use word::TwistWord;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum McgError {
    #[error("unknown curve {curve:?}")]
    UnknownCurve { curve: String },
    #[error("invalid chart: {reason}")]
    InvalidChart { reason: String },
    #[error("exponent {exponent} on curve {curve:?} is too large to split into single twists")]
    ExponentTooLarge { curve: String, exponent: i64 },
    #[error("cannot parse twist word from {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn homology_action_is_a_homomorphism() {
        let chart = lantern_chart();
        let names: Vec<&str> = chart.curve_names().collect();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let mut make = |max_len: usize| {
                let len = rng.gen_range(0..=max_len);
                TwistWord::from_letters(
                    (0..len)
                        .map(|_| {
                            let name = names[rng.gen_range(0..names.len())].to_string();
                            (name, if rng.gen_bool(0.5) { 1 } else { -1 })
                        })
                        .collect::<Vec<_>>(),
                )
            };
            let w1 = make(6);
            let w2 = make(6);
            let lhs = chart.homology_action(&w1.concat(&w2)).unwrap();
            let rhs = chart
                .homology_action(&w1)
                .unwrap()
                .mul(&chart.homology_action(&w2).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn empty_word_acts_trivially() {
        let chart = lantern_chart();
        assert_eq!(
            chart.homology_action(&TwistWord::empty()).unwrap(),
            SymplecticMatrix::identity(3)
        );
    }

    #[test]
    fn transvections_are_symplectic() {
        let chart = lantern_chart();
        for name in chart.curve_names() {
            for e in [-2, -1, 1, 3] {
                assert!(chart.transvection(name, e).unwrap().is_symplectic());
            }
        }
    }
}
