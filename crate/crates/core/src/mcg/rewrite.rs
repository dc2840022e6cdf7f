//! Confluent-enough word rewriting over a chart.
//!
//! Three rule families, applied to a fixpoint:
//!
//! 1. free cancellation — adjacent letters about the same curve merge, zero
//!    exponents vanish;
//! 2. commutation — adjacent letters about declared-disjoint curves are
//!    normal-ordered under the lexicographic order on curve names;
//! 3. lantern substitution — a literal occurrence of one side of a declared
//!    lantern relation (or of its inverse) may be replaced by the other side,
//!    and the replacement is kept only when the renormalized word gets
//!    strictly shorter.
//!
//! Rule 3's shrinking requirement gives termination without a confluence
//! proof; rules 1–2 terminate because each pass either shortens the word or
//! lowers its inversion count. The result is deterministic (fixed scan order)
//! and idempotent, and every rule preserves the homology action, so
//! `rho(reduce(w)) = rho(w)` always holds.

use super::chart::{lantern_lhs, lantern_rhs, SurfaceChart};
use super::word::TwistWord;
use super::McgError;

type Letters = Vec<(String, i64)>;

impl SurfaceChart {
    /// Rewrites `word` to an equal mapping class in as few letters as the
    /// rule set reaches. Errors only on letters naming unknown curves.
    pub fn reduce(&self, word: &TwistWord) -> Result<TwistWord, McgError> {
        self.check_word(word)?;
        let mut current = normalize(self, word.letters().to_vec());
        let rules = self.lantern_rules();
        while let Some(shorter) = first_shrinking_substitution(self, &current, &rules) {
            current = shorter;
        }
        Ok(TwistWord::from_letters(current))
    }

    fn lantern_rules(&self) -> Vec<(Letters, Letters)> {
        let mut rules = Vec::new();
        for tuple in self.lanterns() {
            let lhs = lantern_lhs(tuple).letters().to_vec();
            let rhs = lantern_rhs(tuple).letters().to_vec();
            let lhs_inv = invert(&lhs);
            let rhs_inv = invert(&rhs);
            rules.push((lhs.clone(), rhs.clone()));
            rules.push((rhs, lhs));
            rules.push((lhs_inv.clone(), rhs_inv.clone()));
            rules.push((rhs_inv, lhs_inv));
        }
        rules
    }
}

fn invert(letters: &Letters) -> Letters {
    letters.iter().rev().map(|(c, e)| (c.clone(), -e)).collect()
}

/// Fixpoint of cancellation and normal-ordering.
fn normalize(chart: &SurfaceChart, mut letters: Letters) -> Letters {
    loop {
        let mut changed = merge_pass(&mut letters);
        changed |= bubble_pass(chart, &mut letters);
        if !changed {
            return letters;
        }
    }
}

fn merge_pass(letters: &mut Letters) -> bool {
    let mut changed = false;
    let mut merged: Letters = Vec::with_capacity(letters.len());
    for (c, e) in letters.drain(..) {
        if e == 0 {
            changed = true;
            continue;
        }
        match merged.last_mut() {
            Some(last) if last.0 == c => {
                last.1 += e;
                changed = true;
                if last.1 == 0 {
                    merged.pop();
                }
            }
            _ => merged.push((c, e)),
        }
    }
    *letters = merged;
    changed
}

/// One left-to-right pass swapping out-of-order adjacent letters whose curves
/// are declared disjoint. Letters about non-disjoint curves never move past
/// each other.
fn bubble_pass(chart: &SurfaceChart, letters: &mut Letters) -> bool {
    let mut changed = false;
    if letters.is_empty() {
        return false;
    }
    for i in 0..letters.len() - 1 {
        let (x, y) = (&letters[i].0, &letters[i + 1].0);
        if x > y && chart.is_disjoint(x, y) {
            letters.swap(i, i + 1);
            changed = true;
        }
    }
    changed
}

/// Scans rules then positions; returns the first substitution whose
/// renormalized result is strictly shorter than the current word.
fn first_shrinking_substitution(
    chart: &SurfaceChart,
    current: &Letters,
    rules: &[(Letters, Letters)],
) -> Option<Letters> {
    for (pattern, replacement) in rules {
        if pattern.len() > current.len() {
            continue;
        }
        for start in 0..=current.len() - pattern.len() {
            if current[start..start + pattern.len()] == pattern[..] {
                let mut candidate: Letters =
                    Vec::with_capacity(current.len() - pattern.len() + replacement.len());
                candidate.extend_from_slice(&current[..start]);
                candidate.extend(replacement.iter().cloned());
                candidate.extend_from_slice(&current[start + pattern.len()..]);
                let candidate = normalize(chart, candidate);
                if candidate.len() < current.len() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::chart::{lantern_chart, lantern_tower, standard_chart};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn w(text: &str) -> TwistWord {
        TwistWord::parse_text(text).unwrap()
    }

    fn random_word(chart: &SurfaceChart, rng: &mut StdRng, max_len: usize) -> TwistWord {
        let names: Vec<&str> = chart.curve_names().collect();
        let len = rng.gen_range(0..=max_len);
        let mut letters = Vec::new();
        for _ in 0..len {
            let name = names[rng.gen_range(0..names.len())];
            let mut e = 0;
            while e == 0 {
                e = rng.gen_range(-3..=3);
            }
            letters.push((name.to_string(), e));
        }
        TwistWord::from_letters(letters)
    }

    #[test]
    fn free_cancellation() {
        let chart = lantern_chart();
        assert!(chart.reduce(&w("f_alpha^2.f_alpha^-2")).unwrap().is_empty());
        assert_eq!(
            chart.reduce(&TwistWord::empty()).unwrap(),
            TwistWord::empty()
        );
        assert!(chart.reduce(&w("f_missing")).is_err());
    }

    #[test]
    fn top_tower_word_reduces_to_identity() {
        let chart = lantern_chart();
        let theta_top = lantern_tower()[0].clone();
        assert!(chart.reduce(&theta_top).unwrap().is_empty());
        // and so does its inverse, which needs the inverse lantern pattern
        assert!(chart.reduce(&theta_top.inverse()).unwrap().is_empty());
    }

    #[test]
    fn commutation_moves_disjoint_letters_only() {
        let chart = lantern_chart();
        // "4" < "alpha" lexicographically and they are disjoint
        let reduced = chart.reduce(&w("f_alpha.f_4")).unwrap();
        assert_eq!(reduced, w("f_4.f_alpha"));
        // alpha/beta are not disjoint: order preserved even though beta < gamma etc.
        let reduced = chart.reduce(&w("f_beta.f_alpha")).unwrap();
        assert_eq!(reduced, w("f_beta.f_alpha"));
    }

    #[test]
    fn commutation_enables_distant_cancellation() {
        let chart = lantern_chart();
        // the ε-letters commute past the greek ones to meet and cancel
        let word = w("f_1.f_alpha.f_1^-1");
        assert_eq!(chart.reduce(&word).unwrap(), w("f_alpha"));
    }

    #[test]
    fn reduce_never_swaps_non_disjoint_pairs() {
        // on a chart with an empty disjointness relation reduction is exactly
        // merge-normalization
        let chart = standard_chart(1);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let word = random_word(&chart, &mut rng, 8);
            assert_eq!(chart.reduce(&word).unwrap(), word);
        }
    }

    #[test]
    fn reduce_preserves_homology_action() {
        let chart = lantern_chart();
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..300 {
            let word = random_word(&chart, &mut rng, 12);
            let reduced = chart.reduce(&word).unwrap();
            assert_eq!(
                chart.homology_action(&reduced).unwrap(),
                chart.homology_action(&word).unwrap(),
                "homology action changed while reducing {word}"
            );
        }
    }

    #[test]
    fn reduce_is_idempotent() {
        let chart = lantern_chart();
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..200 {
            let word = random_word(&chart, &mut rng, 12);
            let once = chart.reduce(&word).unwrap();
            assert_eq!(chart.reduce(&once).unwrap(), once);
        }
    }

    #[test]
    fn lantern_substitution_shrinks_mixed_words() {
        let chart = lantern_chart();
        // γβα followed by the inverse of the ε-side collapses entirely
        let word = w("f_gamma.f_beta.f_alpha.f_4^-1.f_3^-1.f_2^-1.f_1^-1");
        assert!(chart.reduce(&word).unwrap().is_empty());
        // substitution that would merely grow the word is not kept
        let word = w("f_gamma.f_beta.f_alpha");
        assert_eq!(chart.reduce(&word).unwrap().len(), 3);
    }

    #[test]
    fn inverse_pairs_always_cancel() {
        let chart = lantern_chart();
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..200 {
            let word = random_word(&chart, &mut rng, 10);
            assert!(chart
                .reduce(&word.concat(&word.inverse()))
                .unwrap()
                .is_empty());
        }
    }
}
