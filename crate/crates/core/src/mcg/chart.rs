//! Declared curve systems on closed orientable surfaces.
//!
//! A chart lists named simple closed curves with their homology classes in a
//! fixed symplectic basis, a disjointness relation, and any lantern
//! configurations among the curves. Geometric intersection numbers are not
//! modeled; commutation in word rewriting fires exactly on declared-disjoint
//! pairs, and all algebraic checks go through the homology pairing.

use super::symplectic::{pairing, SymplecticMatrix};
use super::word::TwistWord;
use super::McgError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Homological data of one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub homology: Vec<i64>,
    pub separating: bool,
}

/// Curve system on a genus-g surface.
///
/// Invariants, checked at construction: every name referenced by the
/// disjointness relation or a lantern tuple exists; declared-disjoint pairs
/// pair to zero in homology; separating curves carry the zero class and
/// non-separating curves a primitive nonzero class; in each lantern tuple
/// `(α, β, γ, ε1..ε4)` every ε is disjoint from the six other members and the
/// tuple satisfies the homological shadow of the lantern relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceChart {
    genus: usize,
    curves: BTreeMap<String, CurveData>,
    disjoint: BTreeSet<(String, String)>,
    lanterns: Vec<[String; 7]>,
}

impl SurfaceChart {
    pub fn new(
        genus: usize,
        curves: BTreeMap<String, CurveData>,
        disjoint_pairs: Vec<(String, String)>,
        lanterns: Vec<[String; 7]>,
    ) -> Result<Self, McgError> {
        if genus == 0 {
            return Err(McgError::InvalidChart {
                reason: "genus must be at least 1".into(),
            });
        }
        let dim = 2 * genus;
        // keeps every downstream pairing and gcd far from integer limits
        const MAX_ENTRY: i64 = 1 << 40;
        for (name, data) in &curves {
            if data.homology.len() != dim {
                return Err(McgError::InvalidChart {
                    reason: format!(
                        "curve {name:?} has homology vector of length {}, expected {dim}",
                        data.homology.len()
                    ),
                });
            }
            if data
                .homology
                .iter()
                .any(|&x| x.checked_abs().is_none_or(|a| a > MAX_ENTRY))
            {
                return Err(McgError::InvalidChart {
                    reason: format!("curve {name:?} has a homology coordinate beyond ±2^40"),
                });
            }
            let zero = data.homology.iter().all(|&x| x == 0);
            if data.separating && !zero {
                return Err(McgError::InvalidChart {
                    reason: format!("separating curve {name:?} has nonzero homology class"),
                });
            }
            if !data.separating {
                let gcd = data
                    .homology
                    .iter()
                    .fold(0i64, |acc, &x| num_integer::gcd(acc, x));
                if gcd != 1 {
                    return Err(McgError::InvalidChart {
                        reason: format!(
                            "non-separating curve {name:?} must have a primitive nonzero class"
                        ),
                    });
                }
            }
        }

        let mut disjoint = BTreeSet::new();
        for (x, y) in disjoint_pairs {
            if x == y {
                return Err(McgError::InvalidChart {
                    reason: format!("curve {x:?} declared disjoint from itself"),
                });
            }
            for n in [&x, &y] {
                if !curves.contains_key(n) {
                    return Err(McgError::UnknownCurve { curve: n.clone() });
                }
            }
            let cx = &curves[&x].homology;
            let cy = &curves[&y].homology;
            if pairing(cx, cy) != 0 {
                return Err(McgError::InvalidChart {
                    reason: format!(
                        "curves {x:?} and {y:?} are declared disjoint but pair to {}",
                        pairing(cx, cy)
                    ),
                });
            }
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            disjoint.insert((lo, hi));
        }

        let chart = SurfaceChart {
            genus,
            curves,
            disjoint,
            lanterns,
        };
        for tuple in &chart.lanterns {
            chart.validate_lantern(tuple)?;
        }
        Ok(chart)
    }

    fn validate_lantern(&self, tuple: &[String; 7]) -> Result<(), McgError> {
        for n in tuple {
            if !self.curves.contains_key(n) {
                return Err(McgError::UnknownCurve { curve: n.clone() });
            }
        }
        let set: BTreeSet<&String> = tuple.iter().collect();
        if set.len() != 7 {
            return Err(McgError::InvalidChart {
                reason: format!("lantern tuple {tuple:?} repeats a curve"),
            });
        }
        // each ε_i must be disjoint from the other six members
        for eps in &tuple[3..] {
            for other in tuple.iter().filter(|o| *o != eps) {
                if !self.is_disjoint(eps, other) {
                    return Err(McgError::InvalidChart {
                        reason: format!(
                            "lantern curve {eps:?} is not declared disjoint from {other:?}"
                        ),
                    });
                }
            }
        }
        // homological shadow of the relation; a genuine lantern always
        // satisfies this, and soundness of lantern rewriting depends on it
        let lhs = self.homology_action(&lantern_lhs(tuple))?;
        let rhs = self.homology_action(&lantern_rhs(tuple))?;
        if lhs != rhs {
            return Err(McgError::InvalidChart {
                reason: format!("lantern tuple {tuple:?} fails its homological identity"),
            });
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn curve(&self, name: &str) -> Option<&CurveData> {
        self.curves.get(name)
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn curve_names(&self) -> impl Iterator<Item = &str> {
        self.curves.keys().map(String::as_str)
    }

    pub fn is_disjoint(&self, x: &str, y: &str) -> bool {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        self.disjoint.contains(&(lo.to_string(), hi.to_string()))
    }

    pub fn disjoint_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.disjoint.iter().map(|(x, y)| (x.as_str(), y.as_str()))
    }

    pub fn lanterns(&self) -> &[[String; 7]] {
        &self.lanterns
    }

    /// Homological action of a single twist: the transvection along the
    /// curve's class, to the given power. Separating curves act trivially.
    pub fn transvection(&self, curve: &str, exponent: i64) -> Result<SymplecticMatrix, McgError> {
        let data = self.curve(curve).ok_or_else(|| McgError::UnknownCurve {
            curve: curve.to_string(),
        })?;
        Ok(SymplecticMatrix::transvection(&data.homology, exponent))
    }

    /// Homological action of a word: ordered product of transvections,
    /// leftmost letter first. This representation is a necessary-condition
    /// oracle only; it is not faithful.
    pub fn homology_action(&self, word: &TwistWord) -> Result<SymplecticMatrix, McgError> {
        let mut m = SymplecticMatrix::identity(self.genus);
        for (curve, exponent) in word.letters() {
            m = m.mul(&self.transvection(curve, *exponent)?);
        }
        Ok(m)
    }

    pub fn check_word(&self, word: &TwistWord) -> Result<(), McgError> {
        for (curve, _) in word.letters() {
            if !self.curves.contains_key(curve) {
                return Err(McgError::UnknownCurve {
                    curve: curve.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Left side `f_γ·f_β·f_α` of the lantern relation for a tuple.
pub(crate) fn lantern_lhs(tuple: &[String; 7]) -> TwistWord {
    TwistWord::from_letters([
        (tuple[2].clone(), 1),
        (tuple[1].clone(), 1),
        (tuple[0].clone(), 1),
    ])
}

/// Right side `f_1·f_2·f_3·f_4` of the lantern relation for a tuple.
pub(crate) fn lantern_rhs(tuple: &[String; 7]) -> TwistWord {
    TwistWord::from_letters([
        (tuple[3].clone(), 1),
        (tuple[4].clone(), 1),
        (tuple[5].clone(), 1),
        (tuple[6].clone(), 1),
    ])
}

/// Genus-3 chart carrying the seven lantern curves.
///
/// The surface is the double of the thrice-punctured disk. The four curves
/// `1..4` double the boundary circles; `alpha`, `beta`, `gamma` each encircle
/// two of the holes. In the symplectic basis the ε-classes span an isotropic
/// subspace: `[ε_i] = a_i` for i = 1..3, `[ε_4] = −(a_1+a_2+a_3)`, and
/// `[α] = a_1+a_2`, `[β] = a_2+a_3`, `[γ] = a_1+a_3`. All eighteen declared
/// disjointness pairings vanish, and the homological lantern identity holds
/// exactly (checked at construction).
pub fn lantern_chart() -> SurfaceChart {
    let c = |v: [i64; 6]| CurveData {
        homology: v.to_vec(),
        separating: false,
    };
    let mut curves = BTreeMap::new();
    curves.insert("1".to_string(), c([1, 0, 0, 0, 0, 0]));
    curves.insert("2".to_string(), c([0, 1, 0, 0, 0, 0]));
    curves.insert("3".to_string(), c([0, 0, 1, 0, 0, 0]));
    curves.insert("4".to_string(), c([-1, -1, -1, 0, 0, 0]));
    curves.insert("alpha".to_string(), c([1, 1, 0, 0, 0, 0]));
    curves.insert("beta".to_string(), c([0, 1, 1, 0, 0, 0]));
    curves.insert("gamma".to_string(), c([1, 0, 1, 0, 0, 0]));

    let eps = ["1", "2", "3", "4"];
    let mut disjoint = Vec::new();
    for (i, e) in eps.iter().enumerate() {
        for f in &eps[i + 1..] {
            disjoint.push((e.to_string(), f.to_string()));
        }
        for x in ["alpha", "beta", "gamma"] {
            disjoint.push((e.to_string(), x.to_string()));
        }
    }

    let lantern = [
        "alpha".to_string(),
        "beta".to_string(),
        "gamma".to_string(),
        "1".to_string(),
        "2".to_string(),
        "3".to_string(),
        "4".to_string(),
    ];
    SurfaceChart::new(3, curves, disjoint, vec![lantern]).expect("built-in lantern chart is valid")
}

/// Standard genus-g chart: the 2g symplectic basis curves `a1..ag`, `b1..bg`,
/// every pair disjoint except each `(ai, bi)`.
pub fn standard_chart(genus: usize) -> SurfaceChart {
    assert!(genus >= 1, "standard chart needs genus >= 1");
    let dim = 2 * genus;
    let mut curves = BTreeMap::new();
    let mut names = Vec::new();
    for i in 0..genus {
        for (prefix, idx) in [("a", i), ("b", genus + i)] {
            let mut v = vec![0i64; dim];
            v[idx] = 1;
            let name = format!("{prefix}{}", i + 1);
            curves.insert(
                name.clone(),
                CurveData {
                    homology: v,
                    separating: false,
                },
            );
            names.push(name);
        }
    }
    let mut disjoint = Vec::new();
    for (i, x) in names.iter().enumerate() {
        for y in &names[i + 1..] {
            let dual = x[1..] == y[1..] && x != y;
            if !dual {
                disjoint.push((x.clone(), y.clone()));
            }
        }
    }
    SurfaceChart::new(genus, curves, disjoint, Vec::new())
        .expect("built-in standard chart is valid")
}

/// Resolves a reserved chart name: `lantern3`, or `std<g>`.
pub fn builtin_chart(name: &str) -> Option<SurfaceChart> {
    if name == "lantern3" {
        return Some(lantern_chart());
    }
    if let Some(g) = name.strip_prefix("std") {
        if let Ok(g) = g.parse::<usize>() {
            if (1..=64).contains(&g) {
                return Some(standard_chart(g));
            }
        }
    }
    None
}

/// The descending ladder of twist words used by the lantern assembly:
/// index 0 is the seven-letter identity word
/// `f_1⁻¹·f_γ·f_2⁻¹·f_β·f_3⁻¹·f_α·f_4⁻¹`, and each following entry appends
/// one more letter of the peeling chain, down to the empty word at index 7.
/// Words are stored merged, so the appended letter cancels one letter per
/// step.
pub fn lantern_tower() -> Vec<TwistWord> {
    let top = TwistWord::from_letters([
        ("1", -1),
        ("gamma", 1),
        ("2", -1),
        ("beta", 1),
        ("3", -1),
        ("alpha", 1),
        ("4", -1),
    ]);
    let mut tower = vec![top];
    for (curve, exp) in lantern_tower_appended_letters() {
        let prev = tower.last().unwrap();
        tower.push(prev.concat(&TwistWord::letter(curve, exp)));
    }
    tower
}

/// The letters appended one at a time when descending the tower.
pub(crate) fn lantern_tower_appended_letters() -> [(&'static str, i64); 7] {
    [
        ("4", 1),
        ("alpha", -1),
        ("3", 1),
        ("beta", -1),
        ("2", 1),
        ("gamma", -1),
        ("1", 1),
    ]
}

/// Word at tower level `i` (7 down to 0): level 7 is the full identity word,
/// level 0 the empty word.
pub fn lantern_tower_word(level: u8) -> TwistWord {
    assert!(level <= 7, "tower level out of range");
    lantern_tower()[7 - level as usize].clone()
}

// Raw file/embedding form. Charts are read from TOML files and embedded in
// plan JSON with this shape; validation runs on conversion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawChart {
    pub genus: usize,
    pub curves: BTreeMap<String, CurveData>,
    #[serde(default)]
    pub disjoint: Vec<(String, String)>,
    #[serde(default)]
    pub lanterns: Vec<[String; 7]>,
}

impl TryFrom<RawChart> for SurfaceChart {
    type Error = McgError;

    fn try_from(raw: RawChart) -> Result<Self, McgError> {
        SurfaceChart::new(raw.genus, raw.curves, raw.disjoint, raw.lanterns)
    }
}

impl From<&SurfaceChart> for RawChart {
    fn from(chart: &SurfaceChart) -> RawChart {
        RawChart {
            genus: chart.genus,
            curves: chart.curves.clone(),
            disjoint: chart
                .disjoint
                .iter()
                .map(|(x, y)| (x.clone(), y.clone()))
                .collect(),
            lanterns: chart.lanterns.clone(),
        }
    }
}

impl Serialize for SurfaceChart {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawChart::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SurfaceChart {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawChart::deserialize(deserializer)?;
        SurfaceChart::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Loads a chart from TOML text.
pub fn chart_from_toml(text: &str) -> Result<SurfaceChart, McgError> {
    let raw: RawChart = toml::from_str(text).map_err(|e| McgError::Parse {
        text: "<chart file>".to_string(),
        reason: e.to_string(),
    })?;
    SurfaceChart::try_from(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn lantern_chart_shape() {
        let chart = lantern_chart();
        assert_eq!(chart.genus(), 3);
        assert_eq!(chart.curve_count(), 7);
        assert_eq!(chart.lanterns().len(), 1);
        assert_eq!(chart.disjoint_pairs().count(), 18);
    }

    #[test]
    fn lantern_disjointness_as_declared() {
        let chart = lantern_chart();
        let eps = ["1", "2", "3", "4"];
        for (i, e) in eps.iter().enumerate() {
            for f in &eps[i + 1..] {
                assert!(chart.is_disjoint(e, f));
            }
            for x in ["alpha", "beta", "gamma"] {
                assert!(chart.is_disjoint(e, x));
            }
        }
        assert!(!chart.is_disjoint("alpha", "beta"));
        assert!(!chart.is_disjoint("beta", "gamma"));
        assert!(!chart.is_disjoint("alpha", "gamma"));
    }

    #[test]
    fn lantern_homology_identity_two_routes() {
        let chart = lantern_chart();
        let tuple = &chart.lanterns()[0];

        // route 1: transvection products
        let lhs = chart.homology_action(&lantern_lhs(tuple)).unwrap();
        let rhs = chart.homology_action(&lantern_rhs(tuple)).unwrap();
        assert_eq!(lhs, rhs);

        // route 2: both sides are I + Σ c·(Jc)ᵀ because the classes span an
        // isotropic subspace, so the rank-one tensor sums must agree
        let tensor_sum = |names: &[&str]| -> Vec<BigInt> {
            let g = chart.genus();
            let n = 2 * g;
            let mut sum = vec![BigInt::from(0); n * n];
            for name in names {
                let c = &chart.curve(name).unwrap().homology;
                for i in 0..n {
                    for j in 0..n {
                        // (Jc)_j with J = [[0,I],[-I,0]]
                        let w = if j < g { c[g + j] } else { -c[j - g] };
                        sum[i * n + j] += BigInt::from(c[i] * w);
                    }
                }
            }
            sum
        };
        assert_eq!(
            tensor_sum(&["alpha", "beta", "gamma"]),
            tensor_sum(&["1", "2", "3", "4"])
        );
    }

    #[test]
    fn standard_chart_shape() {
        let chart = standard_chart(2);
        assert_eq!(chart.genus(), 2);
        assert_eq!(chart.curve_count(), 4);
        assert!(chart.is_disjoint("a1", "a2"));
        assert!(chart.is_disjoint("a1", "b2"));
        assert!(!chart.is_disjoint("a1", "b1"));
        assert!(!chart.is_disjoint("a2", "b2"));
    }

    #[test]
    fn builtin_chart_names() {
        assert!(builtin_chart("lantern3").is_some());
        assert_eq!(builtin_chart("std2").unwrap(), standard_chart(2));
        assert!(builtin_chart("std0").is_none());
        assert!(builtin_chart("nope").is_none());
    }

    #[test]
    fn tower_words_cascade() {
        let tower = lantern_tower();
        assert_eq!(tower.len(), 8);
        let expected_lens = [7, 6, 5, 4, 3, 2, 1, 0];
        for (w, len) in tower.iter().zip(expected_lens) {
            assert_eq!(w.len(), len);
        }
        assert_eq!(lantern_tower_word(7), tower[0]);
        assert_eq!(lantern_tower_word(0), TwistWord::empty());
        // the top word letter by letter
        assert_eq!(
            tower[0].letters(),
            &[
                ("1".into(), -1),
                ("gamma".into(), 1),
                ("2".into(), -1),
                ("beta".into(), 1),
                ("3".into(), -1),
                ("alpha".into(), 1),
                ("4".into(), -1),
            ]
        );
    }

    #[test]
    fn tower_raw_expansion_lengths() {
        // before merging, each level of the defining chain appends one letter:
        // lengths 7, 8, ..., 14
        let mut raw: Vec<(String, i64)> = lantern_tower()[0].letters().to_vec();
        assert_eq!(raw.len(), 7);
        for (i, (curve, exp)) in lantern_tower_appended_letters().iter().enumerate() {
            raw.push((curve.to_string(), *exp));
            assert_eq!(raw.len(), 8 + i);
        }
        assert_eq!(raw.len(), 14);
        // the fully expanded chain collapses under merging alone
        assert!(TwistWord::from_letters(raw).is_empty());
    }

    #[test]
    fn chart_validation_rejects_bad_data() {
        let c = |v: Vec<i64>, sep: bool| CurveData {
            homology: v,
            separating: sep,
        };
        // wrong vector length
        let mut curves = BTreeMap::new();
        curves.insert("x".to_string(), c(vec![1, 0], false));
        assert!(SurfaceChart::new(2, curves, vec![], vec![]).is_err());

        // separating curve with nonzero class
        let mut curves = BTreeMap::new();
        curves.insert("x".to_string(), c(vec![1, 0], true));
        assert!(SurfaceChart::new(1, curves, vec![], vec![]).is_err());

        // non-primitive class
        let mut curves = BTreeMap::new();
        curves.insert("x".to_string(), c(vec![2, 0], false));
        assert!(SurfaceChart::new(1, curves, vec![], vec![]).is_err());

        // out-of-range coordinate
        let mut curves = BTreeMap::new();
        curves.insert("x".to_string(), c(vec![1 << 41, 1], false));
        assert!(SurfaceChart::new(1, curves, vec![], vec![]).is_err());

        // disjoint pair with nonzero pairing
        let mut curves = BTreeMap::new();
        curves.insert("x".to_string(), c(vec![1, 0], false));
        curves.insert("y".to_string(), c(vec![0, 1], false));
        assert!(
            SurfaceChart::new(1, curves, vec![("x".to_string(), "y".to_string())], vec![]).is_err()
        );
    }

    #[test]
    fn chart_toml_round_trip() {
        let text = r#"
genus = 1

[curves.a1]
homology = [1, 0]
separating = false

[curves.b1]
homology = [0, 1]
separating = false
"#;
        let chart = chart_from_toml(text).unwrap();
        assert_eq!(chart.genus(), 1);
        assert_eq!(chart.curve_count(), 2);

        let json = serde_json::to_string(&lantern_chart()).unwrap();
        let back: SurfaceChart = serde_json::from_str(&json).unwrap();
        assert_eq!(back, lantern_chart());
    }

    #[test]
    fn transvection_on_separating_curve_is_identity() {
        let mut curves = BTreeMap::new();
        curves.insert(
            "a1".to_string(),
            CurveData {
                homology: vec![1, 0],
                separating: false,
            },
        );
        curves.insert(
            "s".to_string(),
            CurveData {
                homology: vec![0, 0],
                separating: true,
            },
        );
        let chart = SurfaceChart::new(1, curves, vec![], vec![]).unwrap();
        assert_eq!(
            chart.transvection("s", 3).unwrap(),
            SymplecticMatrix::identity(1)
        );
        assert!(chart.transvection("missing", 1).is_err());
    }
}
