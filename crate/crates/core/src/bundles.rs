//! Oriented boundary labels for blocks and the gluing matcher.
//!
//! A block's boundary list already encodes outward orientation: the component
//! written with inverted monodromy is the orientation-reversed copy. A gluing
//! between two slots is valid when one label is the monodromy-inverse of the
//! other, witnessed at one of three strengths:
//!
//! - exact — literal matrix/word inverse,
//! - reduces/conjugate — certified by the rewriting engine or by an explicit
//!   conjugating word (still exact),
//! - homological — conjugate only in the symplectic representation, which is
//!   unfaithful; accepted but flagged as a necessary condition, never as a
//!   homeomorphism certificate.

use crate::mcg::{builtin_chart, SurfaceChart, SymplecticMatrix, TwistWord};
use crate::sl2z::{Mat2, TorusTwistWord};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Fiber of a product bundle: a standard genus, or an opaque surface name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberDesc {
    Genus(usize),
    Named(String),
}

impl fmt::Display for FiberDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberDesc::Genus(g) => write!(f, "genus{g}"),
            FiberDesc::Named(n) => write!(f, "{n}"),
        }
    }
}

/// Oriented boundary component of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldLabel {
    /// Torus bundle over the circle; words are evaluated to a matrix on
    /// construction so equality is decidable.
    Torus { matrix: Mat2 },
    /// Surface bundle over the circle with fiber described by a chart.
    Surface { chart: String, word: TwistWord },
    /// `F × S¹`, the bundle with identity monodromy.
    Product { fiber: FiberDesc },
    /// A named 3-manifold with no stored structure; orientation is carried by
    /// an explicit sign.
    Opaque { name: String, sign: i8 },
}

impl ManifoldLabel {
    pub fn torus(matrix: Mat2) -> Self {
        ManifoldLabel::Torus { matrix }
    }

    pub fn surface(chart: impl Into<String>, word: TwistWord) -> Self {
        ManifoldLabel::Surface {
            chart: chart.into(),
            word,
        }
    }

    pub fn product(fiber: FiberDesc) -> Self {
        ManifoldLabel::Product { fiber }
    }

    pub fn opaque(name: impl Into<String>, sign: i8) -> Self {
        ManifoldLabel::Opaque {
            name: name.into(),
            sign,
        }
    }

    /// The same boundary with reversed orientation.
    pub fn inverted(&self) -> Self {
        match self {
            ManifoldLabel::Torus { matrix } => ManifoldLabel::Torus {
                matrix: matrix.inverse(),
            },
            ManifoldLabel::Surface { chart, word } => ManifoldLabel::Surface {
                chart: chart.clone(),
                word: word.inverse(),
            },
            ManifoldLabel::Product { fiber } => ManifoldLabel::Product {
                fiber: fiber.clone(),
            },
            ManifoldLabel::Opaque { name, sign } => ManifoldLabel::Opaque {
                name: name.clone(),
                sign: -sign,
            },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ManifoldLabel::Torus { .. } => "torus",
            ManifoldLabel::Surface { .. } => "surface",
            ManifoldLabel::Product { .. } => "product",
            ManifoldLabel::Opaque { .. } => "opaque",
        }
    }
}

impl fmt::Display for ManifoldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldLabel::Torus { matrix } => write!(f, "T2{matrix}"),
            ManifoldLabel::Surface { chart, word } => write!(f, "Sigma[{chart}:{word}]"),
            ManifoldLabel::Product { fiber } => write!(f, "Prod[{fiber}]"),
            ManifoldLabel::Opaque { name, sign } => {
                write!(f, "Opaque[{name},{}]", if *sign >= 0 { "+" } else { "-" })
            }
        }
    }
}

/// Named boundary slot of a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySlot {
    pub id: String,
    pub label: ManifoldLabel,
}

impl BoundarySlot {
    pub fn new(id: impl Into<String>, label: ManifoldLabel) -> Self {
        BoundarySlot {
            id: id.into(),
            label,
        }
    }
}

/// Conjugating word for `ConjugateWord` witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugatorWord {
    Torus(TorusTwistWord),
    Surface(TwistWord),
}

/// Evidence attached to a gluing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlueWitness {
    /// Literal inverse: matrix equality, or word-inverse after merging.
    InverseExact,
    /// The concatenation of the two monodromy words rewrites to the empty
    /// word.
    ReducesToInverse,
    /// `monodromy(b) = c·monodromy(a)⁻¹·c⁻¹` for the supplied word `c`,
    /// verified exactly.
    ConjugateWord { conjugator: ConjugatorWord },
    /// Conjugacy holds in the homological representation only; accepted with
    /// a necessary-condition flag.
    HomologyConjugate { matrix: SymplecticMatrix },
    /// Same opaque name, opposite orientation signs.
    OpaqueMatch,
}

impl GlueWitness {
    pub fn conjugate_torus(word: TorusTwistWord) -> Self {
        GlueWitness::ConjugateWord {
            conjugator: ConjugatorWord::Torus(word),
        }
    }

    pub fn conjugate_surface(word: TwistWord) -> Self {
        GlueWitness::ConjugateWord {
            conjugator: ConjugatorWord::Surface(word),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GlueWitness::InverseExact => "inverse_exact",
            GlueWitness::ReducesToInverse => "reduces_to_inverse",
            GlueWitness::ConjugateWord { .. } => "conjugate_word",
            GlueWitness::HomologyConjugate { .. } => "homology_conjugate",
            GlueWitness::OpaqueMatch => "opaque_match",
        }
    }

    /// Witness for the same gluing read from the other side.
    pub fn inverted(&self) -> Self {
        match self {
            GlueWitness::ConjugateWord { conjugator } => GlueWitness::ConjugateWord {
                conjugator: match conjugator {
                    ConjugatorWord::Torus(w) => ConjugatorWord::Torus(w.inverse()),
                    ConjugatorWord::Surface(w) => ConjugatorWord::Surface(w.inverse()),
                },
            },
            GlueWitness::HomologyConjugate { matrix } => GlueWitness::HomologyConjugate {
                matrix: matrix.inverse(),
            },
            other => other.clone(),
        }
    }
}

/// Verification strength of an accepted gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessTier {
    Exact,
    NecessaryOnly,
}

impl fmt::Display for WitnessTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessTier::Exact => write!(f, "exact"),
            WitnessTier::NecessaryOnly => write!(f, "necessary-only"),
        }
    }
}

#[derive(Debug, Error)]
pub enum GlueError {
    #[error("label kinds {a} and {b} cannot be glued")]
    KindMismatch { a: String, b: String },
    #[error("surface labels reference different charts {a:?} and {b:?}")]
    ChartMismatch { a: String, b: String },
    #[error("witness {witness} does not apply to labels {a} / {b}")]
    InapplicableWitness {
        witness: &'static str,
        a: String,
        b: String,
    },
    #[error("unknown chart {name:?}")]
    UnknownChart { name: String },
    #[error("monodromy mismatch: {details}")]
    MonodromyMismatch { details: String },
    #[error("fibers {a} and {b} differ")]
    FiberMismatch { a: String, b: String },
    #[error("opaque names {a:?} and {b:?} differ")]
    NameMismatch { a: String, b: String },
    #[error("opaque labels {a} and {b} have matching orientations; gluing needs opposite signs")]
    SignMismatch { a: String, b: String },
    #[error("conjugating matrix is not symplectic")]
    NotSymplectic,
    #[error(transparent)]
    Word(#[from] crate::mcg::McgError),
}

/// Chart registry used while matching: embedded charts, falling back to the
/// reserved built-in names.
#[derive(Debug, Clone, Default)]
pub struct ChartSet {
    charts: BTreeMap<String, SurfaceChart>,
}

impl ChartSet {
    pub fn new() -> Self {
        ChartSet::default()
    }

    pub fn from_map(charts: BTreeMap<String, SurfaceChart>) -> Self {
        ChartSet { charts }
    }

    pub fn insert(&mut self, name: impl Into<String>, chart: SurfaceChart) {
        self.charts.insert(name.into(), chart);
    }

    pub fn resolve(&self, name: &str) -> Result<SurfaceChart, GlueError> {
        if let Some(chart) = self.charts.get(name) {
            return Ok(chart.clone());
        }
        builtin_chart(name).ok_or_else(|| GlueError::UnknownChart {
            name: name.to_string(),
        })
    }
}

/// Checks whether slot `b` can be glued to slot `a` with witness `w`.
///
/// Accepts if and only if `b`'s label is (up to the witness) the
/// monodromy-inverse of `a`'s. A surface label whose word is the identity is
/// interchangeable with the product label of the same fiber genus.
pub fn match_gluing(
    charts: &ChartSet,
    a: &BoundarySlot,
    b: &BoundarySlot,
    witness: &GlueWitness,
) -> Result<WitnessTier, GlueError> {
    use GlueWitness::*;
    use ManifoldLabel::*;

    let inapplicable = || GlueError::InapplicableWitness {
        witness: witness.kind_name(),
        a: a.label.to_string(),
        b: b.label.to_string(),
    };
    let kind_mismatch = || GlueError::KindMismatch {
        a: a.label.to_string(),
        b: b.label.to_string(),
    };

    match (&a.label, &b.label) {
        (Torus { matrix: ma }, Torus { matrix: mb }) => match witness {
            InverseExact => {
                if *mb == ma.inverse() {
                    Ok(WitnessTier::Exact)
                } else {
                    Err(GlueError::MonodromyMismatch {
                        details: format!("{mb} is not the inverse of {ma}"),
                    })
                }
            }
            ReducesToInverse => {
                if ma.mul(mb).is_identity() {
                    Ok(WitnessTier::Exact)
                } else {
                    Err(GlueError::MonodromyMismatch {
                        details: format!("{ma}·{mb} is not the identity"),
                    })
                }
            }
            ConjugateWord {
                conjugator: ConjugatorWord::Torus(c),
            } => {
                let cm = c.evaluate();
                let expected = cm.mul(&ma.inverse()).mul(&cm.inverse());
                if *mb == expected {
                    Ok(WitnessTier::Exact)
                } else {
                    Err(GlueError::MonodromyMismatch {
                        details: format!("conjugating {ma}⁻¹ by {c} gives {expected}, not {mb}"),
                    })
                }
            }
            _ => Err(inapplicable()),
        },

        (Surface { .. }, Surface { .. }) => {
            let (ca, wa) = surface_parts(&a.label);
            let (cb, wb) = surface_parts(&b.label);
            if ca != cb {
                return Err(GlueError::ChartMismatch {
                    a: ca.to_string(),
                    b: cb.to_string(),
                });
            }
            let chart = charts.resolve(ca)?;
            match witness {
                InverseExact => {
                    if *wb == wa.inverse() {
                        Ok(WitnessTier::Exact)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!("{wb} is not the literal inverse of {wa}"),
                        })
                    }
                }
                ReducesToInverse => {
                    if chart.reduce(&wa.concat(wb))?.is_empty()
                        || chart.reduce(&wb.concat(wa))?.is_empty()
                    {
                        Ok(WitnessTier::Exact)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!("{wa}·{wb} does not reduce to the identity"),
                        })
                    }
                }
                ConjugateWord {
                    conjugator: ConjugatorWord::Surface(c),
                } => {
                    // b = c·a⁻¹·c⁻¹, certified by reducing the relator
                    let relator = c
                        .concat(&wa.inverse())
                        .concat(&c.inverse())
                        .concat(&wb.inverse());
                    let swapped = wb
                        .inverse()
                        .concat(c)
                        .concat(&wa.inverse())
                        .concat(&c.inverse());
                    if chart.reduce(&relator)?.is_empty() || chart.reduce(&swapped)?.is_empty() {
                        Ok(WitnessTier::Exact)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!(
                                "conjugacy relator for {wa} / {wb} does not reduce to the identity"
                            ),
                        })
                    }
                }
                HomologyConjugate { matrix } => {
                    if matrix.genus() != chart.genus() || !matrix.is_symplectic() {
                        return Err(GlueError::NotSymplectic);
                    }
                    let ra = chart.homology_action(wa)?;
                    let rb = chart.homology_action(wb)?;
                    let expected = matrix.mul(&ra.inverse()).mul(&matrix.inverse());
                    if rb == expected {
                        Ok(WitnessTier::NecessaryOnly)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!(
                                "homology action of {wb} is not the conjugated inverse of {wa}"
                            ),
                        })
                    }
                }
                _ => Err(inapplicable()),
            }
        }

        (Product { fiber: fa }, Product { fiber: fb }) => match witness {
            // identity monodromy is its own inverse
            InverseExact | ReducesToInverse => {
                if fa == fb {
                    Ok(WitnessTier::Exact)
                } else {
                    Err(GlueError::FiberMismatch {
                        a: fa.to_string(),
                        b: fb.to_string(),
                    })
                }
            }
            _ => Err(inapplicable()),
        },

        // a surface bundle with identity monodromy is the product bundle
        (Surface { .. }, Product { .. }) | (Product { .. }, Surface { .. }) => {
            let (surface, product) = if matches!(atag(a), "surface") {
                (&a.label, &b.label)
            } else {
                (&b.label, &a.label)
            };
            let (chart_name, word) = surface_parts(surface);
            let fiber = product_fiber(product);
            let chart = charts.resolve(chart_name)?;
            let genus_matches = matches!(fiber, FiberDesc::Genus(g) if *g == chart.genus());
            if !genus_matches {
                return Err(GlueError::FiberMismatch {
                    a: fiber.to_string(),
                    b: format!("genus{}", chart.genus()),
                });
            }
            match witness {
                InverseExact => {
                    if word.is_empty() {
                        Ok(WitnessTier::Exact)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!("{word} is not the literal identity word"),
                        })
                    }
                }
                ReducesToInverse => {
                    if chart.reduce(word)?.is_empty() {
                        Ok(WitnessTier::Exact)
                    } else {
                        Err(GlueError::MonodromyMismatch {
                            details: format!("{word} does not reduce to the identity"),
                        })
                    }
                }
                _ => Err(inapplicable()),
            }
        }

        (Opaque { name: na, sign: sa }, Opaque { name: nb, sign: sb }) => match witness {
            OpaqueMatch => {
                if na != nb {
                    Err(GlueError::NameMismatch {
                        a: na.clone(),
                        b: nb.clone(),
                    })
                } else if sa * sb != -1 {
                    Err(GlueError::SignMismatch {
                        a: a.label.to_string(),
                        b: b.label.to_string(),
                    })
                } else {
                    Ok(WitnessTier::Exact)
                }
            }
            _ => Err(inapplicable()),
        },

        _ => Err(kind_mismatch()),
    }
}

/// Checks a residual-slot relabeling: the physical label may be declared as
/// `target` when it would glue to `target.inverted()` under the witness.
pub fn match_relabel(
    charts: &ChartSet,
    physical: &BoundarySlot,
    target: &ManifoldLabel,
    witness: &GlueWitness,
) -> Result<WitnessTier, GlueError> {
    let phantom = BoundarySlot::new("target", target.inverted());
    match_gluing(charts, physical, &phantom, witness)
}

fn surface_parts(label: &ManifoldLabel) -> (&str, &TwistWord) {
    match label {
        ManifoldLabel::Surface { chart, word } => (chart, word),
        _ => unreachable!("caller checked the label kind"),
    }
}

fn product_fiber(label: &ManifoldLabel) -> &FiberDesc {
    match label {
        ManifoldLabel::Product { fiber } => fiber,
        _ => unreachable!("caller checked the label kind"),
    }
}

fn atag(slot: &BoundarySlot) -> &'static str {
    slot.label.kind_name()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::{lantern_tower, lantern_tower_word};
    use crate::sl2z::TorusGen;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn charts() -> ChartSet {
        ChartSet::new()
    }

    fn torus_slot(id: &str, word: &str) -> BoundarySlot {
        let w = TorusTwistWord::parse_text(word).unwrap();
        BoundarySlot::new(id, ManifoldLabel::torus(w.evaluate()))
    }

    fn surface_slot(id: &str, word: TwistWord) -> BoundarySlot {
        BoundarySlot::new(id, ManifoldLabel::surface("lantern3", word))
    }

    #[test]
    fn torus_inverse_exact() {
        let a = torus_slot("a", "L");
        let b = torus_slot("b", "L^-1");
        assert_eq!(
            match_gluing(&charts(), &a, &b, &GlueWitness::InverseExact).unwrap(),
            WitnessTier::Exact
        );
        // a twist is not its own inverse
        let same = torus_slot("b", "L");
        assert!(matches!(
            match_gluing(&charts(), &a, &same, &GlueWitness::InverseExact),
            Err(GlueError::MonodromyMismatch { .. })
        ));
    }

    #[test]
    fn tower_ends_glue_by_reduction() {
        let a = surface_slot("a", lantern_tower_word(7).inverse());
        let b = surface_slot("b", lantern_tower_word(0));
        assert_eq!(
            match_gluing(&charts(), &a, &b, &GlueWitness::ReducesToInverse).unwrap(),
            WitnessTier::Exact
        );
    }

    #[test]
    fn torus_conjugate_word() {
        // R = S⁻¹·L⁻¹·S with S = R·L⁻¹·R, so T²(L) glues to T²(R) with
        // conjugator S⁻¹
        let s = TorusTwistWord::parse_text("R.L^-1.R").unwrap();
        let a = torus_slot("a", "L");
        let b = torus_slot("b", "R");
        let witness = GlueWitness::conjugate_torus(s.inverse());
        assert_eq!(
            match_gluing(&charts(), &a, &b, &witness).unwrap(),
            WitnessTier::Exact
        );
        // wrong conjugator fails
        let bad = GlueWitness::conjugate_torus(TorusTwistWord::single(TorusGen::R, 2));
        assert!(match_gluing(&charts(), &a, &b, &bad).is_err());
    }

    #[test]
    fn homology_conjugate_is_flagged_necessary_only() {
        // carries [beta] to [2]
        let m = SymplecticMatrix::from_i64_rows(&[
            &[1, 0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0, 0],
            &[0, -1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1, 1],
            &[0, 0, 0, 0, 0, 1],
        ])
        .unwrap();
        assert!(m.is_symplectic());
        let a = surface_slot("a", TwistWord::letter("beta", -1));
        let b = surface_slot("b", TwistWord::letter("2", 1));
        let witness = GlueWitness::HomologyConjugate { matrix: m };
        assert_eq!(
            match_gluing(&charts(), &a, &b, &witness).unwrap(),
            WitnessTier::NecessaryOnly
        );
    }

    #[test]
    fn product_and_identity_surface_are_interchangeable() {
        let p = BoundarySlot::new("p", ManifoldLabel::product(FiberDesc::Genus(3)));
        let q = BoundarySlot::new("q", ManifoldLabel::product(FiberDesc::Genus(3)));
        assert!(match_gluing(&charts(), &p, &q, &GlueWitness::InverseExact).is_ok());

        let s = surface_slot("s", TwistWord::empty());
        assert!(match_gluing(&charts(), &s, &p, &GlueWitness::InverseExact).is_ok());
        let reducible = surface_slot("s", lantern_tower_word(7));
        assert!(match_gluing(&charts(), &reducible, &p, &GlueWitness::InverseExact).is_err());
        assert!(match_gluing(&charts(), &reducible, &p, &GlueWitness::ReducesToInverse).is_ok());
        let wrong_genus = BoundarySlot::new("p", ManifoldLabel::product(FiberDesc::Genus(2)));
        assert!(matches!(
            match_gluing(&charts(), &s, &wrong_genus, &GlueWitness::ReducesToInverse),
            Err(GlueError::FiberMismatch { .. })
        ));
    }

    #[test]
    fn opaque_match() {
        let a = BoundarySlot::new("a", ManifoldLabel::opaque("M1", 1));
        let b = BoundarySlot::new("b", ManifoldLabel::opaque("M1", -1));
        assert!(match_gluing(&charts(), &a, &b, &GlueWitness::OpaqueMatch).is_ok());
        let c = BoundarySlot::new("c", ManifoldLabel::opaque("M1", 1));
        assert!(matches!(
            match_gluing(&charts(), &a, &c, &GlueWitness::OpaqueMatch),
            Err(GlueError::SignMismatch { .. })
        ));
        let d = BoundarySlot::new("d", ManifoldLabel::opaque("M2", -1));
        assert!(matches!(
            match_gluing(&charts(), &a, &d, &GlueWitness::OpaqueMatch),
            Err(GlueError::NameMismatch { .. })
        ));
    }

    #[test]
    fn kind_and_witness_applicability_errors() {
        let t = torus_slot("t", "L");
        let o = BoundarySlot::new("o", ManifoldLabel::opaque("M", 1));
        assert!(matches!(
            match_gluing(&charts(), &t, &o, &GlueWitness::InverseExact),
            Err(GlueError::KindMismatch { .. })
        ));
        let t2 = torus_slot("t2", "L^-1");
        assert!(matches!(
            match_gluing(&charts(), &t, &t2, &GlueWitness::OpaqueMatch),
            Err(GlueError::InapplicableWitness { .. })
        ));
        // homology conjugation applies to surface pairs only
        assert!(matches!(
            match_gluing(
                &charts(),
                &t,
                &t2,
                &GlueWitness::HomologyConjugate {
                    matrix: SymplecticMatrix::identity(1)
                }
            ),
            Err(GlueError::InapplicableWitness { .. })
        ));
    }

    #[test]
    fn matching_is_symmetric_under_witness_inversion() {
        let mut rng = StdRng::seed_from_u64(13);
        let tower = lantern_tower();
        for _ in 0..100 {
            let w = &tower[rng.gen_range(0..tower.len())];
            let a = surface_slot("a", w.clone());
            let b = surface_slot("b", w.inverse());
            for witness in [GlueWitness::InverseExact, GlueWitness::ReducesToInverse] {
                let fwd = match_gluing(&charts(), &a, &b, &witness).is_ok();
                let back = match_gluing(&charts(), &b, &a, &witness.inverted()).is_ok();
                assert_eq!(fwd, back);
            }
        }
        // conjugate witnesses invert the conjugator
        let s = TorusTwistWord::parse_text("R.L^-1.R").unwrap();
        let a = torus_slot("a", "L");
        let b = torus_slot("b", "R");
        let witness = GlueWitness::conjugate_torus(s.inverse());
        assert!(match_gluing(&charts(), &a, &b, &witness).is_ok());
        assert!(match_gluing(&charts(), &b, &a, &witness.inverted()).is_ok());
    }

    #[test]
    fn witness_strictness_ladder() {
        let mut rng = StdRng::seed_from_u64(19);
        let tower = lantern_tower();
        let chart = crate::mcg::lantern_chart();
        let names: Vec<String> = chart.curve_names().map(String::from).collect();
        // surface rungs: exact ⊂ reduces ⊂ homology-conjugate(identity),
        // over tower words and random words alike
        for i in 0..100 {
            let w = if i < 50 {
                tower[rng.gen_range(0..tower.len())].clone()
            } else {
                TwistWord::from_letters(
                    (0..rng.gen_range(0..8))
                        .map(|_| {
                            (
                                names[rng.gen_range(0..names.len())].clone(),
                                if rng.gen_bool(0.5) { 1 } else { -1 },
                            )
                        })
                        .collect::<Vec<_>>(),
                )
            };
            let a = surface_slot("a", w.clone());
            let b = surface_slot("b", w.inverse());
            assert!(match_gluing(&charts(), &a, &b, &GlueWitness::InverseExact).is_ok());
            assert!(match_gluing(&charts(), &a, &b, &GlueWitness::ReducesToInverse).is_ok());
            assert!(match_gluing(
                &charts(),
                &a,
                &b,
                &GlueWitness::HomologyConjugate {
                    matrix: SymplecticMatrix::identity(3)
                }
            )
            .is_ok());
        }
        // torus rungs: exact ⊂ reduces
        let random_torus_word = |rng: &mut StdRng| {
            let mut w = TorusTwistWord::empty();
            for _ in 0..rng.gen_range(0..6) {
                let g = if rng.gen_bool(0.5) {
                    TorusGen::L
                } else {
                    TorusGen::R
                };
                w = w.concat(&TorusTwistWord::single(
                    g,
                    [-2i64, -1, 1, 2][rng.gen_range(0..4)],
                ));
            }
            w
        };
        for _ in 0..50 {
            let w = random_torus_word(&mut rng);
            let a = BoundarySlot::new("a", ManifoldLabel::torus(w.evaluate()));
            let b = BoundarySlot::new("b", ManifoldLabel::torus(w.evaluate().inverse()));
            assert!(match_gluing(&charts(), &a, &b, &GlueWitness::InverseExact).is_ok());
            assert!(match_gluing(&charts(), &a, &b, &GlueWitness::ReducesToInverse).is_ok());
        }
    }

    #[test]
    fn relabel_uses_the_direct_orientation() {
        // a slot physically labeled T²(L⁻¹) may be declared as T²(R):
        // S·R·S⁻¹ = L⁻¹ with S = R·L⁻¹·R
        let s = TorusTwistWord::parse_text("R.L^-1.R").unwrap();
        let physical = torus_slot("r", "L^-1");
        let target = ManifoldLabel::torus(TorusTwistWord::parse_text("R").unwrap().evaluate());
        let witness = GlueWitness::conjugate_torus(s.inverse());
        assert!(match_relabel(&charts(), &physical, &target, &witness).is_ok());
        // and the physical label itself is justified with an empty conjugator
        let same = ManifoldLabel::torus(TorusTwistWord::parse_text("L^-1").unwrap().evaluate());
        assert!(match_relabel(&charts(), &physical, &same, &GlueWitness::InverseExact).is_ok());
    }

    #[test]
    fn label_serde_shapes() {
        let label = ManifoldLabel::torus(Mat2::from_i64(1, 0, 1, 1).unwrap());
        let json = serde_json::to_value(&label).unwrap();
        assert_eq!(json["kind"], "torus");
        assert_eq!(json["matrix"][0], "1");

        let label = ManifoldLabel::surface("lantern3", TwistWord::letter("alpha", -1));
        let json = serde_json::to_value(&label).unwrap();
        assert_eq!(json["kind"], "surface");
        assert_eq!(json["word"], "f_alpha^-1");

        let label = ManifoldLabel::opaque("M1", 1);
        let json = serde_json::to_value(&label).unwrap();
        assert_eq!(json["kind"], "opaque");
        assert_eq!(json["sign"], 1);
    }
}
