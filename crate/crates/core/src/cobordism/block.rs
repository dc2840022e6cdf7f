//! Block kinds and their boundary-slot formulas.
//!
//! A block is an elementary oriented 4-manifold with a fixed list of labeled
//! boundary slots determined entirely by its kind and parameters. Stored slot
//! lists are redundant on purpose: the verifier recomputes them from the
//! parameters and compares, so a corrupted label is always caught.

use super::plan::Plan;
use super::PlanError;
use crate::bundles::{BoundarySlot, ChartSet, FiberDesc, ManifoldLabel};
use crate::mcg::{lantern_tower_word, TwistWord};
use crate::sl2z::{Chirality, Mat2, TorusGen, TorusTwistWord};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// How the regluing 4-manifold presents its third boundary component: as the
/// torus-bundle of the performed twist (splitting along an incompressible
/// torus through the twist curve), or as the fiber-bundle of the twist
/// (splitting along the fiber). The two are interchangeable regluings of the
/// same surgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegluingForm {
    Torus,
    Fiber,
}

/// Endpoint of a split-and-reglue move: a named manifold, or the terminal
/// product bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveEndpoint {
    Opaque { name: String },
    Product { genus: usize },
}

/// Regluing twist of a move, over the splitting fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveTwist {
    Torus(TorusTwistWord),
    Surface(TwistWord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum BlockKind {
    /// `S(g) × [0,1]`: two slots, the bundle and its orientation reversal.
    Product { label: ManifoldLabel },
    /// Three-boundary torus block: slots `T²(a⁻¹)`, `T²(b)`, `T²(a·b)`.
    ReglueTorus { a: Mat2, b: Mat2 },
    /// Three-boundary surface block over a chart: slots `Σ(base⁻¹)`,
    /// `Σ(base·t_c^e)`, and the twist bundle in the chosen form.
    ReglueSurface {
        chart: String,
        base: TwistWord,
        curve: String,
        exponent: i8,
        form: RegluingForm,
    },
    /// Level `i` of the seven-piece lantern assembly; `chirality` −1 is the
    /// orientation-reversed piece (all slot labels inverted).
    LanternPiece { level: u8, chirality: Chirality },
    /// Axiom block bounding `F × S¹`; one slot, no internal structure.
    CapProduct { fiber: FiberDesc },
    /// Axiom block bounding `(Σ × S¹) ⊔ (Σ′ × S¹)`; two slots.
    CapBridge { left: FiberDesc, right: FiberDesc },
    /// Split-and-reglue move block with opaque endpoints: slots
    /// `Opaque(from,+)`, endpoint of the move (reversed), and the inverted
    /// twist bundle.
    ReglueMove {
        from: String,
        to: MoveEndpoint,
        fiber_genus: usize,
        twist: MoveTwist,
    },
    /// Wraps a nested plan; the nested residual slots become this block's
    /// slots (ids `block.slot`).
    SubPlan { plan: Box<Plan> },
}

impl BlockKind {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BlockKind::Product { .. } => "product",
            BlockKind::ReglueTorus { .. } => "reglue_torus",
            BlockKind::ReglueSurface { .. } => "reglue_surface",
            BlockKind::LanternPiece { .. } => "lantern_piece",
            BlockKind::CapProduct { .. } => "cap_product",
            BlockKind::CapBridge { .. } => "cap_bridge",
            BlockKind::ReglueMove { .. } => "reglue_move",
            BlockKind::SubPlan { .. } => "sub_plan",
        }
    }

    /// Short human-readable parameter summary, used by DOT export and
    /// diagnostics.
    pub fn summary(&self) -> String {
        match self {
            BlockKind::Product { label } => format!("product {label}"),
            BlockKind::ReglueTorus { a, b } => format!("reglue_torus a={a} b={b}"),
            BlockKind::ReglueSurface {
                chart,
                base,
                curve,
                exponent,
                form,
            } => {
                let form = match form {
                    RegluingForm::Torus => "torus",
                    RegluingForm::Fiber => "fiber",
                };
                format!("reglue_surface {chart} base={base} twist=f_{curve}^{exponent} ({form})")
            }
            BlockKind::LanternPiece { level, chirality } => {
                format!("lantern_piece {level} ({chirality})")
            }
            BlockKind::CapProduct { fiber } => format!("cap_product {fiber}"),
            BlockKind::CapBridge { left, right } => format!("cap_bridge {left}|{right}"),
            BlockKind::ReglueMove {
                from,
                to,
                fiber_genus,
                ..
            } => {
                let to = match to {
                    MoveEndpoint::Opaque { name } => name.clone(),
                    MoveEndpoint::Product { genus } => format!("product(genus{genus})"),
                };
                format!("reglue_move {from}->{to} fiber_genus={fiber_genus}")
            }
            BlockKind::SubPlan { plan } => format!("sub_plan ({} blocks)", plan.blocks.len()),
        }
    }

    /// Recomputes the slot list this kind must carry. Fails on malformed
    /// parameters (unknown curves, bad exponents, out-of-range levels...).
    pub fn expected_slots(&self, charts: &ChartSet) -> Result<Vec<BoundarySlot>, PlanError> {
        match self {
            BlockKind::Product { label } => {
                if matches!(label, ManifoldLabel::Opaque { .. }) {
                    return Err(PlanError::InvalidBlock {
                        reason: "product block needs a bundle label".into(),
                    });
                }
                if let ManifoldLabel::Surface { chart, word } = label {
                    charts.resolve(chart)?.check_word(word)?;
                }
                Ok(vec![
                    BoundarySlot::new("in", label.inverted()),
                    BoundarySlot::new("out", label.clone()),
                ])
            }

            BlockKind::ReglueTorus { a, b } => Ok(vec![
                BoundarySlot::new("a_inv", ManifoldLabel::torus(a.inverse())),
                BoundarySlot::new("b", ManifoldLabel::torus(b.clone())),
                BoundarySlot::new("ab", ManifoldLabel::torus(a.mul(b))),
            ]),

            BlockKind::ReglueSurface {
                chart,
                base,
                curve,
                exponent,
                form,
            } => {
                let chart_data = charts.resolve(chart)?;
                chart_data.check_word(base)?;
                if chart_data.curve(curve).is_none() {
                    return Err(PlanError::InvalidBlock {
                        reason: format!("unknown twist curve {curve:?}"),
                    });
                }
                if exponent.abs() != 1 {
                    return Err(PlanError::InvalidBlock {
                        reason: format!("reglue twist exponent must be ±1, got {exponent}"),
                    });
                }
                let twist = TwistWord::letter(curve.clone(), i64::from(*exponent));
                let e_label = match form {
                    RegluingForm::Torus => {
                        ManifoldLabel::torus(TorusGen::L.power(&BigInt::from(*exponent)))
                    }
                    RegluingForm::Fiber => ManifoldLabel::surface(chart.clone(), twist.clone()),
                };
                Ok(vec![
                    BoundarySlot::new(
                        "base_inv",
                        ManifoldLabel::surface(chart.clone(), base.inverse()),
                    ),
                    BoundarySlot::new(
                        "result",
                        ManifoldLabel::surface(chart.clone(), base.concat(&twist)),
                    ),
                    BoundarySlot::new("e", e_label),
                ])
            }

            BlockKind::LanternPiece { level, chirality } => {
                if !(1..=7).contains(level) {
                    return Err(PlanError::InvalidBlock {
                        reason: format!("lantern piece level must be 1..=7, got {level}"),
                    });
                }
                let theta_in = lantern_tower_word(*level);
                let theta_out = lantern_tower_word(*level - 1);
                let one = BigInt::from(1);
                let e_label = match level {
                    7 | 5 => ManifoldLabel::torus(TorusGen::L.power(&one)),
                    6 => ManifoldLabel::torus(TorusGen::L.power(&(-one))),
                    4 => ManifoldLabel::surface("lantern3", TwistWord::letter("beta", -1)),
                    3 => ManifoldLabel::surface("lantern3", TwistWord::letter("2", 1)),
                    2 => ManifoldLabel::surface("lantern3", TwistWord::letter("gamma", -1)),
                    1 => ManifoldLabel::surface("lantern3", TwistWord::letter("1", 1)),
                    _ => unreachable!(),
                };
                let mut slots = vec![
                    BoundarySlot::new("in", ManifoldLabel::surface("lantern3", theta_in.inverse())),
                    BoundarySlot::new("out", ManifoldLabel::surface("lantern3", theta_out)),
                    BoundarySlot::new("e", e_label),
                ];
                if *chirality == Chirality::Minus {
                    for slot in &mut slots {
                        slot.label = slot.label.inverted();
                    }
                }
                Ok(slots)
            }

            BlockKind::CapProduct { fiber } => Ok(vec![BoundarySlot::new(
                "cap",
                ManifoldLabel::product(fiber.clone()),
            )]),

            BlockKind::CapBridge { left, right } => Ok(vec![
                BoundarySlot::new("left", ManifoldLabel::product(left.clone())),
                BoundarySlot::new("right", ManifoldLabel::product(right.clone())),
            ]),

            BlockKind::ReglueMove {
                from,
                to,
                fiber_genus,
                twist,
            } => {
                if from.is_empty() {
                    return Err(PlanError::InvalidBlock {
                        reason: "move block needs a nonempty source name".into(),
                    });
                }
                let e_label = match twist {
                    MoveTwist::Torus(word) => {
                        if *fiber_genus != 1 {
                            return Err(PlanError::InvalidBlock {
                                reason: format!("torus twist word on a genus-{fiber_genus} fiber"),
                            });
                        }
                        if word.is_empty() {
                            return Err(PlanError::InvalidBlock {
                                reason: "move twist must be nonempty".into(),
                            });
                        }
                        ManifoldLabel::torus(word.evaluate().inverse())
                    }
                    MoveTwist::Surface(word) => {
                        if *fiber_genus < 2 {
                            return Err(PlanError::InvalidBlock {
                                reason: format!(
                                    "surface twist word on a genus-{fiber_genus} fiber"
                                ),
                            });
                        }
                        if word.is_empty() {
                            return Err(PlanError::InvalidBlock {
                                reason: "move twist must be nonempty".into(),
                            });
                        }
                        let chart_name = format!("std{fiber_genus}");
                        charts.resolve(&chart_name)?.check_word(word)?;
                        ManifoldLabel::surface(chart_name, word.inverse())
                    }
                };
                let to_label = match to {
                    MoveEndpoint::Opaque { name } => {
                        if name.is_empty() {
                            return Err(PlanError::InvalidBlock {
                                reason: "move block needs a nonempty target name".into(),
                            });
                        }
                        ManifoldLabel::opaque(name.clone(), -1)
                    }
                    MoveEndpoint::Product { genus } => {
                        ManifoldLabel::product(FiberDesc::Genus(*genus))
                    }
                };
                Ok(vec![
                    BoundarySlot::new("from", ManifoldLabel::opaque(from.clone(), 1)),
                    BoundarySlot::new("to", to_label),
                    BoundarySlot::new("e", e_label),
                ])
            }

            BlockKind::SubPlan { plan } => {
                let mut slots = Vec::new();
                for slot_ref in &plan.residual {
                    let label = plan.effective_residual_label(slot_ref).ok_or_else(|| {
                        PlanError::InvalidBlock {
                            reason: format!("nested plan residual {slot_ref} does not name a slot"),
                        }
                    })?;
                    slots.push(BoundarySlot::new(
                        format!("{}.{}", slot_ref.block, slot_ref.slot),
                        label,
                    ));
                }
                Ok(slots)
            }
        }
    }
}

/// A block instance: kind, parameters, and the (redundant) slot list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub id: String,
    #[serde(flatten)]
    pub kind: BlockKind,
    pub slots: Vec<BoundarySlot>,
}

impl Block {
    pub fn new(
        id: impl Into<String>,
        kind: BlockKind,
        charts: &ChartSet,
    ) -> Result<Block, PlanError> {
        let slots = kind.expected_slots(charts)?;
        Ok(Block {
            id: id.into(),
            kind,
            slots,
        })
    }

    pub fn slot(&self, id: &str) -> Option<&BoundarySlot> {
        self.slots.iter().find(|s| s.id == id)
    }
}
