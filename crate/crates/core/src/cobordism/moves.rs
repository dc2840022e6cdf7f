//! Split-and-reglue move sequences — the input data of the cobordism
//! pipeline.
//!
//! A sequence file is TOML: ordered `[[step]]` tables with `from`, `to`,
//! `fiber_genus` and `twist`, then a `[terminal]` table declaring the genus
//! of the product bundle the sequence ends at. Genus-1 steps use the torus
//! word grammar (`L.R^-1`), higher genus the twist-word grammar over the
//! standard chart (`f_a1.f_b2^-1`).

use super::block::MoveTwist;
use super::PlanError;
use crate::mcg::TwistWord;
use crate::sl2z::TorusTwistWord;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveStep {
    pub from: String,
    pub to: String,
    pub fiber_genus: usize,
    pub twist: MoveTwist,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSequence {
    pub steps: Vec<MoveStep>,
    pub terminal_genus: usize,
}

#[derive(Debug, Deserialize)]
struct RawSequence {
    #[serde(default)]
    step: Vec<RawStep>,
    terminal: RawTerminal,
}

#[derive(Debug, Deserialize)]
struct RawStep {
    from: String,
    to: String,
    fiber_genus: usize,
    twist: String,
}

#[derive(Debug, Deserialize)]
struct RawTerminal {
    product_of_genus: usize,
}

/// Parses a move-sequence file.
pub fn sequence_from_toml(text: &str) -> Result<MoveSequence, PlanError> {
    let raw: RawSequence = toml::from_str(text).map_err(|e| PlanError::MalformedSequence {
        reason: e.to_string(),
    })?;
    let mut steps = Vec::with_capacity(raw.step.len());
    for step in raw.step {
        let twist = if step.fiber_genus == 1 {
            MoveTwist::Torus(TorusTwistWord::parse_text(&step.twist).map_err(|e| {
                PlanError::MalformedSequence {
                    reason: e.to_string(),
                }
            })?)
        } else {
            MoveTwist::Surface(TwistWord::parse_text(&step.twist).map_err(|e| {
                PlanError::MalformedSequence {
                    reason: e.to_string(),
                }
            })?)
        };
        steps.push(MoveStep {
            from: step.from,
            to: step.to,
            fiber_genus: step.fiber_genus,
            twist,
        });
    }
    Ok(MoveSequence {
        steps,
        terminal_genus: raw.terminal.product_of_genus,
    })
}
