//! Assembly plans: blocks, gluings with witnesses, residual boundary, and the
//! declared target — the artifact's certificate format.

use super::block::{Block, BlockKind};
use super::PlanError;
use crate::bundles::{match_gluing, match_relabel, ChartSet, GlueWitness, ManifoldLabel};
use crate::mcg::SurfaceChart;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// Reference to one slot of one block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlotRef {
    pub block: String,
    pub slot: String,
}

impl SlotRef {
    pub fn new(block: impl Into<String>, slot: impl Into<String>) -> Self {
        SlotRef {
            block: block.into(),
            slot: slot.into(),
        }
    }

    /// Key form used in the relabel-witness map: `block/slot`.
    pub fn key(&self) -> String {
        format!("{}/{}", self.block, self.slot)
    }

    pub fn parse_key(key: &str) -> Option<SlotRef> {
        let (block, slot) = key.rsplit_once('/')?;
        if block.is_empty() || slot.is_empty() {
            return None;
        }
        Some(SlotRef::new(block, slot))
    }
}

impl fmt::Display for SlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.block, self.slot)
    }
}

/// One gluing between two slots, with its witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub a_block: String,
    pub a_slot: String,
    pub b_block: String,
    pub b_slot: String,
    pub witness: GlueWitness,
}

impl Gluing {
    pub fn a_ref(&self) -> SlotRef {
        SlotRef::new(self.a_block.clone(), self.a_slot.clone())
    }

    pub fn b_ref(&self) -> SlotRef {
        SlotRef::new(self.b_block.clone(), self.b_slot.clone())
    }
}

/// Declares a residual slot under a different label than its physical one,
/// justified by a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelabelEntry {
    pub target: ManifoldLabel,
    pub witness: GlueWitness,
}

/// Blocks, gluings, residual boundary and target. The `target` list is the
/// multiset of effective residual labels (declared targets where a relabel
/// witness exists, physical labels otherwise) and is kept consistent by every
/// mutating operation here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub charts: BTreeMap<String, SurfaceChart>,
    pub blocks: Vec<Block>,
    pub gluings: Vec<Gluing>,
    pub residual: Vec<SlotRef>,
    pub target: Vec<ManifoldLabel>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relabel_witnesses: BTreeMap<String, RelabelEntry>,
}

impl Plan {
    /// Plan holding a single unglued block; every slot is residual.
    pub fn from_block(block: Block) -> Plan {
        let residual: Vec<SlotRef> = block
            .slots
            .iter()
            .map(|s| SlotRef::new(block.id.clone(), s.id.clone()))
            .collect();
        let target = block.slots.iter().map(|s| s.label.clone()).collect();
        Plan {
            charts: BTreeMap::new(),
            blocks: vec![block],
            gluings: Vec::new(),
            residual,
            target,
            relabel_witnesses: BTreeMap::new(),
        }
    }

    pub fn block(&self, id: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.id == id)
    }

    pub fn slot_label(&self, slot: &SlotRef) -> Option<&ManifoldLabel> {
        self.block(&slot.block)?.slot(&slot.slot).map(|s| &s.label)
    }

    /// Label a residual slot presents to the outside: its relabel target if
    /// one is declared, its physical label otherwise.
    pub fn effective_residual_label(&self, slot: &SlotRef) -> Option<ManifoldLabel> {
        if let Some(entry) = self.relabel_witnesses.get(&slot.key()) {
            return Some(entry.target.clone());
        }
        self.slot_label(slot).cloned()
    }

    /// Chart registry for this plan: embedded charts plus built-ins.
    pub fn chart_set(&self) -> ChartSet {
        ChartSet::from_map(self.charts.clone())
    }

    pub fn recompute_target(&mut self) {
        self.target = self
            .residual
            .iter()
            .filter_map(|r| self.effective_residual_label(r))
            .collect();
    }

    /// Total number of blocks with nested plans flattened; `SubPlan` wrappers
    /// themselves are not counted.
    pub fn block_count_flat(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match &b.kind {
                BlockKind::SubPlan { plan } => plan.block_count_flat(),
                _ => 1,
            })
            .sum()
    }

    /// Number of blocks of the given kind, nested plans included.
    pub fn count_kind(&self, kind_name: &str) -> usize {
        self.blocks
            .iter()
            .map(|b| match &b.kind {
                BlockKind::SubPlan { plan } => plan.count_kind(kind_name),
                k if k.kind_name() == kind_name => 1,
                _ => 0,
            })
            .sum()
    }

    /// Renames every block id with a prefix; references follow.
    pub fn prefixed(mut self, prefix: &str) -> Plan {
        for block in &mut self.blocks {
            block.id = format!("{prefix}{}", block.id);
        }
        for gluing in &mut self.gluings {
            gluing.a_block = format!("{prefix}{}", gluing.a_block);
            gluing.b_block = format!("{prefix}{}", gluing.b_block);
        }
        for slot in &mut self.residual {
            slot.block = format!("{prefix}{}", slot.block);
        }
        self.relabel_witnesses = self
            .relabel_witnesses
            .into_iter()
            .map(|(key, entry)| {
                let renamed = SlotRef::parse_key(&key)
                    .map(|r| SlotRef::new(format!("{prefix}{}", r.block), r.slot).key())
                    .unwrap_or(key);
                (renamed, entry)
            })
            .collect();
        self
    }

    /// Disjoint union. Block ids must not collide; equal-named embedded
    /// charts must be structurally identical.
    pub fn union(mut a: Plan, b: Plan) -> Result<Plan, PlanError> {
        for block in &b.blocks {
            if a.block(&block.id).is_some() {
                return Err(PlanError::DuplicateBlockId {
                    id: block.id.clone(),
                });
            }
        }
        for (name, chart) in b.charts {
            if let Some(existing) = a.charts.get(&name) {
                if *existing != chart {
                    return Err(PlanError::ChartConflict { name });
                }
            } else {
                a.charts.insert(name, chart);
            }
        }
        a.blocks.extend(b.blocks);
        a.gluings.extend(b.gluings);
        a.residual.extend(b.residual);
        a.relabel_witnesses.extend(b.relabel_witnesses);
        a.recompute_target();
        Ok(a)
    }

    /// Glues two residual slots. The witness is checked immediately; both
    /// slots leave the residual list and their relabel entries are dropped.
    pub fn glue(&mut self, a: SlotRef, b: SlotRef, witness: GlueWitness) -> Result<(), PlanError> {
        for slot in [&a, &b] {
            if !self.residual.contains(slot) {
                return Err(PlanError::SlotNotResidual {
                    slot: slot.to_string(),
                });
            }
        }
        let charts = self.chart_set();
        let missing = |slot: &SlotRef| PlanError::SlotNotResidual {
            slot: slot.to_string(),
        };
        let slot_a = self
            .block(&a.block)
            .and_then(|blk| blk.slot(&a.slot))
            .ok_or_else(|| missing(&a))?;
        let slot_b = self
            .block(&b.block)
            .and_then(|blk| blk.slot(&b.slot))
            .ok_or_else(|| missing(&b))?;
        match_gluing(&charts, slot_a, slot_b, &witness).map_err(|e| PlanError::WitnessFailed {
            a: a.to_string(),
            b: b.to_string(),
            reason: e.to_string(),
        })?;
        self.residual.retain(|r| *r != a && *r != b);
        self.relabel_witnesses.remove(&a.key());
        self.relabel_witnesses.remove(&b.key());
        self.gluings.push(Gluing {
            a_block: a.block,
            a_slot: a.slot,
            b_block: b.block,
            b_slot: b.slot,
            witness,
        });
        self.recompute_target();
        Ok(())
    }

    /// Declares a residual slot under `target`, checking the witness now.
    pub fn set_relabel(
        &mut self,
        slot: SlotRef,
        target: ManifoldLabel,
        witness: GlueWitness,
    ) -> Result<(), PlanError> {
        if !self.residual.contains(&slot) {
            return Err(PlanError::SlotNotResidual {
                slot: slot.to_string(),
            });
        }
        let charts = self.chart_set();
        let physical = self
            .block(&slot.block)
            .and_then(|blk| blk.slot(&slot.slot))
            .ok_or_else(|| PlanError::SlotNotResidual {
                slot: slot.to_string(),
            })?;
        match_relabel(&charts, physical, &target, &witness).map_err(|e| {
            PlanError::WitnessFailed {
                a: slot.to_string(),
                b: target.to_string(),
                reason: e.to_string(),
            }
        })?;
        self.relabel_witnesses
            .insert(slot.key(), RelabelEntry { target, witness });
        self.recompute_target();
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plan serialization");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<Plan, PlanError> {
        serde_json::from_str(text).map_err(|e| PlanError::PlanFile {
            reason: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), PlanError> {
        std::fs::write(path, self.to_json_string()).map_err(|e| PlanError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Plan, PlanError> {
        let text = std::fs::read_to_string(path).map_err(|e| PlanError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Plan::from_json_str(&text)
    }

    /// Graphviz rendering: one node per block, one edge per gluing labeled
    /// with the witness tier, residual slots as half-edges into a `∂` node.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph plan {\n  node [shape=box];\n");
        for block in &self.blocks {
            out.push_str(&format!(
                "  {} [label={}];\n",
                dot_quote(&block.id),
                dot_quote(&format!("{}\\n{}", block.id, block.kind.summary()))
            ));
        }
        out.push_str("  boundary [shape=doublecircle, label=\"∂\"];\n");
        for gluing in &self.gluings {
            let tier = match gluing.witness {
                GlueWitness::HomologyConjugate { .. } => "necessary-only",
                _ => "exact",
            };
            out.push_str(&format!(
                "  {} -- {} [label={}];\n",
                dot_quote(&gluing.a_block),
                dot_quote(&gluing.b_block),
                dot_quote(&format!("{} ({tier})", gluing.witness.kind_name()))
            ));
        }
        for slot in &self.residual {
            let label = self
                .effective_residual_label(slot)
                .map(|l| l.to_string())
                .unwrap_or_else(|| "?".to_string());
            out.push_str(&format!(
                "  {} -- boundary [style=dashed, label={}];\n",
                dot_quote(&slot.block),
                dot_quote(&label)
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\\\""))
}

/// Joins two plans along pairs of residual slots. Block ids are namespaced
/// (`a.` and `b.` prefixes); the pairing refers to slots by their original
/// names. The combined residual may be empty — that is a closed assembly.
pub fn compose(
    p1: Plan,
    p2: Plan,
    pairing: Vec<(SlotRef, SlotRef, GlueWitness)>,
) -> Result<Plan, PlanError> {
    let p1 = p1.prefixed("a.");
    let p2 = p2.prefixed("b.");
    let mut plan = Plan::union(p1, p2)?;
    for (r1, r2, witness) in pairing {
        let a = SlotRef::new(format!("a.{}", r1.block), r1.slot);
        let b = SlotRef::new(format!("b.{}", r2.block), r2.slot);
        plan.glue(a, b, witness)?;
    }
    Ok(plan)
}
