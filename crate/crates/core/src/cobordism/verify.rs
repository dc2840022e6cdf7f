//! Independent plan verification.
//!
//! The verifier trusts nothing the generators wrote: block slot labels are
//! recomputed from block parameters and compared against the stored lists,
//! every gluing witness is re-checked, slot usage is accounted (each slot in
//! exactly one gluing end or the residual), the gluing graph must be
//! connected, and the residual labels must match the declared target multiset
//! up to verified relabel witnesses. Failures are report entries, never
//! panics, so a corrupted plan file produces a diagnosable report.

use super::block::BlockKind;
use super::plan::{Plan, SlotRef};
use crate::bundles::{match_gluing, match_relabel, WitnessTier};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStatus {
    Pass,
    PassNecessaryOnly,
    Fail,
}

impl VerifyStatus {
    /// True unless verification failed; a pass that leans on
    /// necessary-condition witnesses still counts.
    pub fn is_pass(&self) -> bool {
        !matches!(self, VerifyStatus::Fail)
    }
}

impl fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyStatus::Pass => write!(f, "pass"),
            VerifyStatus::PassNecessaryOnly => {
                write!(f, "pass-with-necessary-only-witnesses")
            }
            VerifyStatus::Fail => write!(f, "fail"),
        }
    }
}

#[derive(Debug)]
pub struct BlockCheck {
    pub id: String,
    pub result: Result<(), String>,
}

#[derive(Debug)]
pub struct GluingCheck {
    pub index: usize,
    pub a: SlotRef,
    pub b: SlotRef,
    pub witness: &'static str,
    pub result: Result<WitnessTier, String>,
}

#[derive(Debug)]
pub struct VerificationReport {
    pub status: VerifyStatus,
    pub blocks: Vec<BlockCheck>,
    pub gluings: Vec<GluingCheck>,
    pub slot_accounting: Result<(), String>,
    pub connected: bool,
    pub residual_match: Result<(), String>,
    pub necessary_only: usize,
    pub diagnostics: Vec<String>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status)?;
        for check in &self.blocks {
            match &check.result {
                Ok(()) => writeln!(f, "block {}: ok", check.id)?,
                Err(e) => writeln!(f, "block {}: FAIL — {e}", check.id)?,
            }
        }
        for check in &self.gluings {
            match &check.result {
                Ok(tier) => writeln!(
                    f,
                    "gluing {}: {} <-> {} [{}] ok ({tier})",
                    check.index, check.a, check.b, check.witness
                )?,
                Err(e) => writeln!(
                    f,
                    "gluing {}: {} <-> {} [{}] FAIL — {e}",
                    check.index, check.a, check.b, check.witness
                )?,
            }
        }
        match &self.slot_accounting {
            Ok(()) => writeln!(f, "slot accounting: ok")?,
            Err(e) => writeln!(f, "slot accounting: FAIL — {e}")?,
        }
        writeln!(
            f,
            "connectivity: {}",
            if self.connected {
                "ok"
            } else {
                "FAIL — gluing graph is disconnected"
            }
        )?;
        match &self.residual_match {
            Ok(()) => writeln!(f, "residual vs target: ok")?,
            Err(e) => writeln!(f, "residual vs target: FAIL — {e}")?,
        }
        writeln!(f, "necessary-only witnesses: {}", self.necessary_only)?;
        for d in &self.diagnostics {
            writeln!(f, "note: {d}")?;
        }
        Ok(())
    }
}

/// Verifies a plan from scratch; see the module docs for the checklist.
pub fn verify(plan: &Plan) -> VerificationReport {
    let charts = plan.chart_set();
    let mut diagnostics = Vec::new();
    let mut failed = false;
    let mut necessary_only = 0usize;

    // unique block ids
    let mut seen = BTreeSet::new();
    for block in &plan.blocks {
        if !seen.insert(&block.id) {
            diagnostics.push(format!("duplicate block id {:?}", block.id));
            failed = true;
        }
    }

    // embedded charts must not redefine reserved names
    for (name, chart) in &plan.charts {
        if let Some(builtin) = crate::mcg::builtin_chart(name) {
            if builtin != *chart {
                diagnostics.push(format!(
                    "embedded chart shadows the reserved name {name:?} with different data"
                ));
                failed = true;
            }
        }
    }

    // per-block: recompute slot lists from parameters; verify nested plans
    let mut block_checks = Vec::new();
    for block in &plan.blocks {
        let mut result: Result<(), String> = match block.kind.expected_slots(&charts) {
            Err(e) => Err(format!("invalid parameters: {e}")),
            Ok(expected) => {
                if expected.len() != block.slots.len() {
                    Err(format!(
                        "stores {} slots, kind requires {}",
                        block.slots.len(),
                        expected.len()
                    ))
                } else {
                    let mut mismatch = None;
                    let mut ids = BTreeSet::new();
                    for (stored, recomputed) in block.slots.iter().zip(&expected) {
                        if !ids.insert(&stored.id) {
                            mismatch = Some(format!("duplicate slot id {:?}", stored.id));
                            break;
                        }
                        if stored.id != recomputed.id {
                            mismatch = Some(format!(
                                "slot id {:?} does not match recomputed {:?}",
                                stored.id, recomputed.id
                            ));
                            break;
                        }
                        if stored.label != recomputed.label {
                            mismatch = Some(format!(
                                "slot {:?} stores {} but parameters give {}",
                                stored.id, stored.label, recomputed.label
                            ));
                            break;
                        }
                    }
                    match mismatch {
                        Some(m) => Err(m),
                        None => Ok(()),
                    }
                }
            }
        };
        if result.is_ok() {
            if let BlockKind::SubPlan { plan: nested } = &block.kind {
                let nested_report = verify(nested);
                necessary_only += nested_report.necessary_only;
                if !nested_report.status.is_pass() {
                    result = Err("nested plan fails verification".to_string());
                }
            }
        }
        if result.is_err() {
            failed = true;
        }
        block_checks.push(BlockCheck {
            id: block.id.clone(),
            result,
        });
    }

    // slot accounting: each slot used exactly once by gluings ∪ residual
    let mut usage: BTreeMap<SlotRef, usize> = BTreeMap::new();
    for block in &plan.blocks {
        for slot in &block.slots {
            usage.insert(SlotRef::new(block.id.clone(), slot.id.clone()), 0);
        }
    }
    let mut accounting_errors = Vec::new();
    let mut tally = |r: &SlotRef, errors: &mut Vec<String>| match usage.get_mut(r) {
        Some(count) => *count += 1,
        None => errors.push(format!("{r} does not name a slot")),
    };
    for gluing in &plan.gluings {
        tally(&gluing.a_ref(), &mut accounting_errors);
        tally(&gluing.b_ref(), &mut accounting_errors);
    }
    for r in &plan.residual {
        tally(r, &mut accounting_errors);
    }
    for (r, count) in &usage {
        if *count == 0 {
            accounting_errors.push(format!("{r} is dangling (no gluing, not residual)"));
        } else if *count > 1 {
            accounting_errors.push(format!("{r} is used {count} times"));
        }
    }
    let slot_accounting = if accounting_errors.is_empty() {
        Ok(())
    } else {
        failed = true;
        Err(accounting_errors.join("; "))
    };

    // every gluing witness
    let mut gluing_checks = Vec::new();
    for (index, gluing) in plan.gluings.iter().enumerate() {
        let a_ref = gluing.a_ref();
        let b_ref = gluing.b_ref();
        let slot_a = plan
            .block(&gluing.a_block)
            .and_then(|blk| blk.slot(&gluing.a_slot));
        let slot_b = plan
            .block(&gluing.b_block)
            .and_then(|blk| blk.slot(&gluing.b_slot));
        let result = match (slot_a, slot_b) {
            (Some(a), Some(b)) => {
                match_gluing(&charts, a, b, &gluing.witness).map_err(|e| e.to_string())
            }
            _ => Err("gluing endpoint does not exist".to_string()),
        };
        match &result {
            Ok(WitnessTier::NecessaryOnly) => necessary_only += 1,
            Ok(WitnessTier::Exact) => {}
            Err(_) => failed = true,
        }
        gluing_checks.push(GluingCheck {
            index,
            a: a_ref,
            b: b_ref,
            witness: gluing.witness.kind_name(),
            result,
        });
    }

    // connectivity of the gluing graph
    let connected = gluing_graph_connected(plan);
    if !connected {
        failed = true;
    }

    // residual labels vs declared target, through relabel witnesses
    let mut effective = Vec::new();
    let mut residual_errors = Vec::new();
    let residual_set: BTreeSet<String> = plan.residual.iter().map(|r| r.key()).collect();
    for key in plan.relabel_witnesses.keys() {
        if !residual_set.contains(key) {
            residual_errors.push(format!("relabel witness for non-residual slot {key}"));
        }
    }
    for r in &plan.residual {
        let physical = match plan.block(&r.block).and_then(|blk| blk.slot(&r.slot)) {
            Some(slot) => slot,
            None => {
                residual_errors.push(format!("residual {r} does not name a slot"));
                continue;
            }
        };
        match plan.relabel_witnesses.get(&r.key()) {
            Some(entry) => match match_relabel(&charts, physical, &entry.target, &entry.witness) {
                Ok(WitnessTier::Exact) => effective.push(entry.target.clone()),
                Ok(WitnessTier::NecessaryOnly) => {
                    necessary_only += 1;
                    effective.push(entry.target.clone());
                }
                Err(e) => {
                    residual_errors.push(format!("relabel of {r} fails: {e}"));
                }
            },
            None => effective.push(physical.label.clone()),
        }
    }
    if residual_errors.is_empty() {
        let mut have: Vec<String> = effective.iter().map(|l| l.to_string()).collect();
        let mut want: Vec<String> = plan.target.iter().map(|l| l.to_string()).collect();
        have.sort();
        want.sort();
        if have != want {
            residual_errors.push(format!(
                "residual labels {{{}}} do not match target {{{}}}",
                have.join(", "),
                want.join(", ")
            ));
        }
    }
    let residual_match = if residual_errors.is_empty() {
        Ok(())
    } else {
        failed = true;
        Err(residual_errors.join("; "))
    };

    let status = if failed {
        VerifyStatus::Fail
    } else if necessary_only > 0 {
        VerifyStatus::PassNecessaryOnly
    } else {
        VerifyStatus::Pass
    };
    VerificationReport {
        status,
        blocks: block_checks,
        gluings: gluing_checks,
        slot_accounting,
        connected,
        residual_match,
        necessary_only,
        diagnostics,
    }
}

fn gluing_graph_connected(plan: &Plan) -> bool {
    if plan.blocks.len() <= 1 {
        return true;
    }
    let index: BTreeMap<&str, usize> = plan
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.id.as_str(), i))
        .collect();
    let mut adjacency = vec![Vec::new(); plan.blocks.len()];
    for gluing in &plan.gluings {
        if let (Some(&a), Some(&b)) = (
            index.get(gluing.a_block.as_str()),
            index.get(gluing.b_block.as_str()),
        ) {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    }
    let mut visited = vec![false; plan.blocks.len()];
    let mut stack = vec![0];
    visited[0] = true;
    let mut count = 1;
    while let Some(node) = stack.pop() {
        for &next in &adjacency[node] {
            if !visited[next] {
                visited[next] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count == plan.blocks.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::ChartSet;
    use crate::bundles::GlueWitness;
    use crate::cobordism::block::Block;
    use crate::cobordism::generate::lantern_assembly;
    use crate::cobordism::plan::compose;
    use crate::sl2z::{Chirality, Mat2, TorusTwistWord};

    #[test]
    fn generated_plan_passes() {
        let plan = lantern_assembly(Chirality::Plus);
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::PassNecessaryOnly);
        assert!(report.status.is_pass());
        assert!(report.connected);
        assert!(report.slot_accounting.is_ok());
        assert!(report.residual_match.is_ok());
    }

    #[test]
    fn exact_witness_on_non_inverse_labels_fails_with_diagnostic() {
        let mut plan = lantern_assembly(Chirality::Plus);
        // W6/e ↔ W5/e is the torus gluing; make both sides read T²(L)
        let gluing = plan
            .gluings
            .iter_mut()
            .find(|g| g.a_block == "W6" && g.a_slot == "e")
            .unwrap();
        gluing.witness = GlueWitness::InverseExact;
        // corrupt the stored label so the pair is no longer inverse
        let w6 = plan.blocks.iter_mut().find(|b| b.id == "W6").unwrap();
        let slot = w6.slots.iter_mut().find(|s| s.id == "e").unwrap();
        slot.label = slot.label.inverted();
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
        let failures: Vec<String> = report
            .gluings
            .iter()
            .filter_map(|g| g.result.as_ref().err().cloned())
            .collect();
        assert!(
            failures.iter().any(|e| e.contains("monodromy mismatch")),
            "{failures:?}"
        );
        // and the recompute check flags the corrupted block too
        assert!(report
            .blocks
            .iter()
            .any(|b| b.id == "W6" && b.result.is_err()));
    }

    #[test]
    fn disconnected_plans_fail_connectivity() {
        let p1 = lantern_assembly(Chirality::Plus);
        let p2 = lantern_assembly(Chirality::Minus);
        let plan = compose(p1, p2, Vec::new()).unwrap();
        let report = verify(&plan);
        assert!(!report.connected);
        assert_eq!(report.status, VerifyStatus::Fail);
    }

    #[test]
    fn composing_inverse_residuals_gives_a_closed_passing_plan() {
        let p1 = lantern_assembly(Chirality::Plus);
        let p2 = lantern_assembly(Chirality::Minus);
        let r1 = p1.residual[0].clone();
        let r2 = p2.residual[0].clone();
        let plan = compose(p1, p2, vec![(r1, r2, GlueWitness::InverseExact)]).unwrap();
        assert!(plan.residual.is_empty());
        assert!(plan.target.is_empty());
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::PassNecessaryOnly);
    }

    #[test]
    fn dangling_and_double_used_slots_are_caught() {
        let mut plan = lantern_assembly(Chirality::Plus);
        // drop the residual declaration: W7/e becomes dangling
        plan.residual.clear();
        plan.target.clear();
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
        assert!(report
            .slot_accounting
            .as_ref()
            .is_err_and(|e| e.contains("dangling")));
    }

    #[test]
    fn target_mismatch_is_caught() {
        let mut plan = lantern_assembly(Chirality::Plus);
        plan.target = vec![crate::bundles::ManifoldLabel::torus(Mat2::identity())];
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
        assert!(report.residual_match.is_err());
    }

    #[test]
    fn sub_plan_blocks_verify_recursively() {
        let inner = lantern_assembly(Chirality::Plus);
        let block = Block::new(
            "wrapped",
            crate::cobordism::block::BlockKind::SubPlan {
                plan: Box::new(inner),
            },
            &ChartSet::new(),
        )
        .unwrap();
        let plan = crate::cobordism::plan::Plan::from_block(block);
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::PassNecessaryOnly);
        assert_eq!(report.necessary_only, 2);

        // a corrupted nested plan fails the wrapper block
        let mut bad_inner = lantern_assembly(Chirality::Plus);
        bad_inner.gluings[0].witness = GlueWitness::OpaqueMatch;
        let block = Block::new(
            "wrapped",
            crate::cobordism::block::BlockKind::SubPlan {
                plan: Box::new(bad_inner),
            },
            &ChartSet::new(),
        )
        .unwrap();
        let plan = crate::cobordism::plan::Plan::from_block(block);
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
    }

    #[test]
    fn unknown_chart_fails_gracefully() {
        let mut plan = lantern_assembly(Chirality::Plus);
        for block in &mut plan.blocks {
            if let crate::cobordism::block::BlockKind::LanternPiece { .. } = block.kind {
                for slot in &mut block.slots {
                    if let crate::bundles::ManifoldLabel::Surface { chart, .. } = &mut slot.label {
                        *chart = "ghost".to_string();
                    }
                }
            }
        }
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
    }

    #[test]
    fn corrupted_relabel_target_fails() {
        // the single-R plan relabels its residual from T²(L⁻¹) to T²(R)
        let word = TorusTwistWord::parse_text("R").unwrap();
        let mut plan = crate::cobordism::generate::plan_torus_bundle(&word).unwrap();
        assert_eq!(plan.relabel_witnesses.len(), 1);
        assert!(verify(&plan).status.is_pass());
        let entry = plan.relabel_witnesses.values_mut().next().unwrap();
        entry.target = crate::bundles::ManifoldLabel::torus(Mat2::identity());
        plan.recompute_target();
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
        assert!(report.residual_match.is_err());
    }

    #[test]
    fn shadowing_a_reserved_chart_name_fails() {
        let mut plan = lantern_assembly(Chirality::Plus);
        plan.charts
            .insert("lantern3".to_string(), crate::mcg::standard_chart(3));
        let report = verify(&plan);
        assert_eq!(report.status, VerifyStatus::Fail);
        assert!(report.diagnostics.iter().any(|d| d.contains("reserved")));
    }

    #[test]
    fn report_prints_one_line_per_check() {
        let plan = lantern_assembly(Chirality::Plus);
        let report = verify(&plan);
        let text = report.to_string();
        assert!(text.contains("status: pass-with-necessary-only-witnesses"));
        assert!(text.contains("gluing 0:"));
        assert!(text.contains("necessary-only witnesses: 2"));
    }
}
