//! Plan generators: the seven-piece lantern assembly, bundle plans built by
//! peeling one twist at a time, and the split-and-reglue cobordism pipeline.

use super::block::{Block, BlockKind, MoveEndpoint, MoveTwist, RegluingForm};
use super::moves::MoveSequence;
use super::plan::{Plan, SlotRef};
use super::PlanError;
use crate::bundles::{ChartSet, FiberDesc, GlueWitness, ManifoldLabel};
use crate::mcg::{builtin_chart, standard_chart, SurfaceChart, SymplecticMatrix, TwistWord};
use crate::sl2z::{single_twist_class, Chirality, TorusGen, TorusLetter, TorusTwistWord};

/// Symplectic witness carrying `[beta]` to the class of curve `2` on the
/// lantern chart; used for the conjugation gluing between the two fiber-form
/// twist slots of pieces 4 and 3.
fn beta_carrier() -> SymplecticMatrix {
    SymplecticMatrix::from_i64_rows(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, -1, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 1],
        &[0, 0, 0, 0, 0, 1],
    ])
    .expect("constant witness matrix")
}

/// Symplectic witness carrying `[gamma]` to the class of curve `1`.
fn gamma_carrier() -> SymplecticMatrix {
    SymplecticMatrix::from_i64_rows(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[-1, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 1],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1],
    ])
    .expect("constant witness matrix")
}

/// Assembles the seven lantern pieces into a plan whose single residual
/// boundary is the torus bundle of one twist, `T²(L^chirality)`.
///
/// Ten gluings: the six chain gluings along the tower words, the torus-slot
/// gluing between pieces 6 and 5, the two conjugation gluings between
/// fiber-form twist slots (homological witnesses, flagged), and the closing
/// gluing identifying the top of the tower with the bottom.
pub fn lantern_assembly(chirality: Chirality) -> Plan {
    let charts = ChartSet::new();
    let mut plan: Option<Plan> = None;
    for level in 1..=7u8 {
        let block = Block::new(
            format!("W{level}"),
            BlockKind::LanternPiece { level, chirality },
            &charts,
        )
        .expect("lantern piece parameters are fixed");
        let piece = Plan::from_block(block);
        plan = Some(match plan {
            None => piece,
            Some(p) => Plan::union(p, piece).expect("lantern ids are distinct"),
        });
    }
    let mut plan = plan.expect("seven pieces");

    let glue = |plan: &mut Plan, a: (&str, &str), b: (&str, &str), w: GlueWitness| {
        plan.glue(SlotRef::new(a.0, a.1), SlotRef::new(b.0, b.1), w)
            .expect("lantern assembly gluing");
    };

    // chain gluings along the tower: out of W_{i+1} meets in of W_i
    for level in 1..=6u8 {
        glue(
            &mut plan,
            (&format!("W{}", level + 1), "out"),
            (&format!("W{level}"), "in"),
            GlueWitness::InverseExact,
        );
    }
    // opposite torus twists on pieces 6 and 5
    glue(
        &mut plan,
        ("W6", "e"),
        ("W5", "e"),
        GlueWitness::InverseExact,
    );
    // fiber-form twist slots agree only up to conjugation; homological witnesses
    glue(
        &mut plan,
        ("W4", "e"),
        ("W3", "e"),
        GlueWitness::HomologyConjugate {
            matrix: beta_carrier(),
        },
    );
    glue(
        &mut plan,
        ("W2", "e"),
        ("W1", "e"),
        GlueWitness::HomologyConjugate {
            matrix: gamma_carrier(),
        },
    );
    // close the tower: both end words rewrite to the identity
    glue(
        &mut plan,
        ("W7", "in"),
        ("W1", "out"),
        GlueWitness::ReducesToInverse,
    );

    debug_assert_eq!(plan.residual, vec![SlotRef::new("W7", "e")]);
    plan
}

/// Witness for gluing the residual of `plan_torus_letters(letters)` onto a
/// slot labeled `T²(eval(letters)⁻¹)`.
fn torus_chain_witness(letters: &[TorusLetter]) -> Result<GlueWitness, PlanError> {
    if letters.len() >= 2 {
        return Ok(GlueWitness::InverseExact);
    }
    let class = single_twist_class(&letters[0])?;
    if class.conjugator.is_empty() {
        Ok(GlueWitness::InverseExact)
    } else {
        Ok(GlueWitness::conjugate_torus(class.conjugator))
    }
}

/// Plan whose residual boundary is the torus bundle `T²(eval(w))`.
///
/// Exponents are split into single twists first. A single twist is realized
/// by the lantern assembly of matching chirality, relabeled to the requested
/// letter by its conjugacy witness; longer words peel the last twist into a
/// three-boundary torus block whose twist slot is capped by a single-twist
/// plan and whose other slot continues recursively.
pub fn plan_torus_bundle(word: &TorusTwistWord) -> Result<Plan, PlanError> {
    let letters = word.split_single()?;
    if letters.is_empty() {
        return Err(PlanError::EmptyMonodromy);
    }
    plan_torus_letters(&letters)
}

fn plan_torus_letters(letters: &[TorusLetter]) -> Result<Plan, PlanError> {
    let k = letters.len();
    if k == 1 {
        let letter = &letters[0];
        let class = single_twist_class(letter)?;
        let mut plan = lantern_assembly(class.chirality);
        let residual = plan.residual[0].clone();
        let target = ManifoldLabel::torus(letter.generator.power(&letter.exponent));
        if plan.slot_label(&residual) != Some(&target) {
            plan.set_relabel(
                residual,
                target,
                GlueWitness::conjugate_torus(class.conjugator.inverse()),
            )?;
        }
        return Ok(plan);
    }

    let (head, tail) = letters.split_at(k - 1);
    let last = &tail[0];
    let tau = TorusTwistWord::from_letters(head.iter().cloned()).evaluate();
    let sigma = last.generator.power(&last.exponent);
    let block_id = format!("reglue{k}");
    let block = Block::new(
        block_id.clone(),
        BlockKind::ReglueTorus { a: tau, b: sigma },
        &ChartSet::new(),
    )?;

    let recursive = plan_torus_letters(head)?;
    let rec_residual = recursive.residual[0].clone();
    let inverse_letter = TorusLetter {
        generator: last.generator,
        exponent: -last.exponent.clone(),
    };
    let cap_letters = [inverse_letter];
    let cap = plan_torus_letters(&cap_letters)?.prefixed(&format!("cap{k}."));
    let cap_residual = cap.residual[0].clone();

    let mut plan = Plan::union(Plan::from_block(block), recursive)?;
    plan = Plan::union(plan, cap)?;
    plan.glue(
        SlotRef::new(block_id.clone(), "b"),
        cap_residual,
        torus_chain_witness(&cap_letters)?,
    )?;
    plan.glue(
        SlotRef::new(block_id, "a_inv"),
        rec_residual,
        torus_chain_witness(head)?,
    )?;
    Ok(plan)
}

fn chart_set_for(name: &str, chart: &SurfaceChart) -> ChartSet {
    let mut set = ChartSet::new();
    if builtin_chart(name).is_none() {
        set.insert(name, chart.clone());
    }
    set
}

/// Plan whose residual boundary is the surface bundle `Σ(w)` over a genus ≥ 2
/// chart.
///
/// One twist: a three-boundary block relating the product bundle to the
/// twisted bundle across a torus-form twist slot; its product slot is capped
/// by an axiom block and the twist slot by a torus plan. Longer words peel
/// the last twist with a fiber-form block whose twist slot is capped by the
/// one-twist construction.
pub fn plan_surface_bundle(
    chart_name: &str,
    chart: &SurfaceChart,
    word: &TwistWord,
) -> Result<Plan, PlanError> {
    if chart.genus() < 2 {
        return Err(PlanError::GenusTooSmall {
            genus: chart.genus(),
        });
    }
    if let Some(builtin) = builtin_chart(chart_name) {
        if builtin != *chart {
            return Err(PlanError::ChartConflict {
                name: chart_name.to_string(),
            });
        }
    }
    chart.check_word(word)?;
    let letters = word.split_single()?;
    if letters.is_empty() {
        return Err(PlanError::EmptyMonodromy);
    }
    plan_surface_letters(chart_name, chart, &letters)
}

fn plan_surface_letters(
    chart_name: &str,
    chart: &SurfaceChart,
    letters: &[(String, i64)],
) -> Result<Plan, PlanError> {
    let charts = chart_set_for(chart_name, chart);
    let k = letters.len();
    let (head, tail) = letters.split_at(k - 1);
    let (curve, exponent) = (&tail[0].0, tail[0].1);

    if k == 1 {
        let block = Block::new(
            "sreglue1",
            BlockKind::ReglueSurface {
                chart: chart_name.to_string(),
                base: TwistWord::empty(),
                curve: curve.clone(),
                exponent: exponent as i8,
                form: RegluingForm::Torus,
            },
            &charts,
        )?;
        let fiber_cap = Block::new(
            "fcap1",
            BlockKind::CapProduct {
                fiber: FiberDesc::Genus(chart.genus()),
            },
            &charts,
        )?;
        // the torus-form twist slot reads T²(L^e); cap it with the plan for L^{-e}
        let cap_letter = TorusLetter::new(TorusGen::L, -exponent);
        let torus_cap = plan_torus_letters(std::slice::from_ref(&cap_letter))?.prefixed("ecap1.");
        let torus_cap_residual = torus_cap.residual[0].clone();

        let mut plan = Plan::from_block(block);
        plan.charts = charts_to_embed(chart_name, chart);
        plan = Plan::union(plan, Plan::from_block(fiber_cap))?;
        plan = Plan::union(plan, torus_cap)?;
        plan.glue(
            SlotRef::new("sreglue1", "base_inv"),
            SlotRef::new("fcap1", "cap"),
            GlueWitness::InverseExact,
        )?;
        plan.glue(
            SlotRef::new("sreglue1", "e"),
            torus_cap_residual,
            GlueWitness::InverseExact,
        )?;
        return Ok(plan);
    }

    let base = TwistWord::from_letters(head.iter().cloned());
    let block_id = format!("sreglue{k}");
    let block = Block::new(
        block_id.clone(),
        BlockKind::ReglueSurface {
            chart: chart_name.to_string(),
            base,
            curve: curve.clone(),
            exponent: exponent as i8,
            form: RegluingForm::Fiber,
        },
        &charts,
    )?;

    let recursive = plan_surface_letters(chart_name, chart, head)?;
    let rec_residual = recursive.residual[0].clone();
    let twist_cap = plan_surface_letters(chart_name, chart, &[(curve.clone(), -exponent)])?
        .prefixed(&format!("pcap{k}."));
    let twist_cap_residual = twist_cap.residual[0].clone();

    let mut plan = Plan::union(Plan::from_block(block), recursive)?;
    plan = Plan::union(plan, twist_cap)?;
    plan.glue(
        SlotRef::new(block_id.clone(), "base_inv"),
        rec_residual,
        GlueWitness::InverseExact,
    )?;
    plan.glue(
        SlotRef::new(block_id, "e"),
        twist_cap_residual,
        GlueWitness::InverseExact,
    )?;
    Ok(plan)
}

fn charts_to_embed(
    name: &str,
    chart: &SurfaceChart,
) -> std::collections::BTreeMap<String, SurfaceChart> {
    let mut map = std::collections::BTreeMap::new();
    if builtin_chart(name).is_none() {
        map.insert(name.to_string(), chart.clone());
    }
    map
}

/// Plan realizing a cobordism bounded by the first manifolds of the given
/// move sequences.
///
/// Each sequence becomes a chain of three-boundary move blocks whose twist
/// slots are capped by bundle plans. The terminal product boundary is capped
/// by an axiom block when only one sequence is given, glued directly to the
/// other chain when both end in the same fiber, and bridged otherwise.
pub fn plan_cobordism(
    seq_m: &MoveSequence,
    seq_n: Option<&MoveSequence>,
) -> Result<Plan, PlanError> {
    let (plan_m, terminal_m) = chain_plan(seq_m, "m")?;
    match seq_n {
        None => {
            let cap = Block::new(
                "pcap",
                BlockKind::CapProduct {
                    fiber: FiberDesc::Genus(seq_m.terminal_genus),
                },
                &ChartSet::new(),
            )?;
            let mut plan = Plan::union(plan_m, Plan::from_block(cap))?;
            plan.glue(
                terminal_m,
                SlotRef::new("pcap", "cap"),
                GlueWitness::InverseExact,
            )?;
            Ok(plan)
        }
        Some(seq_n) => {
            let (plan_n, terminal_n) = chain_plan(seq_n, "n")?;
            let mut plan = Plan::union(plan_m, plan_n)?;
            if seq_m.terminal_genus == seq_n.terminal_genus {
                plan.glue(terminal_m, terminal_n, GlueWitness::InverseExact)?;
            } else {
                let bridge = Block::new(
                    "bridge",
                    BlockKind::CapBridge {
                        left: FiberDesc::Genus(seq_m.terminal_genus),
                        right: FiberDesc::Genus(seq_n.terminal_genus),
                    },
                    &ChartSet::new(),
                )?;
                plan = Plan::union(plan, Plan::from_block(bridge))?;
                plan.glue(
                    terminal_m,
                    SlotRef::new("bridge", "left"),
                    GlueWitness::InverseExact,
                )?;
                plan.glue(
                    terminal_n,
                    SlotRef::new("bridge", "right"),
                    GlueWitness::InverseExact,
                )?;
            }
            Ok(plan)
        }
    }
}

/// Builds one move chain; returns the plan and its terminal product slot.
fn chain_plan(seq: &MoveSequence, prefix: &str) -> Result<(Plan, SlotRef), PlanError> {
    if seq.steps.is_empty() {
        return Err(PlanError::MalformedSequence {
            reason: "sequence has no steps".into(),
        });
    }
    if seq.terminal_genus == 0 {
        return Err(PlanError::MalformedSequence {
            reason: "terminal product genus must be at least 1".into(),
        });
    }
    for window in seq.steps.windows(2) {
        if window[0].to != window[1].from {
            return Err(PlanError::MalformedSequence {
                reason: format!(
                    "step endpoints do not chain: {:?} is followed by {:?}",
                    window[0].to, window[1].from
                ),
            });
        }
    }

    let mut plan: Option<Plan> = None;
    let mut previous_to: Option<SlotRef> = None;
    let last_index = seq.steps.len() - 1;
    for (i, step) in seq.steps.iter().enumerate() {
        let to = if i == last_index {
            MoveEndpoint::Product {
                genus: seq.terminal_genus,
            }
        } else {
            MoveEndpoint::Opaque {
                name: step.to.clone(),
            }
        };
        let block_id = format!("{prefix}.step{}", i + 1);
        let block = Block::new(
            block_id.clone(),
            BlockKind::ReglueMove {
                from: step.from.clone(),
                to,
                fiber_genus: step.fiber_genus,
                twist: step.twist.clone(),
            },
            &ChartSet::new(),
        )?;

        // cap the twist slot with a bundle plan for the performed twist
        let (cap, cap_witness) = match &step.twist {
            MoveTwist::Torus(word) => {
                let letters = word.split_single()?;
                if letters.is_empty() {
                    return Err(PlanError::MalformedSequence {
                        reason: "move twist must be nonempty".into(),
                    });
                }
                let cap = plan_torus_letters(&letters)?;
                (cap, torus_chain_witness(&letters)?)
            }
            MoveTwist::Surface(word) => {
                let chart = standard_chart(step.fiber_genus);
                let cap = plan_surface_bundle(&format!("std{}", step.fiber_genus), &chart, word)?;
                (cap, GlueWitness::InverseExact)
            }
        };
        let cap = cap.prefixed(&format!("{prefix}.ecap{}.", i + 1));
        let cap_residual = cap.residual[0].clone();

        let mut step_plan = Plan::union(Plan::from_block(block), cap)?;
        step_plan.glue(
            SlotRef::new(block_id.clone(), "e"),
            cap_residual,
            cap_witness,
        )?;

        plan = Some(match plan {
            None => step_plan,
            Some(p) => {
                let mut joined = Plan::union(p, step_plan)?;
                joined.glue(
                    previous_to.take().expect("previous step recorded"),
                    SlotRef::new(block_id.clone(), "from"),
                    GlueWitness::OpaqueMatch,
                )?;
                joined
            }
        });
        previous_to = Some(SlotRef::new(block_id, "to"));
    }
    Ok((
        plan.expect("at least one step"),
        previous_to.expect("terminal slot"),
    ))
}
