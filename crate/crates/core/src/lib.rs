//! Symbolic assembly plans for Haken 4-manifold cobordisms.
//!
//! Given the monodromy of a surface-bundle over the circle (or a sequence of
//! split-and-reglue moves on a 3-manifold), this crate produces an explicit
//! *assembly plan* — a list of elementary 4-dimensional blocks together with
//! gluings between their boundary components — whose residual boundary is the
//! requested 3-manifold. Every gluing carries a machine-checkable witness, and
//! an independent verifier re-derives all block boundaries from block
//! parameters, so a plan doubles as a certificate.
//!
//! The crate is organized in four layers:
//!
//! - [`sl2z`] — exact integer 2×2 arithmetic and factorization of torus-bundle
//!   monodromies into Dehn-twist generator words.
//! - [`mcg`] — twist words over a declared curve system on a higher-genus
//!   surface: rewriting (cancellation, commutation, lantern substitution) and
//!   the homological transvection action used as a necessary-condition oracle.
//! - [`bundles`] — oriented boundary labels for blocks and the gluing matcher
//!   with tiered witnesses.
//! - [`cobordism`] — block kinds, plan generators, plan files, DOT export, and
//!   the verifier.

pub mod bundles;
pub mod cobordism;
pub mod mcg;
pub mod sl2z;
