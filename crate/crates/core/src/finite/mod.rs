//! Finite groups acting on finite sets, and the computations on `A ≀_X B`
//! that are exact at this scale.

pub mod action;
pub mod autgood;
pub mod automorphisms;
pub mod cohomology;
pub mod group;
pub mod hypotheses;
pub mod intertwiner;
pub mod module;
pub mod theorem_b;

pub use action::{bundled_action, bundled_actions, FiniteAction, OrbitData};
pub use group::FiniteGroup;
