//! Finite groups as tables of element indices, with the identity at index 0.

mod action;
pub mod catalog;
mod enumerate;
mod hom;
mod iso;
mod semidirect;
mod table;

pub use action::{validate_action_table, ActionError, GroupAction};
pub use enumerate::{automorphisms, enumerate_actions, enumerate_endos, enumerate_homs, enumerate_hom_tables};
pub use hom::{centralizes, commuting_witness, hom_witness, is_hom, GroupHom, Subgroup};
pub use iso::find_isomorphism;
pub use semidirect::{semidirect_product, SemidirectProduct};
pub use table::{FiniteGroup, Group};
pub(crate) use table::greedy_generators;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("empty operation table")]
    Empty,
    #[error("row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("{a}·{b} = {value} is not an element")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("no two-sided identity at the given index")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("not a homomorphism: f({0}·{1}) ≠ f({0})·f({1})")]
    NotHomomorphism(usize, usize),
    #[error("map has {found} entries, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("map entry {index} = {value} is not below {order}")]
    MapOutOfRange { index: usize, value: usize, order: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(&'static str),
    #[error("mismatch: {0}")]
    Mismatch(&'static str),
    #[error("invalid action: {0}")]
    ActionInvalid(#[from] ActionError),
}

/// The Mal'tsev operation `p(a, b, c) = a·b⁻¹·c`.
pub fn maltsev_p<G: Group>(g: &G, a: usize, b: usize, c: usize) -> usize {
    g.maltsev(a, b, c)
}
