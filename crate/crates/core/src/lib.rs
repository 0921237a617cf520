//! Finite duality for Gödel algebras.
//!
//! Free Gödel algebras, their bounded-depth variants and coproducts are built
//! as upset algebras of closed-chain spaces over finite posets. Every
//! construction comes with an exhaustive verifier so that the identities it
//! relies on can be re-checked at small scale.

pub mod chainspace;
pub mod coproduct;
pub mod corpus;
pub mod error;
pub mod format;
pub mod freealg;
pub mod lattice;
pub mod nerve;
pub mod poset;
pub mod subset;
pub mod suites;

pub use chainspace::{ChainPoset, Variant};
pub use error::{Error, Result};
pub use lattice::{DistLattice, HeytingAlgebra, LatticeHom, UpsetAlgebra};
pub use poset::{Chain, PMorph, Poset};
pub use subset::Subset;
pub use suites::Certificate;

/// Caps on the exponential enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of chains any single enumeration may produce.
    pub chains: usize,
    /// Maximum number of search nodes visited by a morphism search.
    pub homs: usize,
    /// Maximum number of upsets materialized as algebra elements.
    pub upsets: usize,
    /// Maximum number of nodes in a materialized order table.
    pub order: usize,
    /// Largest generator count accepted by the free-algebra constructors.
    pub generators: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { chains: 1_000_000, homs: 100_000, upsets: 1 << 16, order: 8192, generators: 3 }
    }
}
