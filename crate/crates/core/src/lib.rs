//! Maximal subgroup growth of the polycyclic groups `G_k` and `H_k`.
//!
//! Three independent routes compute `m_n`, the number of maximal subgroups
//! of index `n`:
//!
//! - [`formula`]: closed forms.
//! - [`recursion`]: `m_n(N ⋊ G) = m_n(G) + Σ |Der(G, N/N_0)|` over maximal
//!   submodules `N_0`, built from [`modrep`] and [`cocycle`].
//! - [`oracle`]: enumeration of all index-`n` subgroups by coset tables,
//!   keeping those whose coset action is primitive.

pub mod arith;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod formula;
pub mod lattice;
pub mod matrix;
pub mod model;
pub mod modrep;
pub mod oracle;
pub mod recursion;

pub use error::{Error, Result};
pub use model::{Family, GroupPresentation, GroupSpec};
