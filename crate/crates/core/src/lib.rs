//! Prefix-preserving maps over finite group alphabets, realized as Mealy machines.
//!
//! A finite group `G` (given by explicit operation tables) induces a group
//! structure on sequences over `G`. Maps on such sequences whose first `k`
//! output symbols depend only on the first `k` input symbols form a nearring
//! under pointwise addition and composition, and every such map with finite
//! memory is exactly a Mealy machine with input/output alphabet `G`. This
//! crate provides:
//!
//! - [`group`]: finite groups as Cayley tables, zero-preserving function
//!   tables, and a solver for the translation equation `f(x+k) - f(x) = x`;
//! - [`mealy`]: Mealy machines over a group alphabet with the nearring
//!   operations (add, negate, compose), exact equivalence checking, and the
//!   structural predicates (zero-symmetric, delaying/Moore);
//! - [`radical`]: the amnesiac endomorphism `α` (forget the input, keep the
//!   clock), inverses of `1 - n` for delaying `n`, position-selective
//!   machines `f^{i,j}`, and the decomposition of `α`-fixed machines into
//!   eventually periodic sequences of output maps;
//! - [`embedding`]: an encoding of the zero-preserving self-maps of a group
//!   `G` as machines over another group `K`, given a subgroup of `K^n`
//!   mapping homomorphically onto `G`;
//! - [`oracle`]: exhaustive realization of the tiny restricted nearrings
//!   `PP_n(G)` as triangular maps, enumeration of their left ideals, and a
//!   definitional brute-force computation of the Jacobson 2-radical;
//! - [`files`]: JSON file formats for machines and encoding schemes, plus
//!   the text shorthand for group specifications used by the CLI.

pub mod embedding;
pub mod files;
pub mod group;
pub mod mealy;
pub mod oracle;
pub mod radical;

pub use group::{FiniteGroup, FunctionTable, GroupError, GroupSpec, PropertyXWitness};
pub use mealy::{MachineError, MealyMachine};
