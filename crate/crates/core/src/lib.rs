//! Enumeration and classification of finite-index subgroups of the modular
//! group, represented by permutation pairs `(sigma_S, sigma_R)`.
//!
//! Permutations compose left to right throughout: `a.then(b)` applies `a`
//! first. With this convention `sigma_T = sigma_S.then(sigma_R)`.

pub mod analysis;
pub mod bsgs;
pub mod canonical;
pub mod conjugacy;
pub mod cosets;
pub mod database;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod pairs;
pub mod perm;

pub use perm::{CycleType, PermError, Permutation};
