//! Measures of how far a language-defining device strays from plain finite
//! automata, with brute-force oracles to back every optimized computation.
//!
//! Four devices, four measures:
//!
//! * [`grammar`] / [`dnreg`] — context-free grammars and the degree of
//!   non-regularity: the minimum number of non-right-linear rule
//!   applications needed to derive a word.
//! * [`pda`] — pushdown automata and push complexity: the minimum number of
//!   push moves over accepting computations.
//! * [`groups`] / [`efa`] — finite automata extended with a group-valued
//!   register and group memory complexity: the minimum number of
//!   register-changing steps over accepting computations.
//! * [`fatl`] — finite automata with translucent letters and jumping
//!   complexity: the minimum number of jump steps over accepting
//!   computations.
//!
//! Each measure comes with a per-length [`profile::Profile`], a
//! bounded-budget construction producing an [`nfa::Nfa`] for the sublanguage
//! of words whose measure stays under a budget, and boundedness checks built
//! on those constructions. The [`oracle`] module holds the ground-truth
//! machinery: exhaustive enumeration, reference measure computation by
//! enumerating all computations, grammar/automaton intersection, and growth
//! fitting for measured profiles.

pub mod corpus;
pub mod dnreg;
pub mod efa;
pub mod error;
pub mod fatl;
pub mod grammar;
pub mod groups;
pub mod nfa;
pub mod oracle;
pub mod pda;
pub mod profile;

pub use error::{Error, Result};
pub use profile::Profile;

/// Outcome of a bounded-exhaustive boundedness check: a verified bound up to
/// the searched length, a concrete counterexample word, or an aborted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    BoundedUpTo(u32),
    Counterexample(String),
    Unknown,
}

/// Resource limits for searches and enumerations. The defaults are sized for
/// desk-scale experiments; raise them explicitly when you mean to.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Cap on `|V|^n` when a profile or slice enumerates all words of a
    /// length.
    pub words_per_length: u64,
    /// Cap on visited search nodes (configurations, cost-map states, ...).
    pub search_nodes: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            words_per_length: 1 << 20,
            search_nodes: 50_000_000,
        }
    }
}
