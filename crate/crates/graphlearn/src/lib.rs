//! Learnability analysis for countably infinite graphs.
//!
//! A graph lives on vertex set ℕ and is described by a [`GraphSpec`], a small
//! compositional language of graph families whose edge relation is total and
//! decidable. Around that oracle the crate builds:
//!
//! - finite-support permutations and the presented copies they induce
//!   ([`perm`], [`graph`]);
//! - windowed hypothesis classes of such copies and configuration-realization
//!   searches ([`classes`]);
//! - brute-force witness searches for shattering, threshold staircases and
//!   neighborhood staircases ([`dimensions`]);
//! - an online game engine with two explicit learners and a version-space
//!   adversary ([`learners`]);
//! - a four-class learnability classifier with re-checkable certificates
//!   ([`classifier`]);
//! - three staged prefix-to-graph reductions ([`reductions`]).
//!
//! Every search is budgeted: window parameters bound the search space, and a
//! [`Meter`] caps the number of elementary checks. Searches therefore return
//! sound "found a witness" certificates or honest "no witness within budget"
//! reports, never claims about the full infinite object.
//!
//! All searches are deterministic: identical inputs produce byte-identical
//! outputs.

pub mod certificate;
pub mod classes;
pub mod classifier;
pub mod dimensions;
pub mod error;
pub mod graph;
pub mod learners;
pub mod perm;
pub mod reductions;

/// Vertices are natural numbers.
pub type Vertex = u64;

pub use certificate::CertificateFile;
pub use classifier::{classify, ClassificationReport, ClassifyBudgets, Verdict};
pub use error::{Error, Meter, DEFAULT_BUDGET};
pub use graph::{GraphSpec, PresentedCopy, SizeRule, StageRecord, Tail};
pub use perm::FiniteSupportPermutation;
