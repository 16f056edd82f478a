//! Classification of comprehension instances `exists s. forall y. (y in s <-> A(y))`
//! over the language of membership and equality.
//!
//! A body is *pathological* when its instance (with extensionality, by
//! default) is refuted by the resolution prover, and *satisfiable* when the
//! finite model finder exhibits a model. Every witness is re-checked by an
//! independent checker before it is reported.

pub mod catalog;
pub mod classify;
pub mod comprehension;
pub mod enumerate;
pub mod formula;
pub mod model;
pub mod prover;

pub use classify::{Budgets, Classifier, Verdict, VerdictTag};
pub use comprehension::Sentence;
pub use formula::{parse, Formula, PredicateBody, Var};

/// Version string stamped into catalog records.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
