//! Morrey norms of finitely supported sequences on the integers.
//!
//! The crate computes the centered and span-window discrete Morrey norms,
//! the continuous Morrey norm of the step function induced by a sequence,
//! generates the two counterexample families used to witness proper
//! inclusion of the spaces, and turns truncated norm computations into
//! divergence / boundedness certificates and inclusion verdicts.

pub mod analysis;
pub mod discnorm;
pub mod error;
pub mod genseq;
pub mod seqcore;
pub mod stepfn;

pub use error::{MorreyError, Result};
pub use seqcore::{LogValue, MorreyParams, SparseSequence, Window};
