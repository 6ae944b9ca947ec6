//! Relaxation-based belief revision for description-logic knowledge bases.

pub mod concept;
pub mod error;
pub mod gen;
pub mod kb;
pub mod normal;
pub mod oracle;
pub mod par;
pub mod reasoner;
pub mod relax;
pub mod revise;
pub mod syntax;

pub use concept::{Concept, Dialect, Name};
pub use error::{Error, Position, Result};
pub use kb::{KnowledgeBase, RoleRef, Sentence, Signature};
