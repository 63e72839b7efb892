//! Accordion graphs `A[n,k]` and related quartic families: constructors,
//! perfect-matching and pairing enumeration, exhaustive PMH / PH deciders
//! with machine-checkable witnesses, and isomorphism with quartic
//! circulants.

pub mod error;
pub mod graph;
pub mod hamiltonicity;
pub mod harness;
pub mod isomorphism;
pub mod matching;

pub use error::{Error, Result};
pub use graph::{AccordionParams, CirculantParams, Graph, Label};
pub use matching::Matching;
