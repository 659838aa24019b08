//! Contradiction-aware curation of pairwise preference data.
//!
//! Annotator judgments for one prompt become a directed preference graph:
//! responses are nodes, and a confident judgment is an edge from the
//! preferred response, weighted by the preference probability. Cycles in
//! that graph are contradictions. The solver initializes a kept graph with
//! a maximum-weight spanning forest, convicts the cycle-closing edges it
//! can blame with a cycle-path witness, and admits new ordering edges one
//! at a time until every edge is kept, contradictory, or omitted. The edges
//! on witness paths are exported as training pairs.
//!
//! The crate also ships baseline selectors (random and max-confidence), a
//! verification pass for the solver's two guarantees, contradiction
//! analytics, and a synthetic annotator over hidden rewards for end-to-end
//! evaluation. The `contrasolver` binary wires it all into batch runs.

pub mod analysis;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod select;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
