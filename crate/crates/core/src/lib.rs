//! Compiles offset-annotated extraction corpora into easy, hard and main
//! training files for a text-to-structure model, and scores the model's
//! structured outputs against gold offsets.
//!
//! The pieces, in pipeline order:
//!
//! - [`model`]: canonical instances, schemas, validation
//! - [`sel`]: the bracketed target language (serializer, recovering parser)
//! - [`prompt`]: hint/marker prompt construction
//! - [`skills`]: easy-stage decomposition
//! - [`hard`]: hard-stage concatenation
//! - [`io`]: line-delimited JSON files, BIO conversion, low-resource sampling
//! - [`compile`]: the three stages end to end
//! - [`score`]: grounding and micro-F1

pub mod compile;
pub mod error;
pub mod hard;
pub mod io;
pub mod model;
pub mod par;
pub mod prompt;
pub mod score;
pub mod sel;
pub mod skills;

pub use compile::{compile, compile_with, CompileConfig, CompileOutput, CompileSummary};
pub use model::{CanonicalInstance, Schema, Span, Task};
pub use par::Execution;
pub use sel::{parse, serialize, structure_of, SelNode, SelStructure};
