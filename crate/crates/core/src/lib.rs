//! Tracking the psychological point of view of third-person narrative.
//!
//! Input is a stream of annotated sentences and paragraph/scene breaks. Each
//! sentence is read as either the subjective sentence of some character (its
//! *subjective character*, SC) or as objective, based on its annotated
//! features and on a discourse context summarising what came before.
//!
//! ```
//! use povtrack::{track, CharacterSet, Context, Interpretation, SignificancePolicy, Start};
//! use povtrack::situation::new_context;
//!
//! let after = new_context(&Interpretation::Subjective(CharacterSet::of(["Zoe"])), &Context::initial());
//! assert_eq!(after.last_sc, CharacterSet::of(["Zoe"]));
//! assert!(track(&[], Start::default(), SignificancePolicy::default()).is_empty());
//! ```

pub mod corpus;
pub mod engine;
pub mod error;
pub mod eval;
pub mod model;
pub mod registry;
pub mod situation;
pub mod trace;

pub use corpus::{load_document, validate_gold, Document, GoldWarning};
pub use engine::{track, Analysis, Frame, SignificancePolicy, Start, Step, StepKind, SubjectiveHistory};
pub use error::Error;
pub use eval::{evaluate, EvalReport, PovOperation};
pub use model::{
    Break, CharacterId, CharacterSet, Context, FeatureSet, InputItem, Interpretation, SoaType, TextSituation,
};
pub use registry::{PseCategory, Registry};
pub use trace::{render_interpretations, render_trace};

/// Runs the tracker over a whole document, starting from its preamble.
pub fn track_document(doc: &Document, policy: SignificancePolicy) -> Vec<Step> {
    track(&doc.items, doc.start(), policy)
}
