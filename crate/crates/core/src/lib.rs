//! Core library for `birex`, a bilingual (Korean / Hanja) document-level
//! relation extraction toolkit.
//!
//! The library is organized around the lifecycle of an annotated parallel
//! corpus:
//!
//! - [`corpus`] — the document data model, schema validation, the
//!   line-delimited corpus file format, and the deterministic
//!   length-stratified train/valid/test split.
//! - [`segment`] — evidence-aware segmentation of documents into
//!   self-contained subtexts at a configurable window size, with aligned
//!   Hanja ranges and fully re-based annotations.
//! - [`stats`] — corpus statistics (token counts, entity/relation
//!   histograms), pluggable tokenizers, and the entity-centric fact query.
//! - [`autodiff`] — a small reverse-mode tape over `ndarray` matrices used
//!   by the model.
//! - [`model`] — the dual-encoder relation extraction network: two
//!   transformer encoders, bidirectional cross-attention with residual
//!   projection, coreference-aware entity pooling, per-language bilinear
//!   pair classifiers, and alpha-weighted logit fusion.
//! - [`train`] — the training loop (Adam), checkpointing, and metrics log.
//! - [`eval`] — micro precision/recall/F1 over predicted relation triples.
//! - [`synth`] — synthetic corpus generators used by tests, benchmarks, and
//!   the acceptance suite.

pub mod autodiff;
pub mod corpus;
pub mod eval;
pub mod model;
pub mod segment;
pub mod stats;
pub mod synth;
pub mod train;

pub use corpus::{
    Document, Entity, EntityType, Lang, Mention, Metadata, RelationInstance, RelationType,
};
pub use segment::{SegmenterConfig, Subtext};
