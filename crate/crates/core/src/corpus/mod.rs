//! Bilingual annotated-document data model, validation, file format, and
//! the deterministic train/valid/test split.

mod format;
mod split;
mod types;
mod validate;

pub use format::{
    document_to_record, read_corpus, read_corpus_file, write_corpus, write_corpus_file, FileMeta,
    IngestOutcome, IngestReport, RawEntity, RawMention, RawRecord, RawRelation, SourceRef,
};
pub use split::{split_train_valid_test, Split, SplitAssignment};
pub use types::{
    Document, Entity, EntityType, Lang, Mention, Metadata, RelationInstance, RelationType,
};
pub use validate::{hanja_gaps, validate_document, Violation, ViolationRule};

use thiserror::Error;

/// Errors raised by corpus ingestion and the split procedure.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("empty corpus: at least one document is required")]
    EmptyCorpus,
    #[error("bucket size must be at least 4, got {0}")]
    BadBucketSize(usize),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown entity type {0:?}")]
    UnknownEntityType(String),
    #[error("unknown relation label {0:?}")]
    UnknownRelationLabel(String),
    #[error("document {doc_id}: relation {index} references surface {surface:?} not found in any entity or sentence")]
    UnresolvedSurface {
        doc_id: String,
        index: usize,
        surface: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
