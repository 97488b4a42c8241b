//! Evidence-aware segmentation of documents into self-contained subtexts.
//!
//! Each relation seeds a base window (the sentences holding its subject and
//! object mentions plus its evidence sentences), the window is expanded by
//! `k` sentences around the anchor and clamped at the document boundary,
//! and overlapping windows are merged to a fixpoint. The Korean window is
//! primary; the Hanja window is derived from the Hanja annotations of the
//! relations that landed in the subtext. All annotations are re-based to
//! local sentence coordinates, so a subtext is a valid stand-alone document.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::corpus::{
    validate_document, Document, Entity, Lang, Mention, RelationInstance, SourceRef, Violation,
};

/// Window size for subtext extraction. `k` counts sentences on each side of
/// a relation's anchor sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmenterConfig {
    pub k: usize,
}

impl SegmenterConfig {
    /// The window sizes the corpus is conventionally distributed at.
    pub const PRESETS: [usize; 5] = [0, 1, 2, 4, 8];

    pub fn new(k: usize) -> Self {
        SegmenterConfig { k }
    }
}

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("document {doc_id} relation {relation_index}: subject has no Korean mention")]
    NoAnchor {
        doc_id: String,
        relation_index: usize,
    },
    #[error("document {doc_id} has no relations; filter relation-free documents before segmenting")]
    NoRelations { doc_id: String },
    #[error("document {doc_id} fails validation: {first}")]
    InvalidDocument {
        doc_id: String,
        first: Box<Violation>,
    },
}

/// The per-relation seed window, before expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseWindow {
    pub relation_index: usize,
    /// Smallest Korean sentence index holding a subject mention.
    pub anchor: usize,
    /// Anchor plus all subject/object Korean mention sentences plus all
    /// Korean evidence sentences.
    pub window: BTreeSet<usize>,
}

/// A contiguous bilingual window cut from a source document, with all
/// annotations re-based to local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Subtext {
    /// The subtext as a stand-alone document (`doc_id` derived from the
    /// source id, window size, and position).
    pub document: Document,
    /// Inclusive source ranges and contributing relation indices.
    pub provenance: SourceRef,
    pub warnings: Vec<String>,
}

impl Subtext {
    pub fn range_kor(&self) -> (usize, usize) {
        (self.provenance.range_kor[0], self.provenance.range_kor[1])
    }

    pub fn range_han(&self) -> (usize, usize) {
        (self.provenance.range_han[0], self.provenance.range_han[1])
    }
}

/// Builds the seed window for one relation.
///
/// The anchor is the first Korean sentence containing a subject mention;
/// the window adds every sentence holding a subject or object Korean
/// mention and every Korean evidence sentence.
pub fn base_window(
    doc: &Document,
    relation_index: usize,
) -> Result<BaseWindow, SegmentError> {
    let rel = &doc.relations[relation_index];
    let mention_sentences = |id: &str| -> BTreeSet<usize> {
        doc.entity(id)
            .map(|e| e.mentions_kor.iter().map(|m| m.sentence_index).collect())
            .unwrap_or_default()
    };
    let subject_sentences = mention_sentences(&rel.subject_id);
    let anchor = *subject_sentences
        .iter()
        .next()
        .ok_or_else(|| SegmentError::NoAnchor {
            doc_id: doc.doc_id.clone(),
            relation_index,
        })?;
    let mut window = subject_sentences;
    window.extend(mention_sentences(&rel.object_id));
    window.extend(rel.evidence_kor.iter().copied());
    window.insert(anchor);
    Ok(BaseWindow {
        relation_index,
        anchor,
        window,
    })
}

/// Expands a base window by `k` sentences around the anchor and clamps at
/// the document boundary. The result always contains the whole base window.
pub fn expand(window: &BaseWindow, k: usize, n: usize) -> (usize, usize) {
    let lo_window = *window.window.iter().next().expect("window is non-empty");
    let hi_window = *window.window.iter().next_back().expect("window is non-empty");
    let lo = window.anchor.saturating_sub(k).min(lo_window);
    let hi = (window.anchor + k).max(hi_window).min(n - 1);
    (lo, hi)
}

/// Merges intervals sharing at least one sentence until no pair overlaps.
/// Output is sorted by `lo`, pairwise disjoint, with provenance lists
/// concatenated and sorted.
pub fn merge_to_fixpoint(
    intervals: &[((usize, usize), Vec<usize>)],
) -> Vec<((usize, usize), Vec<usize>)> {
    let mut sorted: Vec<_> = intervals.to_vec();
    sorted.sort_by_key(|((lo, hi), _)| (*lo, *hi));
    let mut out: Vec<((usize, usize), Vec<usize>)> = Vec::new();
    for ((lo, hi), prov) in sorted {
        match out.last_mut() {
            // Inclusive intervals overlap when the next one starts at or
            // before the current end; mere adjacency does not merge.
            Some(((_, cur_hi), cur_prov)) if lo <= *cur_hi => {
                *cur_hi = (*cur_hi).max(hi);
                cur_prov.extend(prov);
            }
            _ => out.push(((lo, hi), prov)),
        }
    }
    for (_, prov) in &mut out {
        prov.sort_unstable();
    }
    out
}

/// Derives the Hanja window for a merged Korean subtext: the span of all
/// Hanja evidence and mention sentences of its relations, expanded by `k`
/// and clamped. Without any Hanja annotation the whole Hanja text is kept
/// and a warning recorded.
pub fn align_hanja(
    doc: &Document,
    relation_indices: &[usize],
    k: usize,
    warnings: &mut Vec<String>,
) -> (usize, usize) {
    let m = doc.sentences_han.len();
    let mut anchors: BTreeSet<usize> = BTreeSet::new();
    for &ri in relation_indices {
        let rel = &doc.relations[ri];
        anchors.extend(rel.evidence_han.iter().copied());
        for id in [&rel.subject_id, &rel.object_id] {
            if let Some(e) = doc.entity(id) {
                anchors.extend(e.mentions_han.iter().map(|men| men.sentence_index));
            }
        }
    }
    match (anchors.iter().next(), anchors.iter().next_back()) {
        (Some(&min), Some(&max)) => (min.saturating_sub(k), (max + k).min(m - 1)),
        _ => {
            warnings.push(format!(
                "document {}: relations {:?} carry no Hanja annotations; keeping the full Hanja text",
                doc.doc_id, relation_indices
            ));
            (0, m - 1)
        }
    }
}

fn rebase_mention(m: &Mention, lo: usize) -> Mention {
    Mention {
        language: m.language,
        sentence_index: m.sentence_index - lo,
        char_start: m.char_start,
        char_end: m.char_end,
        surface: m.surface.clone(),
    }
}

/// Segments a validated document into subtexts at window size `cfg.k`.
///
/// Every relation lands in exactly one subtext; output Korean ranges are
/// pairwise disjoint and sorted.
pub fn build_subtexts(doc: &Document, cfg: SegmenterConfig) -> Result<Vec<Subtext>, SegmentError> {
    if let Some(first) = validate_document(doc).into_iter().next() {
        return Err(SegmentError::InvalidDocument {
            doc_id: doc.doc_id.clone(),
            first: Box::new(first),
        });
    }
    if doc.relations.is_empty() {
        return Err(SegmentError::NoRelations {
            doc_id: doc.doc_id.clone(),
        });
    }

    let n = doc.sentences_kor.len();
    let mut intervals = Vec::with_capacity(doc.relations.len());
    for ri in 0..doc.relations.len() {
        let bw = base_window(doc, ri)?;
        intervals.push((expand(&bw, cfg.k, n), vec![ri]));
    }
    let merged = merge_to_fixpoint(&intervals);

    let mut out = Vec::with_capacity(merged.len());
    for (idx, ((lo, hi), relation_indices)) in merged.iter().enumerate() {
        out.push(cut_subtext(doc, cfg.k, idx, (*lo, *hi), relation_indices));
    }
    Ok(out)
}

fn cut_subtext(
    doc: &Document,
    k: usize,
    index: usize,
    (lo, hi): (usize, usize),
    relation_indices: &[usize],
) -> Subtext {
    let mut warnings = Vec::new();
    let (hlo, hhi) = align_hanja(doc, relation_indices, k, &mut warnings);

    let participating: BTreeSet<&str> = relation_indices
        .iter()
        .flat_map(|&ri| {
            let r = &doc.relations[ri];
            [r.subject_id.as_str(), r.object_id.as_str()]
        })
        .collect();

    // Participating entities keep every mention (all are in range by
    // construction). Other entities are carried along when they have at
    // least one Korean mention inside the window, with out-of-range
    // mentions dropped.
    let mut entities = Vec::new();
    for e in &doc.entities {
        let keep_all = participating.contains(e.entity_id.as_str());
        let mentions_kor: Vec<Mention> = e
            .mentions_kor
            .iter()
            .filter(|m| keep_all || (m.sentence_index >= lo && m.sentence_index <= hi))
            .map(|m| rebase_mention(m, lo))
            .collect();
        if mentions_kor.is_empty() {
            continue;
        }
        let mentions_han: Vec<Mention> = e
            .mentions_han
            .iter()
            .filter(|m| keep_all || (m.sentence_index >= hlo && m.sentence_index <= hhi))
            .map(|m| rebase_mention(m, hlo))
            .collect();
        entities.push(Entity {
            entity_id: e.entity_id.clone(),
            entity_type: e.entity_type,
            mentions_kor,
            mentions_han,
        });
    }

    let relations: Vec<RelationInstance> = relation_indices
        .iter()
        .map(|&ri| {
            let r = &doc.relations[ri];
            RelationInstance {
                subject_id: r.subject_id.clone(),
                object_id: r.object_id.clone(),
                label: r.label,
                evidence_kor: r.evidence_kor.iter().map(|&s| s - lo).collect(),
                evidence_han: r.evidence_han.iter().map(|&s| s - hlo).collect(),
            }
        })
        .collect();

    let document = Document {
        doc_id: format!("{}#sl{}-{}", doc.doc_id, k, index),
        sentences_kor: doc.sentences_kor[lo..=hi].to_vec(),
        sentences_han: doc.sentences_han[hlo..=hhi].to_vec(),
        entities,
        relations,
        metadata: doc.metadata.clone(),
    };
    Subtext {
        document,
        provenance: SourceRef {
            doc_id: doc.doc_id.clone(),
            sl: k,
            range_kor: [lo, hi],
            range_han: [hlo, hhi],
            relation_indices: relation_indices.to_vec(),
        },
        warnings,
    }
}

/// Maps a local (subtext) sentence index back to the source document.
pub fn to_source_index(sub: &Subtext, lang: Lang, local: usize) -> usize {
    match lang {
        Lang::Kor => sub.provenance.range_kor[0] + local,
        Lang::Han => sub.provenance.range_han[0] + local,
    }
}
