//! Line-delimited corpus file format: one UTF-8 JSON record per document.
//!
//! A record carries the parallel sentence lists, an entity list, relation
//! objects (`sbj_kor`, `sbj_han`, `obj_kor`, `obj_han`, `label`,
//! `evidence_kor`, `evidence_han`), and a `metadata` object (`book_title`,
//! `text_chapter`, `title`, `writer`, `year`, `book_volume`, `copyright`).
//!
//! Input files may be partial: mentions may carry only a surface string and
//! sentence index (offsets are resolved to the first exact occurrence, with
//! a warning on ambiguity), and relations may reference entities by surface
//! pair instead of id (resolved against the entity list, or synthesized
//! when no entity list is present). Files written by this module are always
//! fully explicit, so a round-trip is structurally lossless.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::types::{
    char_slice, Document, Entity, EntityType, Lang, Mention, Metadata, RelationInstance,
    RelationType,
};
use super::CorpusError;

/// Optional `_meta` header line embedded by tools that write corpus files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

/// Where a segmented record came from: source document, window size, and
/// the sentence ranges (inclusive) it was cut from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRef {
    pub doc_id: String,
    pub sl: usize,
    pub range_kor: [usize; 2],
    pub range_han: [usize; 2],
    /// Indices of the source document's relations that produced the window.
    pub relation_indices: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RawMention {
    pub sentence_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_end: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEntity {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_id: Option<String>,
    pub entity_type: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mentions_kor: Vec<RawMention>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mentions_han: Vec<RawMention>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRelation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbj_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbj_kor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sbj_han: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj_kor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obj_han: Option<String>,
    pub label: String,
    #[serde(default)]
    pub evidence_kor: Vec<usize>,
    #[serde(default)]
    pub evidence_han: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_id: Option<String>,
    pub text_kor: Vec<String>,
    pub text_han: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entities: Vec<RawEntity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RawRelation>,
    #[serde(default)]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceRef>,
}

/// Per-file ingest report: structural errors (skipped records) and
/// resolution warnings. Semantic violations are the validator's job.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub records_read: usize,
    pub documents: usize,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Default)]
pub struct IngestOutcome {
    pub documents: Vec<Document>,
    pub sources: Vec<Option<SourceRef>>,
    pub meta: Option<FileMeta>,
    pub report: IngestReport,
}

/// Reads a line-delimited corpus. Records that cannot be interpreted are
/// skipped and recorded in the report; the caller decides whether that is
/// fatal.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<IngestOutcome, CorpusError> {
    let mut out = IngestOutcome::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        // A `_meta` header may appear anywhere but is conventionally first.
        if let Ok(meta) = serde_json::from_str::<MetaLine>(trimmed) {
            if let Some(m) = meta.meta {
                out.meta.get_or_insert(m);
                continue;
            }
        }
        out.report.records_read += 1;
        let record: RawRecord = match serde_json::from_str(trimmed) {
            Ok(r) => r,
            Err(e) => {
                out.report
                    .errors
                    .push(format!("line {}: malformed record: {e}", lineno + 1));
                continue;
            }
        };
        let ordinal = out.report.records_read - 1;
        match resolve_record(record, ordinal, &mut out.report.warnings) {
            Ok((doc, source)) => {
                out.documents.push(doc);
                out.sources.push(source);
                out.report.documents += 1;
            }
            Err(e) => out.report.errors.push(format!("line {}: {e}", lineno + 1)),
        }
    }
    Ok(out)
}

pub fn read_corpus_file(path: &Path) -> Result<IngestOutcome, CorpusError> {
    let file = std::fs::File::open(path)?;
    read_corpus(BufReader::new(file))
}

#[derive(Deserialize)]
struct MetaLine {
    #[serde(rename = "_meta")]
    meta: Option<FileMeta>,
}

/// First exact occurrence of `surface` in `sentence`, as character offsets.
/// Returns the match plus the number of occurrences found.
fn find_surface(sentence: &str, surface: &str) -> (Option<(usize, usize)>, usize) {
    if surface.is_empty() {
        return (None, 0);
    }
    let chars: Vec<char> = sentence.chars().collect();
    let pat: Vec<char> = surface.chars().collect();
    if pat.len() > chars.len() {
        return (None, 0);
    }
    let mut first = None;
    let mut count = 0;
    for start in 0..=(chars.len() - pat.len()) {
        if chars[start..start + pat.len()] == pat[..] {
            count += 1;
            if first.is_none() {
                first = Some((start, start + pat.len()));
            }
        }
    }
    (first, count)
}

fn resolve_mention(
    raw: &RawMention,
    sentences: &[String],
    lang: Lang,
    context: &str,
    warnings: &mut Vec<String>,
) -> Result<Mention, CorpusError> {
    let sentence = sentences.get(raw.sentence_index).map(String::as_str);
    match (raw.char_start, raw.char_end) {
        (Some(start), Some(end)) => {
            let surface = match &raw.surface {
                Some(s) => s.clone(),
                None => sentence
                    .and_then(|s| char_slice(s, start, end))
                    .unwrap_or_default(),
            };
            Ok(Mention::new(lang, raw.sentence_index, start, end, surface))
        }
        _ => {
            let surface = raw.surface.as_deref().unwrap_or_default();
            let sentence = sentence.unwrap_or_default();
            let (span, count) = find_surface(sentence, surface);
            match span {
                Some((start, end)) => {
                    if count > 1 {
                        warnings.push(format!(
                            "{context}: surface {surface:?} occurs {count} times in {lang} sentence {}; using the earliest",
                            raw.sentence_index
                        ));
                    }
                    Ok(Mention::new(lang, raw.sentence_index, start, end, surface))
                }
                None => Err(CorpusError::Malformed {
                    line: 0,
                    message: format!(
                        "{context}: surface {surface:?} not found in {lang} sentence {}",
                        raw.sentence_index
                    ),
                }),
            }
        }
    }
}

/// Turns one raw record into a `Document`, resolving surface-only mentions
/// and surface-pair relation references.
fn resolve_record(
    record: RawRecord,
    ordinal: usize,
    warnings: &mut Vec<String>,
) -> Result<(Document, Option<SourceRef>), CorpusError> {
    let doc_id = record
        .doc_id
        .clone()
        .unwrap_or_else(|| format!("rec{ordinal:05}"));

    let mut entities = Vec::with_capacity(record.entities.len());
    for (ei, raw) in record.entities.iter().enumerate() {
        let entity_id = raw.entity_id.clone().unwrap_or_else(|| format!("e{ei}"));
        let entity_type = EntityType::from_str(&raw.entity_type)?;
        let context = format!("doc {doc_id} entity {entity_id}");
        let mentions_kor = raw
            .mentions_kor
            .iter()
            .map(|m| resolve_mention(m, &record.text_kor, Lang::Kor, &context, warnings))
            .collect::<Result<Vec<_>, _>>()?;
        let mentions_han = raw
            .mentions_han
            .iter()
            .map(|m| resolve_mention(m, &record.text_han, Lang::Han, &context, warnings))
            .collect::<Result<Vec<_>, _>>()?;
        entities.push(Entity {
            entity_id,
            entity_type,
            mentions_kor,
            mentions_han,
        });
    }

    let mut relations = Vec::with_capacity(record.relations.len());
    // Synthesized entities are cached by surface pair so repeated references
    // resolve to one cluster.
    let mut synthesized: HashMap<(String, String), String> = HashMap::new();
    for (ri, raw) in record.relations.iter().enumerate() {
        let label = RelationType::from_str(&raw.label)?;
        let subject_id = resolve_endpoint(
            raw.sbj_id.as_deref(),
            raw.sbj_kor.as_deref(),
            raw.sbj_han.as_deref(),
            &record,
            &doc_id,
            ri,
            &mut entities,
            &mut synthesized,
            warnings,
        )?;
        let object_id = resolve_endpoint(
            raw.obj_id.as_deref(),
            raw.obj_kor.as_deref(),
            raw.obj_han.as_deref(),
            &record,
            &doc_id,
            ri,
            &mut entities,
            &mut synthesized,
            warnings,
        )?;
        relations.push(RelationInstance {
            subject_id,
            object_id,
            label,
            evidence_kor: raw.evidence_kor.clone(),
            evidence_han: raw.evidence_han.clone(),
        });
    }

    Ok((
        Document {
            doc_id,
            sentences_kor: record.text_kor,
            sentences_han: record.text_han,
            entities,
            relations,
            metadata: record.metadata,
        },
        record.source,
    ))
}

#[allow(clippy::too_many_arguments)]
fn resolve_endpoint(
    id: Option<&str>,
    kor_surface: Option<&str>,
    han_surface: Option<&str>,
    record: &RawRecord,
    doc_id: &str,
    relation_index: usize,
    entities: &mut Vec<Entity>,
    synthesized: &mut HashMap<(String, String), String>,
    warnings: &mut Vec<String>,
) -> Result<String, CorpusError> {
    if let Some(id) = id {
        if entities.iter().any(|e| e.entity_id == id) {
            return Ok(id.to_string());
        }
        return Err(CorpusError::Malformed {
            line: 0,
            message: format!(
                "doc {doc_id} relation {relation_index}: entity id {id:?} not in entity list"
            ),
        });
    }
    let kor = kor_surface.ok_or_else(|| CorpusError::Malformed {
        line: 0,
        message: format!(
            "doc {doc_id} relation {relation_index}: neither an entity id nor a Korean surface"
        ),
    })?;

    // Prefer entities matching both surfaces, then Korean-only matches.
    let kor_matches: Vec<usize> = entities
        .iter()
        .enumerate()
        .filter(|(_, e)| e.mentions_kor.iter().any(|m| m.surface == kor))
        .map(|(i, _)| i)
        .collect();
    let preferred: Vec<usize> = match han_surface {
        Some(han) => kor_matches
            .iter()
            .copied()
            .filter(|&i| entities[i].mentions_han.iter().any(|m| m.surface == han))
            .collect(),
        None => vec![],
    };
    let candidates = if preferred.is_empty() {
        &kor_matches
    } else {
        &preferred
    };
    if let Some(&idx) = candidates.first() {
        if candidates.len() > 1 {
            warnings.push(format!(
                "doc {doc_id} relation {relation_index}: surface {kor:?} matches {} entities; using {:?}",
                candidates.len(),
                entities[idx].entity_id
            ));
        }
        return Ok(entities[idx].entity_id.clone());
    }

    // No entity list match: synthesize one from the surfaces, searching
    // evidence sentences first, then the whole document.
    let key = (kor.to_string(), han_surface.unwrap_or("").to_string());
    if let Some(id) = synthesized.get(&key) {
        return Ok(id.clone());
    }
    let evidence_kor = &record.relations[relation_index].evidence_kor;
    let evidence_han = &record.relations[relation_index].evidence_han;
    let kor_mention = locate_in(&record.text_kor, kor, evidence_kor, Lang::Kor);
    let kor_mention = kor_mention.ok_or_else(|| CorpusError::UnresolvedSurface {
        doc_id: doc_id.to_string(),
        index: relation_index,
        surface: kor.to_string(),
    })?;
    let han_mention =
        han_surface.and_then(|han| locate_in(&record.text_han, han, evidence_han, Lang::Han));
    if let Some(han) = han_surface {
        if han_mention.is_none() {
            warnings.push(format!(
                "doc {doc_id} relation {relation_index}: Hanja surface {han:?} not found; entity kept with Korean mentions only"
            ));
        }
    }

    let mut n = synthesized.len();
    let mut entity_id = format!("x{n}");
    while entities.iter().any(|e| e.entity_id == entity_id) {
        n += 1;
        entity_id = format!("x{n}");
    }
    entities.push(Entity {
        entity_id: entity_id.clone(),
        entity_type: EntityType::Other,
        mentions_kor: vec![kor_mention],
        mentions_han: han_mention.into_iter().collect(),
    });
    synthesized.insert(key, entity_id.clone());
    Ok(entity_id)
}

/// Searches the given sentences (evidence order first, then document order)
/// for the first occurrence of `surface`.
fn locate_in(
    sentences: &[String],
    surface: &str,
    evidence: &[usize],
    lang: Lang,
) -> Option<Mention> {
    let scan = evidence
        .iter()
        .copied()
        .chain((0..sentences.len()).filter(|i| !evidence.contains(i)));
    for si in scan {
        if let Some(sentence) = sentences.get(si) {
            if let (Some((start, end)), _) = find_surface(sentence, surface) {
                return Some(Mention::new(lang, si, start, end, surface));
            }
        }
    }
    None
}

fn mention_to_raw(m: &Mention) -> RawMention {
    RawMention {
        sentence_index: m.sentence_index,
        char_start: Some(m.char_start),
        char_end: Some(m.char_end),
        surface: Some(m.surface.clone()),
    }
}

/// Fully explicit record for a document: offsets, surfaces, entity ids, and
/// the surface-pair relation fields are all populated.
pub fn document_to_record(doc: &Document, source: Option<SourceRef>) -> RawRecord {
    let first_surface = |id: &str, lang: Lang| -> Option<String> {
        let e = doc.entity(id)?;
        let mentions = match lang {
            Lang::Kor => &e.mentions_kor,
            Lang::Han => &e.mentions_han,
        };
        mentions.first().map(|m| m.surface.clone())
    };
    RawRecord {
        doc_id: Some(doc.doc_id.clone()),
        text_kor: doc.sentences_kor.clone(),
        text_han: doc.sentences_han.clone(),
        entities: doc
            .entities
            .iter()
            .map(|e| RawEntity {
                entity_id: Some(e.entity_id.clone()),
                entity_type: e.entity_type.as_str().to_string(),
                mentions_kor: e.mentions_kor.iter().map(mention_to_raw).collect(),
                mentions_han: e.mentions_han.iter().map(mention_to_raw).collect(),
            })
            .collect(),
        relations: doc
            .relations
            .iter()
            .map(|r| RawRelation {
                sbj_id: Some(r.subject_id.clone()),
                obj_id: Some(r.object_id.clone()),
                sbj_kor: first_surface(&r.subject_id, Lang::Kor),
                sbj_han: first_surface(&r.subject_id, Lang::Han),
                obj_kor: first_surface(&r.object_id, Lang::Kor),
                obj_han: first_surface(&r.object_id, Lang::Han),
                label: r.label.as_str().to_string(),
                evidence_kor: r.evidence_kor.clone(),
                evidence_han: r.evidence_han.clone(),
            })
            .collect(),
        metadata: doc.metadata.clone(),
        source,
    }
}

pub fn write_corpus<W: Write>(
    mut w: W,
    docs: &[Document],
    meta: Option<&FileMeta>,
) -> Result<(), CorpusError> {
    if let Some(meta) = meta {
        let line = serde_json::json!({ "_meta": meta });
        writeln!(w, "{line}")?;
    }
    for doc in docs {
        let record = document_to_record(doc, None);
        writeln!(w, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(())
}

pub fn write_corpus_file(
    path: &Path,
    docs: &[Document],
    meta: Option<&FileMeta>,
) -> Result<(), CorpusError> {
    let file = std::fs::File::create(path)?;
    write_corpus(BufWriter::new(file), docs, meta)
}
