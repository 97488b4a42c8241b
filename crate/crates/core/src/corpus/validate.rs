//! Schema validation. Violations are data, not exceptions: the validator
//! never fails, it reports.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

use super::types::{char_slice, Document, Lang, Mention, RelationType};

/// One broken invariant. `field` locates the offending value, `rule` names
/// the invariant, `index` points at the entity/relation/mention involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub field: String,
    pub rule: ViolationRule,
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.field, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationRule {
    /// A language's sentence list is empty.
    EmptySentences,
    /// Mention sentence index out of bounds for its language.
    SentenceIndex,
    /// Mention character span invalid: requires 0 <= start < end <= len.
    SpanBounds,
    /// Mention surface does not equal the sentence substring at its span.
    SurfaceMismatch,
    /// Mention stored under one language but tagged with the other.
    LanguageMismatch,
    /// Entity has no Korean mentions.
    NoKoreanMentions,
    /// Two entities share an id.
    DuplicateEntityId,
    /// Relation subject and object must be distinct entities.
    DistinctPair,
    /// Relation references an entity id that does not exist.
    UnknownEntity,
    /// Korean evidence set is empty.
    EmptyEvidence,
    /// Evidence sentence index out of bounds.
    EvidenceBounds,
    /// Metadata year outside the corpus period [1500, 1900].
    YearRange,
    /// The reserved `no_relation` sentinel appears in a stored relation.
    ReservedLabel,
}

impl ViolationRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationRule::EmptySentences => "empty-sentences",
            ViolationRule::SentenceIndex => "sentence-index",
            ViolationRule::SpanBounds => "span-bounds",
            ViolationRule::SurfaceMismatch => "surface-mismatch",
            ViolationRule::LanguageMismatch => "language-mismatch",
            ViolationRule::NoKoreanMentions => "no-korean-mentions",
            ViolationRule::DuplicateEntityId => "duplicate-entity-id",
            ViolationRule::DistinctPair => "distinct-pair",
            ViolationRule::UnknownEntity => "unknown-entity",
            ViolationRule::EmptyEvidence => "empty-evidence",
            ViolationRule::EvidenceBounds => "evidence-bounds",
            ViolationRule::YearRange => "year-range",
            ViolationRule::ReservedLabel => "reserved-label",
        }
    }
}

impl fmt::Display for ViolationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Checks every type invariant of the document model and returns the list
/// of broken ones; an empty list means the document is well-formed.
///
/// Checks are guarded so that one defect produces one violation: a mention
/// with an out-of-bounds sentence index is not additionally reported for
/// span or surface problems, and an empty sentence list suppresses
/// per-index checks for that language.
pub fn validate_document(doc: &Document) -> Vec<Violation> {
    let mut out = Vec::new();

    let kor_ok = !doc.sentences_kor.is_empty();
    let han_ok = !doc.sentences_han.is_empty();
    if !kor_ok {
        out.push(Violation {
            field: "sentences_kor".into(),
            rule: ViolationRule::EmptySentences,
            index: None,
            message: "document has no Korean sentences".into(),
        });
    }
    if !han_ok {
        out.push(Violation {
            field: "sentences_han".into(),
            rule: ViolationRule::EmptySentences,
            index: None,
            message: "document has no Hanja sentences".into(),
        });
    }

    let mut seen_ids: HashSet<&str> = HashSet::new();
    for (ei, entity) in doc.entities.iter().enumerate() {
        if !seen_ids.insert(entity.entity_id.as_str()) {
            out.push(Violation {
                field: format!("entities[{ei}].entity_id"),
                rule: ViolationRule::DuplicateEntityId,
                index: Some(ei),
                message: format!("entity id {:?} already used", entity.entity_id),
            });
        }
        if entity.mentions_kor.is_empty() {
            out.push(Violation {
                field: format!("entities[{ei}].mentions_kor"),
                rule: ViolationRule::NoKoreanMentions,
                index: Some(ei),
                message: format!("entity {:?} has no Korean mentions", entity.entity_id),
            });
        }
        for (mi, m) in entity.mentions_kor.iter().enumerate() {
            check_mention(doc, m, Lang::Kor, kor_ok, ei, mi, &mut out);
        }
        for (mi, m) in entity.mentions_han.iter().enumerate() {
            check_mention(doc, m, Lang::Han, han_ok, ei, mi, &mut out);
        }
    }

    let ids: HashSet<&str> = doc.entities.iter().map(|e| e.entity_id.as_str()).collect();
    for (ri, rel) in doc.relations.iter().enumerate() {
        let field = |name: &str| format!("relations[{ri}].{name}");
        let sbj_known = ids.contains(rel.subject_id.as_str());
        let obj_known = ids.contains(rel.object_id.as_str());
        if !sbj_known {
            out.push(Violation {
                field: field("subject_id"),
                rule: ViolationRule::UnknownEntity,
                index: Some(ri),
                message: format!("no entity with id {:?}", rel.subject_id),
            });
        }
        if !obj_known {
            out.push(Violation {
                field: field("object_id"),
                rule: ViolationRule::UnknownEntity,
                index: Some(ri),
                message: format!("no entity with id {:?}", rel.object_id),
            });
        }
        if sbj_known && obj_known && rel.subject_id == rel.object_id {
            out.push(Violation {
                field: field("object_id"),
                rule: ViolationRule::DistinctPair,
                index: Some(ri),
                message: "subject and object must be distinct entities".into(),
            });
        }
        if rel.label == RelationType::NoRelation {
            out.push(Violation {
                field: field("label"),
                rule: ViolationRule::ReservedLabel,
                index: Some(ri),
                message: "no_relation is reserved for the classifier and must not be stored".into(),
            });
        }
        if rel.evidence_kor.is_empty() {
            out.push(Violation {
                field: field("evidence_kor"),
                rule: ViolationRule::EmptyEvidence,
                index: Some(ri),
                message: "Korean evidence set is empty".into(),
            });
        } else if kor_ok {
            for &s in &rel.evidence_kor {
                if s >= doc.sentences_kor.len() {
                    out.push(Violation {
                        field: field("evidence_kor"),
                        rule: ViolationRule::EvidenceBounds,
                        index: Some(ri),
                        message: format!(
                            "evidence index {s} out of bounds (document has {} Korean sentences)",
                            doc.sentences_kor.len()
                        ),
                    });
                }
            }
        }
        if han_ok {
            for &s in &rel.evidence_han {
                if s >= doc.sentences_han.len() {
                    out.push(Violation {
                        field: field("evidence_han"),
                        rule: ViolationRule::EvidenceBounds,
                        index: Some(ri),
                        message: format!(
                            "evidence index {s} out of bounds (document has {} Hanja sentences)",
                            doc.sentences_han.len()
                        ),
                    });
                }
            }
        }
    }

    if let Some(year) = doc.metadata.year {
        if !(1500..=1900).contains(&year) {
            out.push(Violation {
                field: "metadata.year".into(),
                rule: ViolationRule::YearRange,
                index: None,
                message: format!("year {year} outside the corpus period [1500, 1900]"),
            });
        }
    }

    out
}

fn check_mention(
    doc: &Document,
    m: &Mention,
    list_lang: Lang,
    sentences_present: bool,
    entity_index: usize,
    mention_index: usize,
    out: &mut Vec<Violation>,
) {
    let list_name = match list_lang {
        Lang::Kor => "mentions_kor",
        Lang::Han => "mentions_han",
    };
    let field = format!("entities[{entity_index}].{list_name}[{mention_index}]");
    if m.language != list_lang {
        out.push(Violation {
            field,
            rule: ViolationRule::LanguageMismatch,
            index: Some(entity_index),
            message: format!("mention tagged {} stored in {list_name}", m.language),
        });
        return;
    }
    if !sentences_present {
        return; // already reported as empty-sentences
    }
    let sentences = doc.sentences(list_lang);
    if m.sentence_index >= sentences.len() {
        out.push(Violation {
            field,
            rule: ViolationRule::SentenceIndex,
            index: Some(entity_index),
            message: format!(
                "sentence index {} out of bounds ({} sentences)",
                m.sentence_index,
                sentences.len()
            ),
        });
        return;
    }
    let sentence = &sentences[m.sentence_index];
    match char_slice(sentence, m.char_start, m.char_end) {
        None => out.push(Violation {
            field,
            rule: ViolationRule::SpanBounds,
            index: Some(entity_index),
            message: format!(
                "span [{}, {}) invalid for sentence of {} characters",
                m.char_start,
                m.char_end,
                sentence.chars().count()
            ),
        }),
        Some(text) if text != m.surface => out.push(Violation {
            field,
            rule: ViolationRule::SurfaceMismatch,
            index: Some(entity_index),
            message: format!("surface {:?} != text at span {:?}", m.surface, text),
        }),
        Some(_) => {}
    }
}

/// Entity ids that have Korean mentions but no Hanja mentions. These are
/// permitted; ingestion reports them as warnings and the model scores their
/// pairs with the Korean branch only.
pub fn hanja_gaps(doc: &Document) -> Vec<&str> {
    doc.entities
        .iter()
        .filter(|e| e.mentions_han.is_empty() && !e.mentions_kor.is_empty())
        .map(|e| e.entity_id.as_str())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::types::{Entity, EntityType, Metadata, RelationInstance};

    /// A small well-formed bilingual document used as the mutation base.
    pub(crate) fn valid_doc() -> Document {
        Document {
            doc_id: "fixture-0".into(),
            sentences_kor: vec![
                "갑돌이 남문 근처에 살았다".into(),
                "그는 푸른 도포를 입었다".into(),
                "남문 안에 시장이 있었다".into(),
            ],
            sentences_han: vec!["甲乭居南門".into(), "著靑袍".into()],
            entities: vec![
                Entity {
                    entity_id: "e0".into(),
                    entity_type: EntityType::Person,
                    mentions_kor: vec![Mention::new(Lang::Kor, 0, 0, 3, "갑돌이")],
                    mentions_han: vec![Mention::new(Lang::Han, 0, 0, 2, "甲乭")],
                },
                Entity {
                    entity_id: "e1".into(),
                    entity_type: EntityType::Location,
                    mentions_kor: vec![
                        Mention::new(Lang::Kor, 0, 4, 6, "남문"),
                        Mention::new(Lang::Kor, 2, 0, 2, "남문"),
                    ],
                    mentions_han: vec![Mention::new(Lang::Han, 0, 3, 5, "南門")],
                },
                Entity {
                    entity_id: "e2".into(),
                    entity_type: EntityType::Clothes,
                    mentions_kor: vec![Mention::new(Lang::Kor, 1, 3, 9, "푸른 도포")],
                    mentions_han: vec![Mention::new(Lang::Han, 1, 1, 3, "靑袍")],
                },
            ],
            relations: vec![
                RelationInstance {
                    subject_id: "e0".into(),
                    object_id: "e1".into(),
                    label: RelationType::PerPlaceOfResidence,
                    evidence_kor: vec![0],
                    evidence_han: vec![0],
                },
                RelationInstance {
                    subject_id: "e0".into(),
                    object_id: "e2".into(),
                    label: RelationType::PerWornBy,
                    evidence_kor: vec![1],
                    evidence_han: vec![1],
                },
            ],
            metadata: Metadata {
                year: Some(1712),
                book_title: Some("여행기".into()),
                ..Metadata::default()
            },
        }
    }

    #[test]
    fn well_formed_document_has_no_violations() {
        assert_eq!(validate_document(&valid_doc()), vec![]);
    }

    /// Each mutation breaks exactly one invariant and must yield exactly one
    /// violation naming that rule.
    #[test]
    fn single_mutations_yield_single_violations() {
        let mutations: Vec<(&str, Box<dyn Fn(&mut Document)>, ViolationRule)> = vec![
            (
                "clear kor sentences",
                Box::new(|d: &mut Document| {
                    // strip annotations so only the emptiness is at fault
                    d.sentences_kor.clear();
                    d.entities.clear();
                    d.relations.clear();
                }),
                ViolationRule::EmptySentences,
            ),
            (
                "clear han sentences",
                Box::new(|d: &mut Document| {
                    d.sentences_han.clear();
                    for e in &mut d.entities {
                        e.mentions_han.clear();
                    }
                    for r in &mut d.relations {
                        r.evidence_han.clear();
                    }
                }),
                ViolationRule::EmptySentences,
            ),
            (
                "mention sentence index out of bounds",
                Box::new(|d| d.entities[0].mentions_kor[0].sentence_index = 9),
                ViolationRule::SentenceIndex,
            ),
            (
                "mention char_end beyond sentence",
                Box::new(|d| d.entities[0].mentions_kor[0].char_end = 99),
                ViolationRule::SpanBounds,
            ),
            (
                "mention empty span",
                Box::new(|d| {
                    d.entities[0].mentions_kor[0].char_end =
                        d.entities[0].mentions_kor[0].char_start
                }),
                ViolationRule::SpanBounds,
            ),
            (
                "mention surface text drift",
                Box::new(|d| d.entities[0].mentions_kor[0].surface = "을순이".into()),
                ViolationRule::SurfaceMismatch,
            ),
            (
                "mention language flag flipped",
                Box::new(|d| d.entities[0].mentions_kor[0].language = Lang::Han),
                ViolationRule::LanguageMismatch,
            ),
            (
                "entity loses korean mentions",
                Box::new(|d| d.entities[2].mentions_kor.clear()),
                ViolationRule::NoKoreanMentions,
            ),
            (
                "duplicate entity id",
                Box::new(|d| {
                    d.entities[2] = d.entities[0].clone();
                    d.relations.truncate(1);
                }),
                ViolationRule::DuplicateEntityId,
            ),
            (
                "self relation",
                Box::new(|d| d.relations[0].object_id = "e0".into()),
                ViolationRule::DistinctPair,
            ),
            (
                "relation to unknown entity",
                Box::new(|d| d.relations[0].object_id = "ghost".into()),
                ViolationRule::UnknownEntity,
            ),
            (
                "empty korean evidence",
                Box::new(|d| d.relations[0].evidence_kor.clear()),
                ViolationRule::EmptyEvidence,
            ),
            (
                "evidence index out of bounds",
                Box::new(|d| d.relations[0].evidence_kor = vec![7]),
                ViolationRule::EvidenceBounds,
            ),
            (
                "hanja evidence out of bounds",
                Box::new(|d| d.relations[1].evidence_han = vec![5]),
                ViolationRule::EvidenceBounds,
            ),
            (
                "metadata year outside period",
                Box::new(|d| d.metadata.year = Some(1492)),
                ViolationRule::YearRange,
            ),
            (
                "stored no_relation label",
                Box::new(|d| d.relations[0].label = RelationType::NoRelation),
                ViolationRule::ReservedLabel,
            ),
        ];

        for (name, mutate, expected) in mutations {
            let mut doc = valid_doc();
            mutate(&mut doc);
            let violations = validate_document(&doc);
            assert_eq!(
                violations.len(),
                1,
                "{name}: expected exactly one violation, got {violations:?}"
            );
            assert_eq!(violations[0].rule, expected, "{name}: wrong rule");
        }
    }

    #[test]
    fn hanja_gap_entities_are_flagged_not_rejected() {
        let mut doc = valid_doc();
        doc.entities[2].mentions_han.clear();
        assert_eq!(validate_document(&doc), vec![]);
        assert_eq!(hanja_gaps(&doc), vec!["e2"]);
    }

    #[test]
    fn year_bounds_are_inclusive() {
        for (year, ok) in [(1500, true), (1900, true), (1499, false), (1901, false)] {
            let mut doc = valid_doc();
            doc.metadata.year = Some(year);
            assert_eq!(validate_document(&doc).is_empty(), ok, "year {year}");
        }
        let mut doc = valid_doc();
        doc.metadata.year = None;
        assert!(validate_document(&doc).is_empty());
    }
}
