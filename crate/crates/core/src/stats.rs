//! Corpus statistics and the entity-centric fact query.
//!
//! Token counts depend on a tokenizer. The whitespace adapter is always
//! available and dependency-free; a vocabulary-file WordPiece adapter can be
//! plugged in to reproduce counts from a pretrained multilingual subword
//! inventory.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use thiserror::Error;

use crate::corpus::{Document, EntityType, Metadata, RelationInstance, RelationType};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty corpus: statistics need at least one document")]
    EmptyCorpus,
    #[error("tokenizer {name} produced invalid offsets in {context}: {message}")]
    BadTokenizer {
        name: String,
        context: String,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One token with its half-open character span in the source sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSpan {
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
}

pub trait Tokenizer {
    fn name(&self) -> &str;
    fn tokenize(&self, sentence: &str) -> Vec<TokenSpan>;
}

/// Splits on Unicode whitespace. The default adapter for tests and for
/// corpora without an external subword inventory.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceTokenizer;

impl Tokenizer for WhitespaceTokenizer {
    fn name(&self) -> &str {
        "whitespace"
    }

    fn tokenize(&self, sentence: &str) -> Vec<TokenSpan> {
        let mut out = Vec::new();
        let mut start = None;
        let mut buf = String::new();
        for (i, c) in sentence.chars().enumerate() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(TokenSpan {
                        text: std::mem::take(&mut buf),
                        char_start: s,
                        char_end: i,
                    });
                }
            } else {
                if start.is_none() {
                    start = Some(i);
                }
                buf.push(c);
            }
        }
        if let Some(s) = start {
            let end = s + buf.chars().count();
            out.push(TokenSpan {
                text: buf,
                char_start: s,
                char_end: end,
            });
        }
        out
    }
}

fn is_cjk_ideograph(c: char) -> bool {
    matches!(u32::from(c),
        0x4E00..=0x9FFF
        | 0x3400..=0x4DBF
        | 0x20000..=0x2A6DF
        | 0x2A700..=0x2B73F
        | 0xF900..=0xFAFF)
}

fn is_breaking_punct(c: char) -> bool {
    c.is_ascii_punctuation() || matches!(c, '。' | '、' | '，' | '．' | '·' | '「' | '」' | '『' | '』')
}

/// Greedy longest-match WordPiece over a plain-text vocabulary (one token
/// per line, continuations prefixed with `##`). Pre-tokenization splits on
/// whitespace, isolates CJK ideographs, and breaks at punctuation, matching
/// the behavior of common multilingual BERT-family tokenizers closely
/// enough to reproduce their token counts.
#[derive(Debug, Clone)]
pub struct WordpieceTokenizer {
    name: String,
    vocab: BTreeSet<String>,
    lowercase: bool,
    max_word_chars: usize,
}

impl WordpieceTokenizer {
    pub fn new(name: impl Into<String>, vocab: impl IntoIterator<Item = String>) -> Self {
        WordpieceTokenizer {
            name: name.into(),
            vocab: vocab.into_iter().collect(),
            lowercase: false,
            max_word_chars: 100,
        }
    }

    pub fn from_vocab_file(path: &Path) -> Result<Self, StatsError> {
        let text = std::fs::read_to_string(path)?;
        let vocab = text.lines().map(|l| l.trim_end().to_string());
        let name = path
            .file_stem()
            .map(|s| format!("wordpiece:{}", s.to_string_lossy()))
            .unwrap_or_else(|| "wordpiece".into());
        Ok(Self::new(name, vocab))
    }

    pub fn lowercase(mut self, yes: bool) -> Self {
        self.lowercase = yes;
        self
    }

    /// Words: maximal runs that are neither whitespace, punctuation, nor a
    /// CJK ideograph; ideographs and punctuation become one-char words.
    fn pre_tokenize(&self, sentence: &str) -> Vec<(usize, Vec<char>)> {
        let mut words = Vec::new();
        let mut current: Option<(usize, Vec<char>)> = None;
        for (i, c) in sentence.chars().enumerate() {
            if c.is_whitespace() {
                if let Some(w) = current.take() {
                    words.push(w);
                }
            } else if is_cjk_ideograph(c) || is_breaking_punct(c) {
                if let Some(w) = current.take() {
                    words.push(w);
                }
                words.push((i, vec![c]));
            } else {
                match &mut current {
                    Some((_, chars)) => chars.push(c),
                    None => current = Some((i, vec![c])),
                }
            }
        }
        if let Some(w) = current {
            words.push(w);
        }
        words
    }

    fn piece_key(&self, chars: &[char], continuation: bool) -> String {
        let mut key = String::with_capacity(chars.len() + 2);
        if continuation {
            key.push_str("##");
        }
        for &c in chars {
            if self.lowercase {
                // per-scalar lowercase keeps the char-offset mapping exact
                key.push(c.to_lowercase().next().unwrap_or(c));
            } else {
                key.push(c);
            }
        }
        key
    }
}

impl Tokenizer for WordpieceTokenizer {
    fn name(&self) -> &str {
        &self.name
    }

    fn tokenize(&self, sentence: &str) -> Vec<TokenSpan> {
        let mut out = Vec::new();
        for (word_start, chars) in self.pre_tokenize(sentence) {
            if chars.len() > self.max_word_chars {
                out.push(TokenSpan {
                    text: "[UNK]".into(),
                    char_start: word_start,
                    char_end: word_start + chars.len(),
                });
                continue;
            }
            let mut pos = 0;
            let mut pieces: Vec<TokenSpan> = Vec::new();
            let mut failed = false;
            while pos < chars.len() {
                let mut end = chars.len();
                let mut matched = None;
                while end > pos {
                    let key = self.piece_key(&chars[pos..end], pos > 0);
                    if self.vocab.contains(&key) {
                        matched = Some((key, end));
                        break;
                    }
                    end -= 1;
                }
                match matched {
                    Some((key, end)) => {
                        pieces.push(TokenSpan {
                            text: key,
                            char_start: word_start + pos,
                            char_end: word_start + end,
                        });
                        pos = end;
                    }
                    None => {
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                out.push(TokenSpan {
                    text: "[UNK]".into(),
                    char_start: word_start,
                    char_end: word_start + chars.len(),
                });
            } else {
                out.extend(pieces);
            }
        }
        out
    }
}

/// Mean, population variance, and median of a count distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub mean: f64,
    pub variance: f64,
    pub median: f64,
    pub min: usize,
    pub max: usize,
}

impl TokenStats {
    fn from_counts(counts: &mut Vec<usize>) -> TokenStats {
        assert!(!counts.is_empty());
        counts.sort_unstable();
        let n = counts.len() as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let variance = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        let median = if counts.len() % 2 == 1 {
            counts[counts.len() / 2] as f64
        } else {
            (counts[counts.len() / 2 - 1] as f64 + counts[counts.len() / 2] as f64) / 2.0
        };
        TokenStats {
            mean,
            variance,
            median,
            min: counts[0],
            max: *counts.last().unwrap(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub count: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub tokenizer: String,
    pub num_docs: usize,
    pub num_sentences_kor: usize,
    pub num_sentences_han: usize,
    pub tokens_per_doc_kor: TokenStats,
    pub tokens_per_doc_han: TokenStats,
    pub entity_histogram: BTreeMap<EntityType, HistogramEntry>,
    pub relation_histogram: BTreeMap<RelationType, HistogramEntry>,
    pub notes: Vec<String>,
}

/// Partial statistics over a subset of documents. Merging accumulators and
/// then finalizing equals accumulating the concatenation, which makes the
/// computation map-reduce friendly.
#[derive(Debug, Clone, Default)]
pub struct StatsAccumulator {
    num_docs: usize,
    num_sentences_kor: usize,
    num_sentences_han: usize,
    tokens_kor: Vec<usize>,
    tokens_han: Vec<usize>,
    entity_counts: BTreeMap<EntityType, usize>,
    relation_counts: BTreeMap<RelationType, usize>,
}

impl StatsAccumulator {
    pub fn add_document(&mut self, doc: &Document, tok: &dyn Tokenizer) -> Result<(), StatsError> {
        let count = |sentences: &[String], lang: &str| -> Result<usize, StatsError> {
            let mut total = 0;
            for (si, sentence) in sentences.iter().enumerate() {
                let tokens = tok.tokenize(sentence);
                check_offsets(tok.name(), &format!("{} {lang} sentence {si}", doc.doc_id), sentence, &tokens)?;
                total += tokens.len();
            }
            Ok(total)
        };
        self.tokens_kor.push(count(&doc.sentences_kor, "kor")?);
        self.tokens_han.push(count(&doc.sentences_han, "han")?);
        self.num_docs += 1;
        self.num_sentences_kor += doc.sentences_kor.len();
        self.num_sentences_han += doc.sentences_han.len();
        for e in &doc.entities {
            *self.entity_counts.entry(e.entity_type).or_default() += 1;
        }
        for r in &doc.relations {
            *self.relation_counts.entry(r.label).or_default() += 1;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: StatsAccumulator) {
        self.num_docs += other.num_docs;
        self.num_sentences_kor += other.num_sentences_kor;
        self.num_sentences_han += other.num_sentences_han;
        self.tokens_kor.extend(other.tokens_kor);
        self.tokens_han.extend(other.tokens_han);
        for (k, v) in other.entity_counts {
            *self.entity_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.relation_counts {
            *self.relation_counts.entry(k).or_default() += v;
        }
    }

    pub fn finalize(mut self, tokenizer_name: &str) -> Result<StatsReport, StatsError> {
        if self.num_docs == 0 {
            return Err(StatsError::EmptyCorpus);
        }
        let entity_total: usize = self.entity_counts.values().sum();
        let relation_total: usize = self.relation_counts.values().sum();
        let entity_histogram = EntityType::ALL
            .iter()
            .map(|&t| {
                let count = self.entity_counts.get(&t).copied().unwrap_or(0);
                (t, ratio_entry(count, entity_total))
            })
            .collect();
        let relation_histogram = RelationType::GOLD
            .iter()
            .map(|&t| {
                let count = self.relation_counts.get(&t).copied().unwrap_or(0);
                (t, ratio_entry(count, relation_total))
            })
            .collect();
        Ok(StatsReport {
            tokenizer: tokenizer_name.to_string(),
            num_docs: self.num_docs,
            num_sentences_kor: self.num_sentences_kor,
            num_sentences_han: self.num_sentences_han,
            tokens_per_doc_kor: TokenStats::from_counts(&mut self.tokens_kor),
            tokens_per_doc_han: TokenStats::from_counts(&mut self.tokens_han),
            entity_histogram,
            relation_histogram,
            notes: vec![
                "entity and relation counts are per occurrence (one per entity/relation object per document)".into(),
            ],
        })
    }
}

fn ratio_entry(count: usize, total: usize) -> HistogramEntry {
    HistogramEntry {
        count,
        ratio: if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        },
    }
}

fn check_offsets(
    name: &str,
    context: &str,
    sentence: &str,
    tokens: &[TokenSpan],
) -> Result<(), StatsError> {
    let len = sentence.chars().count();
    let mut prev_start = 0usize;
    for t in tokens {
        if t.char_start > t.char_end || t.char_end > len || t.char_start < prev_start {
            return Err(StatsError::BadTokenizer {
                name: name.to_string(),
                context: context.to_string(),
                message: format!(
                    "span [{}, {}) (sentence has {len} chars, previous start {prev_start})",
                    t.char_start, t.char_end
                ),
            });
        }
        prev_start = t.char_start;
    }
    Ok(())
}

/// Computes the full report over a corpus. Deterministic; errors on an
/// empty corpus or a tokenizer that violates its offset contract.
pub fn compute_stats(docs: &[Document], tok: &dyn Tokenizer) -> Result<StatsReport, StatsError> {
    if docs.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let mut acc = StatsAccumulator::default();
    for doc in docs {
        acc.add_document(doc, tok)?;
    }
    acc.finalize(tok.name())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryFilters {
    pub from_year: Option<i32>,
    pub to_year: Option<i32>,
    pub relations: Option<BTreeSet<RelationType>>,
}

impl QueryFilters {
    fn admits_year(&self, year: Option<i32>) -> bool {
        match (self.from_year, self.to_year) {
            (None, None) => true,
            // chronological filters require a known year
            _ => match year {
                None => false,
                Some(y) => {
                    self.from_year.map_or(true, |f| y >= f)
                        && self.to_year.map_or(true, |t| y <= t)
                }
            },
        }
    }

    fn admits_relation(&self, label: RelationType) -> bool {
        self.relations.as_ref().map_or(true, |set| set.contains(&label))
    }
}

/// One relation instance matched by an entity query, with enough context to
/// print a fact line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactMatch {
    pub doc_id: String,
    pub year: Option<i32>,
    pub subject_surface: String,
    pub object_surface: String,
    pub relation: RelationInstance,
    pub metadata: Metadata,
}

/// Finds all relations whose subject or object entity matches
/// `surface_or_id` (by entity id or by any mention surface in either
/// language), subject to the filters, sorted chronologically.
pub fn query_entity_facts(
    docs: &[Document],
    surface_or_id: &str,
    filters: &QueryFilters,
) -> Vec<FactMatch> {
    let mut out = Vec::new();
    for doc in docs {
        if !filters.admits_year(doc.metadata.year) {
            continue;
        }
        let matching: BTreeSet<&str> = doc
            .entities
            .iter()
            .filter(|e| {
                e.entity_id == surface_or_id
                    || e.mentions_kor.iter().any(|m| m.surface == surface_or_id)
                    || e.mentions_han.iter().any(|m| m.surface == surface_or_id)
            })
            .map(|e| e.entity_id.as_str())
            .collect();
        if matching.is_empty() {
            continue;
        }
        for rel in &doc.relations {
            if !filters.admits_relation(rel.label) {
                continue;
            }
            if matching.contains(rel.subject_id.as_str())
                || matching.contains(rel.object_id.as_str())
            {
                let surface = |id: &str| {
                    doc.entity(id)
                        .and_then(|e| e.mentions_kor.first())
                        .map(|m| m.surface.clone())
                        .unwrap_or_default()
                };
                out.push(FactMatch {
                    doc_id: doc.doc_id.clone(),
                    year: doc.metadata.year,
                    subject_surface: surface(&rel.subject_id),
                    object_surface: surface(&rel.object_id),
                    relation: rel.clone(),
                    metadata: doc.metadata.clone(),
                });
            }
        }
    }
    // unknown years sort last; stable within a year
    out.sort_by_key(|m| m.year.map_or(i64::MAX, i64::from));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Entity, Lang, Mention};
    use proptest::prelude::*;

    fn tiny_doc(id: &str, kor: &str, han: &str) -> Document {
        Document {
            doc_id: id.into(),
            sentences_kor: vec![kor.into()],
            sentences_han: vec![han.into()],
            entities: vec![],
            relations: vec![],
            metadata: Metadata::default(),
        }
    }

    #[test]
    fn whitespace_tokenizer_tracks_char_offsets() {
        let toks = WhitespaceTokenizer.tokenize("남문  시장 안");
        assert_eq!(
            toks,
            vec![
                TokenSpan { text: "남문".into(), char_start: 0, char_end: 2 },
                TokenSpan { text: "시장".into(), char_start: 4, char_end: 6 },
                TokenSpan { text: "안".into(), char_start: 7, char_end: 8 },
            ]
        );
        assert!(WhitespaceTokenizer.tokenize("   ").is_empty());
    }

    #[test]
    fn single_three_token_document() {
        let docs = vec![tiny_doc("d", "갑 과 을", "甲乙")];
        let report = compute_stats(&docs, &WhitespaceTokenizer).unwrap();
        assert_eq!(report.tokens_per_doc_kor.mean, 3.0);
        assert_eq!(report.tokens_per_doc_kor.variance, 0.0);
        assert_eq!(report.tokens_per_doc_kor.median, 3.0);
        assert_eq!(report.num_docs, 1);
        assert_eq!(report.num_sentences_kor, 1);
    }

    #[test]
    fn histogram_ratios_sum_to_one() {
        let mut doc = tiny_doc("d", "갑 을 병", "甲乙丙");
        for (i, t) in [EntityType::Person, EntityType::Person, EntityType::Location]
            .iter()
            .enumerate()
        {
            doc.entities.push(Entity {
                entity_id: format!("e{i}"),
                entity_type: *t,
                mentions_kor: vec![Mention::new(Lang::Kor, 0, 0, 1, "갑")],
                mentions_han: vec![],
            });
        }
        let report = compute_stats(&[doc], &WhitespaceTokenizer).unwrap();
        let sum: f64 = report.entity_histogram.values().map(|e| e.ratio).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(report.entity_histogram[&EntityType::Person].count, 2);
        assert!(
            (report.entity_histogram[&EntityType::Person].ratio - 2.0 / 3.0).abs() < 1e-12
        );
    }

    #[test]
    fn bad_tokenizer_offsets_are_rejected() {
        struct Broken;
        impl Tokenizer for Broken {
            fn name(&self) -> &str {
                "broken"
            }
            fn tokenize(&self, _s: &str) -> Vec<TokenSpan> {
                vec![TokenSpan { text: "x".into(), char_start: 5, char_end: 99 }]
            }
        }
        let docs = vec![tiny_doc("d", "갑 을", "甲")];
        match compute_stats(&docs, &Broken) {
            Err(StatsError::BadTokenizer { name, .. }) => assert_eq!(name, "broken"),
            other => panic!("expected BadTokenizer, got {other:?}"),
        }
    }

    #[test]
    fn wordpiece_greedy_longest_match_with_continuations() {
        let vocab = ["한양", "##도성", "##성", "도", "[UNK]"]
            .into_iter()
            .map(String::from);
        let tok = WordpieceTokenizer::new("test", vocab);
        let toks = tok.tokenize("한양도성");
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["한양", "##도성"]);
        assert_eq!(toks[0].char_start, 0);
        assert_eq!(toks[0].char_end, 2);
        assert_eq!(toks[1].char_start, 2);
        assert_eq!(toks[1].char_end, 4);
    }

    #[test]
    fn wordpiece_isolates_cjk_ideographs_and_punctuation() {
        let vocab = ["南", "門", "也", "미상"].into_iter().map(String::from);
        let tok = WordpieceTokenizer::new("test", vocab);
        let texts: Vec<String> = tok
            .tokenize("南門也. 미상")
            .into_iter()
            .map(|t| t.text)
            .collect();
        // each ideograph is its own word; '.' has no vocab entry -> [UNK]
        assert_eq!(texts, vec!["南", "門", "也", "[UNK]", "미상"]);
    }

    #[test]
    fn wordpiece_unmatched_word_is_single_unk() {
        let tok = WordpieceTokenizer::new("test", ["가"].into_iter().map(String::from));
        let toks = tok.tokenize("나나나");
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].text, "[UNK]");
        assert_eq!((toks[0].char_start, toks[0].char_end), (0, 3));
    }

    #[test]
    fn accumulator_merge_equals_single_pass() {
        let docs: Vec<Document> = (0..10)
            .map(|i| tiny_doc(&format!("d{i}"), &"가 ".repeat(i + 1), "甲"))
            .collect();
        let whole = compute_stats(&docs, &WhitespaceTokenizer).unwrap();

        let mut left = StatsAccumulator::default();
        let mut right = StatsAccumulator::default();
        for d in &docs[..4] {
            left.add_document(d, &WhitespaceTokenizer).unwrap();
        }
        for d in &docs[4..] {
            right.add_document(d, &WhitespaceTokenizer).unwrap();
        }
        left.merge(right);
        let merged = left.finalize("whitespace").unwrap();
        assert_eq!(merged, whole);
    }

    fn fact_fixture() -> Vec<Document> {
        let entity = |id: &str, surface: &str| Entity {
            entity_id: id.into(),
            entity_type: EntityType::Person,
            mentions_kor: vec![Mention::new(Lang::Kor, 0, 0, surface.chars().count(), surface)],
            mentions_han: vec![],
        };
        let rel = |s: &str, o: &str, label: RelationType| RelationInstance {
            subject_id: s.into(),
            object_id: o.into(),
            label,
            evidence_kor: vec![0],
            evidence_han: vec![],
        };
        vec![
            Document {
                doc_id: "a".into(),
                sentences_kor: vec!["황제 일행".into()],
                sentences_han: vec!["皇帝".into()],
                entities: vec![entity("e0", "황제"), entity("e1", "일행")],
                relations: vec![rel("e0", "e1", RelationType::PerFriend)],
                metadata: Metadata { year: Some(1713), ..Metadata::default() },
            },
            Document {
                doc_id: "b".into(),
                sentences_kor: vec!["황제 수레".into()],
                sentences_han: vec!["皇帝".into()],
                entities: vec![entity("e0", "황제"), entity("e1", "수레")],
                relations: vec![rel("e0", "e1", RelationType::ProductProvidedBy)],
                metadata: Metadata { year: Some(1712), ..Metadata::default() },
            },
        ]
    }

    #[test]
    fn query_returns_matches_sorted_by_year() {
        let docs = fact_fixture();
        let facts = query_entity_facts(&docs, "황제", &QueryFilters::default());
        assert_eq!(facts.len(), 2);
        assert_eq!(facts[0].year, Some(1712));
        assert_eq!(facts[1].year, Some(1713));
    }

    #[test]
    fn query_year_filter_can_exclude_everything() {
        let docs = fact_fixture();
        let filters = QueryFilters {
            from_year: Some(1800),
            to_year: Some(1850),
            ..QueryFilters::default()
        };
        assert!(query_entity_facts(&docs, "황제", &filters).is_empty());
    }

    #[test]
    fn query_relation_filter_narrows_results() {
        let docs = fact_fixture();
        let filters = QueryFilters {
            relations: Some([RelationType::PerFriend].into_iter().collect()),
            ..QueryFilters::default()
        };
        let facts = query_entity_facts(&docs, "황제", &filters);
        assert_eq!(facts.len(), 1);
        assert_eq!(facts[0].relation.label, RelationType::PerFriend);
    }

    proptest! {
        /// Counts are decomposable over any split point of the corpus.
        #[test]
        fn stats_counts_decompose(split in 1usize..9, seed in 0u64..500) {
            let docs: Vec<Document> = (0..10)
                .map(|i| {
                    let w = ((seed as usize + i * 7) % 5) + 1;
                    tiny_doc(&format!("d{i}"), &"가 ".repeat(w), "甲 乙")
                })
                .collect();
            let whole = compute_stats(&docs, &WhitespaceTokenizer).unwrap();
            let a = compute_stats(&docs[..split], &WhitespaceTokenizer).unwrap();
            let b = compute_stats(&docs[split..], &WhitespaceTokenizer).unwrap();
            prop_assert_eq!(whole.num_docs, a.num_docs + b.num_docs);
            prop_assert_eq!(
                whole.num_sentences_kor,
                a.num_sentences_kor + b.num_sentences_kor
            );
            for t in EntityType::ALL {
                prop_assert_eq!(
                    whole.entity_histogram[&t].count,
                    a.entity_histogram[&t].count + b.entity_histogram[&t].count
                );
            }
        }

        /// The query agrees with a brute-force scan over every relation.
        #[test]
        fn query_matches_linear_scan_oracle(
            query_pick in 0usize..3,
            from in proptest::option::of(1700i32..1720),
            to in proptest::option::of(1700i32..1720),
        ) {
            let docs = fact_fixture();
            let queries = ["황제", "수레", "없는말"];
            let query = queries[query_pick];
            let filters = QueryFilters { from_year: from, to_year: to, relations: None };
            let got = query_entity_facts(&docs, query, &filters);

            let mut expected = 0usize;
            for doc in &docs {
                let year_ok = match (from, to) {
                    (None, None) => true,
                    _ => doc.metadata.year.map_or(false, |y| {
                        from.map_or(true, |f| y >= f) && to.map_or(true, |t| y <= t)
                    }),
                };
                if !year_ok {
                    continue;
                }
                for rel in &doc.relations {
                    let touches = [&rel.subject_id, &rel.object_id].iter().any(|id| {
                        doc.entity(id).map_or(false, |e| {
                            e.entity_id == query
                                || e.mentions_kor.iter().any(|m| m.surface == query)
                                || e.mentions_han.iter().any(|m| m.surface == query)
                        })
                    });
                    if touches {
                        expected += 1;
                    }
                }
            }
            prop_assert_eq!(got.len(), expected);
        }
    }
}
