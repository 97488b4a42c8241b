//! Domain types: taxonomies, mentions, entities, relations, documents.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::CorpusError;

/// Entity taxonomy. Exactly ten types; parsing any other string is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityType {
    Person,
    Location,
    Organization,
    Number,
    Datetime,
    Product,
    Food,
    Clothes,
    Book,
    Other,
}

impl EntityType {
    pub const ALL: [EntityType; 10] = [
        EntityType::Person,
        EntityType::Location,
        EntityType::Organization,
        EntityType::Number,
        EntityType::Datetime,
        EntityType::Product,
        EntityType::Food,
        EntityType::Clothes,
        EntityType::Book,
        EntityType::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EntityType::Person => "Person",
            EntityType::Location => "Location",
            EntityType::Organization => "Organization",
            EntityType::Number => "Number",
            EntityType::Datetime => "Datetime",
            EntityType::Product => "Product",
            EntityType::Food => "Food",
            EntityType::Clothes => "Clothes",
            EntityType::Book => "Book",
            EntityType::Other => "Other",
        }
    }
}

impl FromStr for EntityType {
    type Err = CorpusError;

    /// Case-insensitive; `DateTime` and `Datetime` both parse.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        EntityType::ALL
            .iter()
            .find(|t| t.as_str().to_ascii_lowercase() == lower)
            .copied()
            .ok_or_else(|| CorpusError::UnknownEntityType(s.to_string()))
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relation taxonomy: twenty gold labels plus the reserved `no_relation`
/// sentinel used only by the model's candidate-pair classifier. The sentinel
/// never appears in stored corpus files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationType {
    #[serde(rename = "nearby")]
    Nearby,
    #[serde(rename = "alternate_name")]
    AlternateName,
    #[serde(rename = "per:position_held")]
    PerPositionHeld,
    #[serde(rename = "per:worn_by")]
    PerWornBy,
    #[serde(rename = "per:friend")]
    PerFriend,
    #[serde(rename = "per:enemy")]
    PerEnemy,
    #[serde(rename = "per:child")]
    PerChild,
    #[serde(rename = "per:sibling")]
    PerSibling,
    #[serde(rename = "per:other_family")]
    PerOtherFamily,
    #[serde(rename = "per:country_of_citizenship")]
    PerCountryOfCitizenship,
    #[serde(rename = "per:place_of_residence")]
    PerPlaceOfResidence,
    #[serde(rename = "per:place_of_birth")]
    PerPlaceOfBirth,
    #[serde(rename = "per:place_of_death")]
    PerPlaceOfDeath,
    #[serde(rename = "per:date_of_birth")]
    PerDateOfBirth,
    #[serde(rename = "per:date_of_death")]
    PerDateOfDeath,
    #[serde(rename = "loc:functions_as")]
    LocFunctionsAs,
    #[serde(rename = "loc:famous_for")]
    LocFamousFor,
    #[serde(rename = "product:provided_by")]
    ProductProvidedBy,
    #[serde(rename = "org:member_of")]
    OrgMemberOf,
    #[serde(rename = "others")]
    Others,
    #[serde(rename = "no_relation")]
    NoRelation,
}

impl RelationType {
    /// The twenty storable labels, in taxonomy order. `NoRelation` is
    /// deliberately excluded.
    pub const GOLD: [RelationType; 20] = [
        RelationType::Nearby,
        RelationType::AlternateName,
        RelationType::PerPositionHeld,
        RelationType::PerWornBy,
        RelationType::PerFriend,
        RelationType::PerEnemy,
        RelationType::PerChild,
        RelationType::PerSibling,
        RelationType::PerOtherFamily,
        RelationType::PerCountryOfCitizenship,
        RelationType::PerPlaceOfResidence,
        RelationType::PerPlaceOfBirth,
        RelationType::PerPlaceOfDeath,
        RelationType::PerDateOfBirth,
        RelationType::PerDateOfDeath,
        RelationType::LocFunctionsAs,
        RelationType::LocFamousFor,
        RelationType::ProductProvidedBy,
        RelationType::OrgMemberOf,
        RelationType::Others,
    ];

    /// Total number of classes seen by the model: 20 gold labels plus
    /// `no_relation`.
    pub const NUM_CLASSES: usize = 21;

    pub fn as_str(&self) -> &'static str {
        match self {
            RelationType::Nearby => "nearby",
            RelationType::AlternateName => "alternate_name",
            RelationType::PerPositionHeld => "per:position_held",
            RelationType::PerWornBy => "per:worn_by",
            RelationType::PerFriend => "per:friend",
            RelationType::PerEnemy => "per:enemy",
            RelationType::PerChild => "per:child",
            RelationType::PerSibling => "per:sibling",
            RelationType::PerOtherFamily => "per:other_family",
            RelationType::PerCountryOfCitizenship => "per:country_of_citizenship",
            RelationType::PerPlaceOfResidence => "per:place_of_residence",
            RelationType::PerPlaceOfBirth => "per:place_of_birth",
            RelationType::PerPlaceOfDeath => "per:place_of_death",
            RelationType::PerDateOfBirth => "per:date_of_birth",
            RelationType::PerDateOfDeath => "per:date_of_death",
            RelationType::LocFunctionsAs => "loc:functions_as",
            RelationType::LocFamousFor => "loc:famous_for",
            RelationType::ProductProvidedBy => "product:provided_by",
            RelationType::OrgMemberOf => "org:member_of",
            RelationType::Others => "others",
            RelationType::NoRelation => "no_relation",
        }
    }

    /// Stable class index used by the model's logit layout. Gold labels
    /// occupy 0..20 in taxonomy order; `no_relation` is class 20.
    pub fn class_index(&self) -> usize {
        match self {
            RelationType::NoRelation => Self::GOLD.len(),
            other => Self::GOLD.iter().position(|r| r == other).unwrap(),
        }
    }

    pub fn from_class_index(idx: usize) -> Option<RelationType> {
        if idx < Self::GOLD.len() {
            Some(Self::GOLD[idx])
        } else if idx == Self::GOLD.len() {
            Some(RelationType::NoRelation)
        } else {
            None
        }
    }
}

impl FromStr for RelationType {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationType::GOLD
            .iter()
            .chain(std::iter::once(&RelationType::NoRelation))
            .find(|r| r.as_str() == s)
            .copied()
            .ok_or_else(|| CorpusError::UnknownRelationLabel(s.to_string()))
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which side of the parallel corpus a mention lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lang {
    #[serde(rename = "kor")]
    Kor,
    #[serde(rename = "han")]
    Han,
}

impl Lang {
    pub fn as_str(&self) -> &'static str {
        match self {
            Lang::Kor => "kor",
            Lang::Han => "han",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single surface occurrence of an entity in one sentence.
///
/// Offsets are 0-based half-open *character* offsets (Unicode scalar
/// values), not bytes: the corpus is Korean and Hanja text where byte
/// offsets would be meaningless to annotators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub language: Lang,
    pub sentence_index: usize,
    pub char_start: usize,
    pub char_end: usize,
    pub surface: String,
}

impl Mention {
    pub fn new(
        language: Lang,
        sentence_index: usize,
        char_start: usize,
        char_end: usize,
        surface: impl Into<String>,
    ) -> Self {
        Mention {
            language,
            sentence_index,
            char_start,
            char_end,
            surface: surface.into(),
        }
    }
}

/// A coreference cluster: every mention, in both languages, that refers to
/// one real-world entity. Korean mentions are required; Hanja mentions may
/// be absent when translation granularity differs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub entity_id: String,
    pub entity_type: EntityType,
    pub mentions_kor: Vec<Mention>,
    pub mentions_han: Vec<Mention>,
}

/// A labeled, directed relation between two entities with per-language
/// evidence sentence indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub subject_id: String,
    pub object_id: String,
    pub label: RelationType,
    pub evidence_kor: Vec<usize>,
    pub evidence_han: Vec<usize>,
}

/// Source-record metadata. All fields are optional in input files; the year
/// is Gregorian, stored as given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub book_title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_chapter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub writer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub book_volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copyright: Option<String>,
}

/// One annotated parallel document: ordered Korean and Hanja sentence lists
/// plus entities, relations, and metadata. Immutable after construction;
/// every operation over documents is a pure function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub sentences_kor: Vec<String>,
    pub sentences_han: Vec<String>,
    pub entities: Vec<Entity>,
    pub relations: Vec<RelationInstance>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl Document {
    pub fn sentences(&self, lang: Lang) -> &[String] {
        match lang {
            Lang::Kor => &self.sentences_kor,
            Lang::Han => &self.sentences_han,
        }
    }

    /// Total Korean character count; the sort key for the corpus split.
    pub fn korean_char_len(&self) -> usize {
        self.sentences_kor.iter().map(|s| s.chars().count()).sum()
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.entity_id == id)
    }
}

/// Character-offset substring; `None` when the span is out of bounds.
pub(crate) fn char_slice(sentence: &str, start: usize, end: usize) -> Option<String> {
    if start >= end {
        return None;
    }
    let total = sentence.chars().count();
    if end > total {
        return None;
    }
    Some(sentence.chars().skip(start).take(end - start).collect())
}
