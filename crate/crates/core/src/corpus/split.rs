//! Deterministic length-stratified train/valid/test split.
//!
//! Documents are sorted by total Korean character count, partitioned into
//! consecutive buckets, and each bucket is randomly assigned 2:1:1
//! (train:valid:test) with the seeded generator. Remainders inside a bucket
//! fill train-first in ratio order (train, train, valid, test), so e.g. a
//! tail bucket of 3 contributes 2 train and 1 valid.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};

use super::types::Document;
use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "valid" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

/// The result of a split: per-document assignments in length-sorted order,
/// plus the inputs needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub bucket_size: usize,
    /// `(input_index, doc_id, split)` in length-sorted assignment order.
    pub assignments: Vec<(usize, String, Split)>,
}

impl SplitAssignment {
    pub fn indices(&self, split: Split) -> Vec<usize> {
        self.assignments
            .iter()
            .filter(|(_, _, s)| *s == split)
            .map(|(i, _, _)| *i)
            .collect()
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut t = (0, 0, 0);
        for (_, _, s) in &self.assignments {
            match s {
                Split::Train => t.0 += 1,
                Split::Valid => t.1 += 1,
                Split::Test => t.2 += 1,
            }
        }
        t
    }

    /// Plain-text manifest: a header carrying the reproduction inputs, then
    /// one `doc_id<TAB>split` line per document in assignment order.
    pub fn write_manifest<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# split-manifest v1")?;
        writeln!(w, "# seed={} bucket_size={}", self.seed, self.bucket_size)?;
        for (_, doc_id, split) in &self.assignments {
            writeln!(w, "{doc_id}\t{split}")?;
        }
        Ok(())
    }

    pub fn read_manifest<R: BufRead>(r: R) -> Result<SplitAssignment, CorpusError> {
        let mut seed = 0u64;
        let mut bucket_size = 0usize;
        let mut assignments = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for token in rest.split_whitespace() {
                    if let Some(v) = token.strip_prefix("seed=") {
                        seed = v.parse().map_err(|_| CorpusError::Malformed {
                            line: lineno + 1,
                            message: format!("bad seed {v:?}"),
                        })?;
                    } else if let Some(v) = token.strip_prefix("bucket_size=") {
                        bucket_size = v.parse().map_err(|_| CorpusError::Malformed {
                            line: lineno + 1,
                            message: format!("bad bucket_size {v:?}"),
                        })?;
                    }
                }
                continue;
            }
            let (doc_id, split) = line.split_once('\t').ok_or(CorpusError::Malformed {
                line: lineno + 1,
                message: "expected doc_id<TAB>split".into(),
            })?;
            let split: Split = split.parse().map_err(|message| CorpusError::Malformed {
                line: lineno + 1,
                message,
            })?;
            assignments.push((assignments.len(), doc_id.to_string(), split));
        }
        Ok(SplitAssignment {
            seed,
            bucket_size,
            assignments,
        })
    }
}

/// Splits a corpus 2:1:1 into train/valid/test sets.
///
/// Deterministic for a fixed `(docs, seed, bucket_size)`. The sort is
/// stable, so equal-length documents keep their input order before bucket
/// shuffling.
pub fn split_train_valid_test(
    docs: &[Document],
    seed: u64,
    bucket_size: usize,
) -> Result<SplitAssignment, CorpusError> {
    if docs.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    if bucket_size < 4 {
        return Err(CorpusError::BadBucketSize(bucket_size));
    }

    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.sort_by_key(|&i| docs[i].korean_char_len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = Vec::with_capacity(docs.len());
    for bucket in order.chunks(bucket_size) {
        let mut bucket: Vec<usize> = bucket.to_vec();
        bucket.shuffle(&mut rng);
        let s = bucket.len();
        let (base, rem) = (s / 4, s % 4);
        let n_train = 2 * base + rem.min(2);
        let n_valid = base + usize::from(rem == 3);
        for (pos, &idx) in bucket.iter().enumerate() {
            let split = if pos < n_train {
                Split::Train
            } else if pos < n_train + n_valid {
                Split::Valid
            } else {
                Split::Test
            };
            assignments.push((idx, docs[idx].doc_id.clone(), split));
        }
    }

    Ok(SplitAssignment {
        seed,
        bucket_size,
        assignments,
    })
}
