//! JSON documents for concept classes and partitions with their memo tables.

use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use qlearn_core::bits::BitVec;
use qlearn_core::partitions::{version_space_key, MemoEntry, MemoTables, Partition};
use qlearn_core::{Concept, ConceptClass, ConceptSet};
use serde::{Deserialize, Serialize};

/// Truth tables are hex strings, little-endian by input index: input 0 is the
/// least significant bit of the first byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDocument {
    pub n: u32,
    pub concepts: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl ClassDocument {
    pub fn from_class(class: &ConceptClass) -> Self {
        Self {
            n: class.n(),
            concepts: class.rows().iter().map(|c| hex::encode(c.table().to_le_bytes())).collect(),
            labels: class.labels().map(<[String]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn to_class(&self) -> Result<ConceptClass> {
        ensure!(self.n <= qlearn_core::concept::MAX_INPUT_BITS, "n = {} exceeds {}", self.n, qlearn_core::concept::MAX_INPUT_BITS);
        let len = 1usize << self.n;
        let rows = self
            .concepts
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let bytes = hex::decode(h).with_context(|| format!("concept {i} is not hex"))?;
                let table = BitVec::from_le_bytes(len, &bytes)
                    .ok_or_else(|| anyhow!("concept {i} does not encode {len} bits"))?;
                Ok(Concept::from_table(table)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let class = if self.labels.is_empty() {
            ConceptClass::new(self.n, rows)?
        } else {
            ConceptClass::with_labels(self.n, rows, self.labels.clone())?
        };
        ensure!(class.len() == self.concepts.len(), "class document repeats a concept");
        Ok(class)
    }
}

pub fn read_class(path: &Path) -> Result<ConceptClass> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: ClassDocument = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    doc.to_class()
}

pub fn write_class(path: &Path, class: &ConceptClass) -> Result<()> {
    let text = serde_json::to_string_pretty(&ClassDocument::from_class(class))?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoDocument {
    /// Version-space key as 32 hex digits.
    pub key: String,
    pub members: Vec<usize>,
    pub ground: Vec<usize>,
    #[serde(rename = "I")]
    pub inputs: Vec<usize>,
    #[serde(rename = "J")]
    pub j_flips: Vec<usize>,
    #[serde(rename = "K")]
    pub k_flips: Vec<usize>,
    pub zero: Vec<usize>,
    pub star: Vec<usize>,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub universe: usize,
    pub pieces: Vec<Vec<usize>>,
    pub outer_iterations: u32,
    pub memo: Vec<MemoDocument>,
}

impl PartitionDocument {
    pub fn new(partition: &Partition, memo: &MemoTables) -> Self {
        Self {
            universe: partition.universe(),
            pieces: partition.pieces().iter().map(ConceptSet::to_vec).collect(),
            outer_iterations: memo.outer_iterations(),
            memo: memo
                .entries()
                .map(|(key, e)| MemoDocument {
                    key: format!("{key:032x}"),
                    members: e.members.to_vec(),
                    ground: e.ground.to_vec(),
                    inputs: e.inputs.clone(),
                    j_flips: e.j_flips.clone(),
                    k_flips: e.k_flips.clone(),
                    zero: e.zero.to_vec(),
                    star: e.star.to_vec(),
                    level: e.level,
                })
                .collect(),
        }
    }

    /// Rebuilds the partition and memo tables, checking every stored key.
    pub fn restore(&self) -> Result<(Partition, MemoTables)> {
        let set = |v: &[usize]| -> Result<ConceptSet> {
            if let Some(&bad) = v.iter().find(|&&i| i >= self.universe) {
                bail!("index {bad} outside universe {}", self.universe);
            }
            Ok(ConceptSet::from_indices(self.universe, v.iter().copied()))
        };
        let partition = Partition::from_indices(self.universe, &self.pieces)?;
        let mut memo = MemoTables::default();
        for d in &self.memo {
            let entry = MemoEntry {
                members: set(&d.members)?,
                ground: set(&d.ground)?,
                inputs: d.inputs.clone(),
                j_flips: d.j_flips.clone(),
                k_flips: d.k_flips.clone(),
                zero: set(&d.zero)?,
                star: set(&d.star)?,
                level: d.level,
            };
            let key = format!("{:032x}", version_space_key(&entry.members));
            ensure!(key == d.key, "memo key {} does not match its members (expected {key})", d.key);
            memo.insert(entry);
        }
        memo.set_outer_iterations(self.outer_iterations);
        Ok((partition, memo))
    }
}

pub fn write_partition(path: &Path, partition: &Partition, memo: &MemoTables) -> Result<()> {
    let text = serde_json::to_string_pretty(&PartitionDocument::new(partition, memo))?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub fn read_partition(path: &Path) -> Result<(Partition, MemoTables)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str::<PartitionDocument>(&text)
        .with_context(|| format!("parsing {}", path.display()))?
        .restore()
}
