//! Patient-wise train/test folds.
//!
//! Fold files are JSON objects keyed by fold index:
//!
//! ```json
//! { "0": { "train": ["14-1", "14-2"], "test": ["14-3"] } }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::index::DatasetIndex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub train: BTreeSet<String>,
    pub test: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FoldFile {
    pub folds: BTreeMap<u32, FoldSplit>,
}

impl FoldFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: FoldFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidFold(e.to_string()))?;
        for (i, split) in &file.folds {
            if let Some(p) = split.train.intersection(&split.test).next() {
                return Err(Error::InvalidFold(format!(
                    "fold {i}: patient {p} is in both train and test"
                )));
            }
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn fold(&self, index: u32) -> Result<&FoldSplit> {
        self.folds
            .get(&index)
            .ok_or_else(|| Error::InvalidFold(format!("no fold with index {index}")))
    }
}

/// Splits `index` by patient. Every patient in the index must be assigned;
/// ids in the fold that the index does not know are ignored.
pub fn apply_fold(index: &DatasetIndex, split: &FoldSplit) -> Result<(DatasetIndex, DatasetIndex)> {
    if let Some(p) = split.train.intersection(&split.test).next() {
        return Err(Error::InvalidFold(format!(
            "patient {p} is in both train and test"
        )));
    }
    if let Some(p) = index
        .patient_ids()
        .find(|p| !split.train.contains(*p) && !split.test.contains(*p))
    {
        return Err(Error::UnassignedPatient(p.to_string()));
    }
    let (train, test): (Vec<_>, Vec<_>) = index
        .records()
        .iter()
        .cloned()
        .partition(|r| split.train.contains(&r.patient_id));
    Ok((
        DatasetIndex::from_records(train)?,
        DatasetIndex::from_records(test)?,
    ))
}
