use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use super::record::{ClassLabel, Magnification, SampleRecord, Subtype};
use crate::error::{Error, Result};

/// Parsed corpus. Records are kept sorted by path so that every derived
/// quantity is independent of directory listing order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetIndex {
    records: Vec<SampleRecord>,
    counts: BTreeMap<(ClassLabel, Magnification), usize>,
    patients: BTreeMap<String, Vec<usize>>,
}

impl DatasetIndex {
    /// Builds an index, rejecting patients that appear under both classes.
    pub fn from_records(mut records: Vec<SampleRecord>) -> Result<Self> {
        records.sort_by(|a, b| a.path.cmp(&b.path));
        let mut counts = BTreeMap::new();
        let mut patients: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut patient_class: BTreeMap<&str, ClassLabel> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            if let Some(&c) = patient_class.get(r.patient_id.as_str()) {
                if c != r.class_label {
                    return Err(Error::InconsistentPatient {
                        patient: r.patient_id.clone(),
                    });
                }
            } else {
                patient_class.insert(&r.patient_id, r.class_label);
            }
            *counts.entry((r.class_label, r.magnification)).or_insert(0) += 1;
            patients.entry(r.patient_id.clone()).or_default().push(i);
        }
        Ok(Self {
            records,
            counts,
            patients,
        })
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, class: ClassLabel, magnification: Magnification) -> usize {
        self.counts
            .get(&(class, magnification))
            .copied()
            .unwrap_or(0)
    }

    pub fn class_count(&self, class: ClassLabel) -> usize {
        self.counts
            .iter()
            .filter(|((c, _), _)| *c == class)
            .map(|(_, n)| n)
            .sum()
    }

    pub fn counts(&self) -> &BTreeMap<(ClassLabel, Magnification), usize> {
        &self.counts
    }

    pub fn magnifications(&self) -> BTreeSet<Magnification> {
        self.counts.keys().map(|&(_, m)| m).collect()
    }

    pub fn patient_ids(&self) -> impl Iterator<Item = &str> {
        self.patients.keys().map(String::as_str)
    }

    pub fn patient_records(&self, patient: &str) -> impl Iterator<Item = &SampleRecord> {
        self.patients
            .get(patient)
            .into_iter()
            .flatten()
            .map(|&i| &self.records[i])
    }

    pub fn patient_class(&self, patient: &str) -> Option<ClassLabel> {
        self.patient_records(patient).next().map(|r| r.class_label)
    }

    pub fn records_where<'a>(
        &'a self,
        pred: impl Fn(&SampleRecord) -> bool + 'a,
    ) -> impl Iterator<Item = &'a SampleRecord> + 'a {
        self.records.iter().filter(move |r| pred(r))
    }

    /// Image and distinct-patient counts per (subtype, magnification).
    pub fn subtype_table(&self) -> BTreeMap<(Subtype, Magnification), (usize, usize)> {
        let mut images: BTreeMap<(Subtype, Magnification), usize> = BTreeMap::new();
        let mut patients: BTreeMap<(Subtype, Magnification), BTreeSet<&str>> = BTreeMap::new();
        for r in &self.records {
            *images.entry((r.subtype, r.magnification)).or_default() += 1;
            patients
                .entry((r.subtype, r.magnification))
                .or_default()
                .insert(&r.patient_id);
        }
        images
            .into_iter()
            .map(|(k, n)| (k, (n, patients[&k].len())))
            .collect()
    }

    /// Distinct patients with at least one record matching `pred`.
    pub fn patient_count_where(&self, pred: impl Fn(&SampleRecord) -> bool) -> usize {
        self.records
            .iter()
            .filter(|r| pred(r))
            .map(|r| r.patient_id.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedFile {
    pub path: PathBuf,
    pub reason: String,
}

/// Result of a directory scan: the index plus every file that did not match
/// the naming grammar.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub index: DatasetIndex,
    pub malformed: Vec<MalformedFile>,
}

/// Recursively indexes every regular file under `root`.
pub fn scan_dataset(root: &Path) -> Result<ScanOutcome> {
    let meta = std::fs::metadata(root).map_err(|e| Error::UnreadableRoot {
        path: root.to_path_buf(),
        reason: e.to_string(),
    })?;
    if !meta.is_dir() {
        return Err(Error::UnreadableRoot {
            path: root.to_path_buf(),
            reason: "not a directory".into(),
        });
    }
    std::fs::read_dir(root).map_err(|e| Error::UnreadableRoot {
        path: root.to_path_buf(),
        reason: e.to_string(),
    })?;

    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                malformed.push(MalformedFile {
                    path: e
                        .path()
                        .map(Path::to_path_buf)
                        .unwrap_or_else(|| root.to_path_buf()),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        match SampleRecord::from_path(entry.path()) {
            Ok(r) => records.push(r),
            Err(reason) => malformed.push(MalformedFile {
                path: entry.path().to_path_buf(),
                reason,
            }),
        }
    }
    Ok(ScanOutcome {
        index: DatasetIndex::from_records(records)?,
        malformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str) -> SampleRecord {
        SampleRecord::from_path(Path::new(name)).unwrap()
    }

    #[test]
    fn counts_and_patients() {
        let idx = DatasetIndex::from_records(vec![
            rec("SOB_M_DC-14-2-40-001.png"),
            rec("SOB_B_A-14-1-40-001.png"),
            rec("SOB_B_A-14-1-40-002.png"),
            rec("SOB_B_F-14-3-100-001.png"),
        ])
        .unwrap();
        let m40 = Magnification::new(40).unwrap();
        assert_eq!(idx.count(ClassLabel::Benign, m40), 2);
        assert_eq!(idx.count(ClassLabel::Malignant, m40), 1);
        assert_eq!(idx.class_count(ClassLabel::Benign), 3);
        assert_eq!(
            idx.patient_ids().collect::<Vec<_>>(),
            ["14-1", "14-2", "14-3"]
        );
        assert_eq!(idx.patient_records("14-1").count(), 2);
        assert_eq!(idx.patient_class("14-2"), Some(ClassLabel::Malignant));
        assert_eq!(idx.subtype_table()[&(Subtype::A, m40)], (2, 1));
    }

    #[test]
    fn order_independent() {
        let names = [
            "SOB_B_A-14-1-40-002.png",
            "SOB_M_DC-14-2-40-001.png",
            "SOB_B_A-14-1-40-001.png",
        ];
        let a = DatasetIndex::from_records(names.iter().map(|n| rec(n)).collect()).unwrap();
        let b = DatasetIndex::from_records(names.iter().rev().map(|n| rec(n)).collect()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn patient_in_two_classes_is_rejected() {
        let r = DatasetIndex::from_records(vec![
            rec("SOB_B_A-14-1-40-001.png"),
            rec("SOB_M_DC-14-1-40-001.png"),
        ]);
        assert!(matches!(r, Err(Error::InconsistentPatient { .. })));
    }

    #[test]
    fn missing_root() {
        let r = scan_dataset(Path::new("/definitely/not/here"));
        assert!(matches!(r, Err(Error::UnreadableRoot { .. })));
    }
}
