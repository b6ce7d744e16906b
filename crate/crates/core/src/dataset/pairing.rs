//! Cross-patient pair selection.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::record::{ClassLabel, Magnification, SampleRecord, Subtype};
use super::seed::rng_for;
use crate::error::{Error, Result};

/// Which pairs of source images may be blended together.
///
/// Pairs always share a class label and always come from different
/// patients; those two rules have no switch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPolicy {
    pub same_magnification: bool,
    /// `true` for same-subtype mixing, `false` for class-level blending.
    pub same_subtype: bool,
    /// When set, only these patients may contribute sources (the training
    /// fold).
    pub restrict_to_patients: Option<BTreeSet<String>>,
}

impl Default for PairingPolicy {
    fn default() -> Self {
        Self {
            same_magnification: true,
            same_subtype: false,
            restrict_to_patients: None,
        }
    }
}

impl PairingPolicy {
    pub const fn same_class(&self) -> bool {
        true
    }

    pub const fn distinct_patients(&self) -> bool {
        true
    }

    pub fn admits(&self, r: &SampleRecord) -> bool {
        self.restrict_to_patients
            .as_ref()
            .is_none_or(|set| set.contains(&r.patient_id))
    }

    /// Whether `a` and `b` form a valid pair under this policy.
    pub fn allows(&self, a: &SampleRecord, b: &SampleRecord) -> bool {
        self.admits(a)
            && self.admits(b)
            && a.class_label == b.class_label
            && a.patient_id != b.patient_id
            && (!self.same_magnification || a.magnification == b.magnification)
            && (!self.same_subtype || a.subtype == b.subtype)
    }

    fn group_key(&self, r: &SampleRecord) -> (ClassLabel, Option<Magnification>, Option<Subtype>) {
        (
            r.class_label,
            self.same_magnification.then_some(r.magnification),
            self.same_subtype.then_some(r.subtype),
        )
    }
}

/// Uniform sampler over the ordered pairs of a pool that a policy allows.
///
/// The pool is filtered by the policy's patient restriction and sorted by
/// path, so the draw for a given seed does not depend on the order the pool
/// was supplied in.
#[derive(Debug)]
pub struct PairSampler<'a> {
    records: Vec<&'a SampleRecord>,
    /// Record indices of each record's compatibility group.
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
    /// Running total of valid partner counts, for weighted first picks.
    cumulative: Vec<u64>,
}

impl<'a> PairSampler<'a> {
    pub fn new(pool: impl IntoIterator<Item = &'a SampleRecord>, policy: &PairingPolicy) -> Self {
        let mut records: Vec<&SampleRecord> =
            pool.into_iter().filter(|r| policy.admits(r)).collect();
        records.sort_by(|a, b| a.path.cmp(&b.path));
        records.dedup_by(|a, b| a.path == b.path);

        let mut key_to_group = BTreeMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of = Vec::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            let g = *key_to_group.entry(policy.group_key(r)).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
            group_of.push(g);
        }

        let mut per_patient: BTreeMap<(usize, &str), u64> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            *per_patient
                .entry((group_of[i], r.patient_id.as_str()))
                .or_default() += 1;
        }
        let mut total = 0u64;
        let cumulative = records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let g = group_of[i];
                total += groups[g].len() as u64 - per_patient[&(g, r.patient_id.as_str())];
                total
            })
            .collect();

        Self {
            records,
            group_of,
            groups,
            cumulative,
        }
    }

    /// Number of valid ordered pairs.
    pub fn pair_count(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.pair_count() == 0
    }

    /// Draws one ordered pair uniformly, or `None` when no pair is valid.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<(&'a SampleRecord, &'a SampleRecord)> {
        let total = self.pair_count();
        if total == 0 {
            return None;
        }
        let u = rng.random_range(0..total);
        let i = self.cumulative.partition_point(|&c| c <= u);
        let first = self.records[i];
        let before = if i == 0 { 0 } else { self.cumulative[i - 1] };
        let partners = self.cumulative[i] - before;
        let mut j = rng.random_range(0..partners);
        for &k in &self.groups[self.group_of[i]] {
            let cand = self.records[k];
            if cand.patient_id == first.patient_id {
                continue;
            }
            if j == 0 {
                return Some((first, cand));
            }
            j -= 1;
        }
        unreachable!("partner count matches group contents")
    }
}

fn describe_pool(pool: &[SampleRecord]) -> String {
    let classes: BTreeSet<_> = pool.iter().map(|r| r.class_label.as_str()).collect();
    let mags: BTreeSet<_> = pool.iter().map(|r| r.magnification.to_string()).collect();
    if pool.is_empty() {
        "empty".into()
    } else {
        format!(
            "{} @ {}",
            classes.into_iter().collect::<Vec<_>>().join("+"),
            mags.into_iter().collect::<Vec<_>>().join("+")
        )
    }
}

/// Picks a policy-valid ordered pair from `pool`, deterministically for a
/// given `entry_seed`.
pub fn select_pair(
    pool: &[SampleRecord],
    policy: &PairingPolicy,
    entry_seed: u64,
) -> Result<(SampleRecord, SampleRecord)> {
    let sampler = PairSampler::new(pool, policy);
    let mut rng = rng_for(entry_seed);
    sampler
        .sample(&mut rng)
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| Error::InsufficientPatients {
            pool: describe_pool(pool),
        })
}
