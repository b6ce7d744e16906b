//! Planning of synthetic samples: class balancing followed by N-fold
//! multiplication of the balanced set.
//!
//! Planning is single-threaded and touches no pixels. Every random choice is
//! drawn from a seed derived from the global seed plus labels naming the
//! choice (phase, method, class, magnification, ordinal), so plans do not
//! depend on the order records were discovered in.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::index::DatasetIndex;
use super::pairing::{PairSampler, PairingPolicy};
use super::record::{ClassLabel, Magnification, SampleRecord};
use super::seed::{derive_seed, rng_for, seed_tag};
use crate::blend::{BlendMethod, MaskKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentMethod {
    Glpb,
    Mix,
    Direct,
    Jitter,
}

impl AugmentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AugmentMethod::Glpb => "glpb",
            AugmentMethod::Mix => "mix",
            AugmentMethod::Direct => "direct",
            AugmentMethod::Jitter => "jitter",
        }
    }

    /// Output file name prefix.
    pub fn prefix(self) -> &'static str {
        match self {
            AugmentMethod::Glpb => "GLPB",
            AugmentMethod::Mix => "MIX",
            AugmentMethod::Direct => "DIRECT",
            AugmentMethod::Jitter => "JITTER",
        }
    }

    pub fn blend_method(self) -> Option<BlendMethod> {
        match self {
            AugmentMethod::Glpb => Some(BlendMethod::Glpb),
            AugmentMethod::Mix => Some(BlendMethod::Mix),
            AugmentMethod::Direct => Some(BlendMethod::Direct),
            AugmentMethod::Jitter => None,
        }
    }
}

impl fmt::Display for AugmentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AugmentMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glpb" => Ok(AugmentMethod::Glpb),
            "mix" => Ok(AugmentMethod::Mix),
            "direct" => Ok(AugmentMethod::Direct),
            "jitter" => Ok(AugmentMethod::Jitter),
            _ => Err(Error::InvalidParameter(format!(
                "unknown augmentation method {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Balance,
    Multiply,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Balance => "balance",
            Phase::Multiply => "multiply",
        }
    }
}

/// How planned entries are rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOptions {
    pub method: AugmentMethod,
    /// Half-split orientation for blend methods.
    pub mask_kind: MaskKind,
    /// Pyramid depth for GLPB; `None` resolves per image at execution.
    pub n_levels: Option<usize>,
    /// Ramp width for mix; `None` resolves to a quarter of the blend span.
    pub transition_width: Option<usize>,
    pub jitter_strength: f64,
    /// Swap which source supplies the first half, per entry seed.
    pub randomize_orientation: bool,
}

pub const DEFAULT_JITTER_STRENGTH: f64 = 0.5;

impl AugmentOptions {
    pub fn new(method: AugmentMethod) -> Self {
        Self {
            method,
            mask_kind: MaskKind::HalfVertical,
            n_levels: None,
            transition_width: None,
            jitter_strength: DEFAULT_JITTER_STRENGTH,
            randomize_orientation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mask_kind == MaskKind::Custom {
            return Err(Error::InvalidParameter(
                "dataset augmentation needs a half mask orientation".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.jitter_strength) {
            return Err(Error::InvalidParameter(format!(
                "jitter strength {} outside [0, 1]",
                self.jitter_strength
            )));
        }
        Ok(())
    }
}

/// Where an entry's pixels come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceRef {
    Original(SampleRecord),
    /// Output of an earlier entry, by output name.
    Generated {
        name: String,
        class_label: ClassLabel,
        magnification: Magnification,
    },
}

impl SourceRef {
    pub fn id(&self) -> String {
        match self {
            SourceRef::Original(r) => r.path.to_string_lossy().into_owned(),
            SourceRef::Generated { name, .. } => name.clone(),
        }
    }

    pub fn class_label(&self) -> ClassLabel {
        match self {
            SourceRef::Original(r) => r.class_label,
            SourceRef::Generated { class_label, .. } => *class_label,
        }
    }

    pub fn magnification(&self) -> Magnification {
        match self {
            SourceRef::Original(r) => r.magnification,
            SourceRef::Generated { magnification, .. } => *magnification,
        }
    }

    pub fn record(&self) -> Option<&SampleRecord> {
        match self {
            SourceRef::Original(r) => Some(r),
            SourceRef::Generated { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry {
    pub output_name: String,
    pub phase: Phase,
    pub method: AugmentMethod,
    /// Two sources for blends (first half from `sources[0]`), one for jitter.
    pub sources: Vec<SourceRef>,
    pub class_label: ClassLabel,
    pub magnification: Magnification,
    pub mask_kind: MaskKind,
    pub n_levels: Option<usize>,
    pub transition_width: Option<usize>,
    pub jitter_strength: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AugmentationPlan {
    entries: Vec<PlanEntry>,
}

impl AugmentationPlan {
    /// Wraps entries, rejecting duplicate output names.
    pub fn from_entries(entries: Vec<PlanEntry>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.output_name.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate output name {}",
                    e.output_name
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The phase shared by every entry, if there is exactly one.
    pub fn phase(&self) -> Option<Phase> {
        let first = self.entries.first()?.phase;
        self.entries
            .iter()
            .all(|e| e.phase == first)
            .then_some(first)
    }

    pub fn count(&self, class: ClassLabel, magnification: Magnification) -> usize {
        self.entries
            .iter()
            .filter(|e| e.class_label == class && e.magnification == magnification)
            .count()
    }

    /// Concatenates two plans, rejecting name collisions.
    pub fn merged(&self, other: &AugmentationPlan) -> Result<Self> {
        Self::from_entries(self.entries.iter().chain(&other.entries).cloned().collect())
    }
}

/// Hands out `<PREFIX>_<class>_<mag>_<seed-tag>_<k>.png` names with `k`
/// counting per (method, class, magnification).
struct Namer {
    tag: String,
    next: BTreeMap<(AugmentMethod, ClassLabel, Magnification), usize>,
}

impl Namer {
    fn new(global_seed: u64) -> Self {
        Self {
            tag: seed_tag(global_seed),
            next: BTreeMap::new(),
        }
    }

    fn continuing(global_seed: u64, earlier: &AugmentationPlan) -> Self {
        let mut namer = Self::new(global_seed);
        for e in earlier.entries() {
            *namer
                .next
                .entry((e.method, e.class_label, e.magnification))
                .or_default() += 1;
        }
        namer
    }

    fn next(&mut self, method: AugmentMethod, class: ClassLabel, mag: Magnification) -> String {
        let k = self.next.entry((method, class, mag)).or_default();
        let name = format!(
            "{}_{}_{}_{}_{:06}.png",
            method.prefix(),
            class.as_str(),
            mag.value(),
            self.tag,
            k
        );
        *k += 1;
        name
    }
}

fn blend_entry(
    opts: &AugmentOptions,
    phase: Phase,
    output_name: String,
    class_label: ClassLabel,
    magnification: Magnification,
    sources: Vec<SourceRef>,
    seed: u64,
) -> PlanEntry {
    PlanEntry {
        output_name,
        phase,
        method: opts.method,
        sources,
        class_label,
        magnification,
        mask_kind: opts.mask_kind,
        n_levels: (opts.method == AugmentMethod::Glpb)
            .then_some(opts.n_levels)
            .flatten(),
        transition_width: (opts.method == AugmentMethod::Mix)
            .then_some(opts.transition_width)
            .flatten(),
        jitter_strength: (opts.method == AugmentMethod::Jitter).then_some(opts.jitter_strength),
        seed,
    }
}

/// Records of `class` a synthetic entry for `mag` may draw from.
fn class_pool<'a>(
    index: &'a DatasetIndex,
    class: ClassLabel,
    mag: Magnification,
    policy: &'a PairingPolicy,
) -> Vec<&'a SampleRecord> {
    index
        .records_where(move |r| {
            r.class_label == class
                && (!policy.same_magnification || r.magnification == mag)
                && policy.admits(r)
        })
        .collect()
}

fn pool_name(class: ClassLabel, mag: Magnification, policy: &PairingPolicy) -> String {
    if policy.same_magnification {
        format!("{class} @ {mag}")
    } else {
        format!("{class} (all magnifications)")
    }
}

/// Draws the sources for one synthetic entry of `class` at `mag`.
fn draw_sources<R: Rng>(
    opts: &AugmentOptions,
    sampler: &PairSampler<'_>,
    singles: &[&SampleRecord],
    rng: &mut R,
    pool: impl FnOnce() -> String,
) -> Result<Vec<SourceRef>> {
    if opts.method == AugmentMethod::Jitter {
        if singles.is_empty() {
            return Err(Error::InsufficientPatients { pool: pool() });
        }
        let r = singles[rng.random_range(0..singles.len())];
        return Ok(vec![SourceRef::Original(r.clone())]);
    }
    let (mut a, mut b) = sampler
        .sample(rng)
        .ok_or_else(|| Error::InsufficientPatients { pool: pool() })?;
    if opts.randomize_orientation && rng.random_bool(0.5) {
        std::mem::swap(&mut a, &mut b);
    }
    Ok(vec![
        SourceRef::Original(a.clone()),
        SourceRef::Original(b.clone()),
    ])
}

/// Plans enough minority-class samples to equalize the two classes at every
/// magnification. The majority class is left untouched.
pub fn plan_balancing(
    index: &DatasetIndex,
    policy: &PairingPolicy,
    opts: &AugmentOptions,
    seed: u64,
) -> Result<AugmentationPlan> {
    opts.validate()?;
    let mut namer = Namer::new(seed);
    let mut entries = Vec::new();
    for mag in index.magnifications() {
        let benign = index.count(ClassLabel::Benign, mag);
        let malignant = index.count(ClassLabel::Malignant, mag);
        let (minority, deficit) = match benign.cmp(&malignant) {
            std::cmp::Ordering::Equal => continue,
            std::cmp::Ordering::Less => (ClassLabel::Benign, malignant - benign),
            std::cmp::Ordering::Greater => (ClassLabel::Malignant, benign - malignant),
        };
        let pool = class_pool(index, minority, mag, policy);
        let sampler = PairSampler::new(pool.iter().copied(), policy);
        let mag_s = mag.value().to_string();
        for k in 0..deficit {
            let entry_seed = derive_seed(
                seed,
                &[
                    Phase::Balance.as_str(),
                    opts.method.as_str(),
                    minority.as_str(),
                    &mag_s,
                    &k.to_string(),
                ],
            );
            let mut rng = rng_for(entry_seed);
            let sources = draw_sources(opts, &sampler, &pool, &mut rng, || {
                pool_name(minority, mag, policy)
            })?;
            entries.push(blend_entry(
                opts,
                Phase::Balance,
                namer.next(opts.method, minority, mag),
                minority,
                mag,
                sources,
                entry_seed,
            ));
        }
    }
    AugmentationPlan::from_entries(entries)
}

/// Plans `(factor - 1) * S` extra samples, where `S` is the size of the
/// original set plus the outputs of `balanced`.
///
/// With colour jitter every base sample (original or synthetic) receives
/// `factor - 1` perturbed copies. Blend methods draw new pairs per
/// (class, magnification) bucket, in proportion to the bucket's base size,
/// from original records only.
pub fn plan_multiplication(
    index: &DatasetIndex,
    balanced: &AugmentationPlan,
    factor: usize,
    opts: &AugmentOptions,
    policy: &PairingPolicy,
    seed: u64,
) -> Result<AugmentationPlan> {
    if factor == 0 {
        return Err(Error::InvalidParameter(
            "multiplication factor must be at least 1".into(),
        ));
    }
    opts.validate()?;
    if factor == 1 {
        return Ok(AugmentationPlan::default());
    }

    let mut base: Vec<SourceRef> = index
        .records_where(|r| policy.admits(r))
        .cloned()
        .map(SourceRef::Original)
        .collect();
    base.extend(balanced.entries().iter().map(|e| SourceRef::Generated {
        name: e.output_name.clone(),
        class_label: e.class_label,
        magnification: e.magnification,
    }));
    base.sort_by_cached_key(|s| (s.class_label(), s.magnification(), s.id()));

    let mut namer = Namer::continuing(seed, balanced);
    let mut entries = Vec::with_capacity((factor - 1) * base.len());

    if opts.method == AugmentMethod::Jitter {
        for src in &base {
            let id = src.id();
            for r in 1..factor {
                let entry_seed = derive_seed(
                    seed,
                    &[
                        Phase::Multiply.as_str(),
                        opts.method.as_str(),
                        &id,
                        &r.to_string(),
                    ],
                );
                entries.push(blend_entry(
                    opts,
                    Phase::Multiply,
                    namer.next(opts.method, src.class_label(), src.magnification()),
                    src.class_label(),
                    src.magnification(),
                    vec![src.clone()],
                    entry_seed,
                ));
            }
        }
        return AugmentationPlan::from_entries(entries);
    }

    let mut buckets: BTreeMap<(ClassLabel, Magnification), usize> = BTreeMap::new();
    for s in &base {
        *buckets
            .entry((s.class_label(), s.magnification()))
            .or_default() += 1;
    }
    for ((class, mag), size) in buckets {
        let pool = class_pool(index, class, mag, policy);
        let sampler = PairSampler::new(pool.iter().copied(), policy);
        let mag_s = mag.value().to_string();
        for k in 0..(factor - 1) * size {
            let entry_seed = derive_seed(
                seed,
                &[
                    Phase::Multiply.as_str(),
                    opts.method.as_str(),
                    class.as_str(),
                    &mag_s,
                    &k.to_string(),
                ],
            );
            let mut rng = rng_for(entry_seed);
            let sources = draw_sources(opts, &sampler, &pool, &mut rng, || {
                pool_name(class, mag, policy)
            })?;
            entries.push(blend_entry(
                opts,
                Phase::Multiply,
                namer.next(opts.method, class, mag),
                class,
                mag,
                sources,
                entry_seed,
            ));
        }
    }
    AugmentationPlan::from_entries(entries)
}
