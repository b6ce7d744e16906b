//! Corpus indexing, patient-wise folds, augmentation planning and
//! execution.

mod execute;
mod fold;
mod index;
mod jitter;
mod pairing;
mod plan;
mod record;
mod seed;

pub use execute::{
    execute_plan, manifest_to_string, read_manifest, replay, write_manifest, EntryStatus,
    ExecuteOptions, ManifestRecord, ManifestSource, TOOLKIT_VERSION,
};
pub use fold::{apply_fold, FoldFile, FoldSplit};
pub use index::{scan_dataset, DatasetIndex, MalformedFile, ScanOutcome};
pub use jitter::{color_jitter, MAX_GAIN_DEVIATION, MAX_OFFSET};
pub use pairing::{select_pair, PairSampler, PairingPolicy};
pub use plan::{
    plan_balancing, plan_multiplication, AugmentMethod, AugmentOptions, AugmentationPlan, Phase,
    PlanEntry, SourceRef, DEFAULT_JITTER_STRENGTH,
};
pub use record::{ClassLabel, Magnification, SampleRecord, Subtype};
pub use seed::{derive_seed, seed_tag};
