//! Rendering planned entries to PNG files and recording a manifest.
//!
//! The manifest is JSON Lines, one record per planned entry, sorted by
//! output name. A record holds every resolved parameter needed to render the
//! same bytes again with the same toolkit version (see [`replay`]).

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jitter::color_jitter;
use super::plan::{AugmentMethod, AugmentationPlan, Phase, PlanEntry, SourceRef};
use super::record::{ClassLabel, Magnification};
use crate::blend::{direct_blend, make_half_mask, mix_blend, pyramid_blend, MaskKind};
use crate::codec::{encode_png, read_png};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::kernel::Kernel;
use crate::pyramid::{default_levels, reduce};

/// Identifies the renderer in manifests.
pub const TOOLKIT_VERSION: &str = concat!("glpb-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifestSource {
    /// A corpus image, by the path it was scanned under.
    Original { path: PathBuf },
    /// An earlier output, by file name relative to the output directory.
    Generated { name: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub output: String,
    pub status: EntryStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub phase: Phase,
    pub method: AugmentMethod,
    pub sources: Vec<ManifestSource>,
    pub class_label: ClassLabel,
    pub magnification: Magnification,
    pub mask_kind: MaskKind,
    pub n_levels: Option<usize>,
    pub transition_width: Option<usize>,
    pub jitter_strength: Option<f64>,
    pub seed: u64,
    pub resize_half: bool,
    pub version: String,
}

#[derive(Debug, Clone)]
pub struct ExecuteOptions {
    pub workers: usize,
    /// Reduce each corpus image once before use. Generated sources are
    /// already at working resolution and are not reduced again.
    pub resize_half: bool,
    pub kernel: Kernel<f32>,
}

impl Default for ExecuteOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            resize_half: false,
            kernel: Kernel::default(),
        }
    }
}

/// Parameters that determine an output given its decoded sources.
struct RenderParams {
    method: AugmentMethod,
    mask_kind: MaskKind,
    n_levels: Option<usize>,
    transition_width: Option<usize>,
    jitter_strength: Option<f64>,
    seed: u64,
}

struct Rendered {
    png: Vec<u8>,
    n_levels: Option<usize>,
    transition_width: Option<usize>,
}

fn render(p: &RenderParams, sources: &[Image<f32>], kernel: &Kernel<f32>) -> Result<Rendered> {
    let arity = if p.method == AugmentMethod::Jitter {
        1
    } else {
        2
    };
    if sources.len() != arity {
        return Err(Error::InvalidParameter(format!(
            "{} needs {arity} source(s), got {}",
            p.method,
            sources.len()
        )));
    }
    let orientation = p.mask_kind.orientation().ok_or_else(|| {
        Error::InvalidParameter("dataset entries need a half mask orientation".into())
    })?;
    let first = &sources[0];
    let (w, h) = first.dims();
    let mut n_levels = None;
    let mut transition_width = None;
    let out = match p.method {
        AugmentMethod::Jitter => {
            let strength = p
                .jitter_strength
                .ok_or_else(|| Error::InvalidParameter("jitter entry without strength".into()))?;
            color_jitter(first, strength, p.seed)?
        }
        AugmentMethod::Direct => {
            direct_blend(first, &sources[1], &make_half_mask(w, h, orientation))?
        }
        AugmentMethod::Mix => {
            let tw = p
                .transition_width
                .unwrap_or_else(|| orientation.span(w, h) / 4);
            transition_width = Some(tw);
            mix_blend(first, &sources[1], orientation, tw)?
        }
        AugmentMethod::Glpb => {
            let n = p.n_levels.unwrap_or_else(|| default_levels(w, h));
            n_levels = Some(n);
            pyramid_blend(
                first,
                &sources[1],
                &make_half_mask(w, h, orientation),
                kernel,
                n,
            )?
        }
    };
    Ok(Rendered {
        png: encode_png(&out)?,
        n_levels,
        transition_width,
    })
}

fn load_original(path: &Path, resize_half: bool, kernel: &Kernel<f32>) -> Result<Image<f32>> {
    let img = read_png::<f32>(path)?;
    Ok(if resize_half {
        reduce(&img, kernel)
    } else {
        img
    })
}

fn load_source(src: &SourceRef, out_dir: &Path, opts: &ExecuteOptions) -> Result<Image<f32>> {
    match src {
        SourceRef::Original(r) => load_original(&r.path, opts.resize_half, &opts.kernel),
        SourceRef::Generated { name, .. } => read_png(&out_dir.join(name)),
    }
}

fn manifest_source(src: &SourceRef) -> ManifestSource {
    match src {
        SourceRef::Original(r) => ManifestSource::Original {
            path: r.path.clone(),
        },
        SourceRef::Generated { name, .. } => ManifestSource::Generated { name: name.clone() },
    }
}

fn run_entry(entry: &PlanEntry, out_dir: &Path, opts: &ExecuteOptions) -> ManifestRecord {
    let params = RenderParams {
        method: entry.method,
        mask_kind: entry.mask_kind,
        n_levels: entry.n_levels,
        transition_width: entry.transition_width,
        jitter_strength: entry.jitter_strength,
        seed: entry.seed,
    };
    let result = entry
        .sources
        .iter()
        .map(|s| load_source(s, out_dir, opts))
        .collect::<Result<Vec<_>>>()
        .and_then(|imgs| render(&params, &imgs, &opts.kernel))
        .and_then(|r| {
            let path = out_dir.join(&entry.output_name);
            std::fs::write(&path, &r.png).map_err(|e| Error::io(path, e))?;
            Ok(r)
        });

    let (status, error, n_levels, transition_width) = match result {
        Ok(r) => (EntryStatus::Ok, None, r.n_levels, r.transition_width),
        Err(e) => (
            EntryStatus::Failed,
            Some(e.to_string()),
            entry.n_levels,
            entry.transition_width,
        ),
    };
    ManifestRecord {
        output: entry.output_name.clone(),
        status,
        error,
        phase: entry.phase,
        method: entry.method,
        sources: entry.sources.iter().map(manifest_source).collect(),
        class_label: entry.class_label,
        magnification: entry.magnification,
        mask_kind: entry.mask_kind,
        n_levels,
        transition_width,
        jitter_strength: entry.jitter_strength,
        seed: entry.seed,
        resize_half: opts.resize_half,
        version: TOOLKIT_VERSION.to_string(),
    }
}

/// Renders every entry of `plan` into `out_dir`.
///
/// Balancing entries run before multiplication entries, since the latter
/// may read the former's outputs. Within a phase entries are independent and
/// fan out over `opts.workers` threads. Failures are recorded per entry and
/// do not stop the run. The returned records are sorted by output name.
pub fn execute_plan(
    plan: &AugmentationPlan,
    out_dir: &Path,
    opts: &ExecuteOptions,
) -> Result<Vec<ManifestRecord>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;

    let mut records = Vec::with_capacity(plan.len());
    for phase in [Phase::Balance, Phase::Multiply] {
        let batch: Vec<&PlanEntry> = plan.entries().iter().filter(|e| e.phase == phase).collect();
        let done: Vec<ManifestRecord> = pool.install(|| {
            batch
                .par_iter()
                .map(|e| run_entry(e, out_dir, opts))
                .collect()
        });
        records.extend(done);
    }
    records.sort_by(|a, b| a.output.cmp(&b.output));
    Ok(records)
}

/// Serializes records as JSON Lines, in the given order.
pub fn manifest_to_string(records: &[ManifestRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("manifest records serialize"));
        out.push('\n');
    }
    out
}

pub fn write_manifest(path: &Path, records: &[ManifestRecord]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(manifest_to_string(records).as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| Error::InvalidManifest(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

/// Re-renders a successful manifest record and returns the PNG bytes.
/// Generated sources are resolved against `out_dir`.
pub fn replay(record: &ManifestRecord, out_dir: &Path, kernel: &Kernel<f32>) -> Result<Vec<u8>> {
    if record.version != TOOLKIT_VERSION {
        return Err(Error::InvalidManifest(format!(
            "record made by {}, this is {TOOLKIT_VERSION}",
            record.version
        )));
    }
    let sources = record
        .sources
        .iter()
        .map(|s| match s {
            ManifestSource::Original { path } => load_original(path, record.resize_half, kernel),
            ManifestSource::Generated { name } => read_png(&out_dir.join(name)),
        })
        .collect::<Result<Vec<_>>>()?;
    let params = RenderParams {
        method: record.method,
        mask_kind: record.mask_kind,
        n_levels: record.n_levels,
        transition_width: record.transition_width,
        jitter_strength: record.jitter_strength,
        seed: record.seed,
    };
    Ok(render(&params, &sources, kernel)?.png)
}
