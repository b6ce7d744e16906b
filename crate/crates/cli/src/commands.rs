use std::collections::BTreeMap;
use std::path::Path;

use glpb::codec::{read_png, write_png};
use glpb::dataset::{
    apply_fold, execute_plan, plan_balancing, plan_multiplication, scan_dataset, write_manifest,
    AugmentMethod, AugmentOptions, AugmentationPlan, ClassLabel, DatasetIndex, EntryStatus,
    ExecuteOptions, FoldFile, Magnification, PairingPolicy, ScanOutcome, Subtype,
};
use glpb::{
    build_gaussian, build_laplacian, collapse, default_levels, max_adjacent_jump, reduce,
    seam_energy, BlendMask, BlendMethod, BlendSpec, Error, Image, Kernel, MaskKind,
};

use crate::exit::{CliError, ALL_FAILED, OK};
use crate::{AugmentArgs, BlendArgs, PyramidArgs, ScanArgs};

type CmdResult = Result<u8, CliError>;

fn load(path: &Path, resize_half: bool, kernel: &Kernel) -> Result<Image, Error> {
    let img = read_png::<f32>(path)?;
    Ok(if resize_half {
        reduce(&img, kernel)
    } else {
        img
    })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))
}

pub fn pyramid(args: &PyramidArgs) -> CmdResult {
    let kernel = Kernel::default();
    let img = load(&args.input, args.resize_half, &kernel)?;
    let (w, h) = img.dims();
    let levels = args.levels.unwrap_or_else(|| default_levels(w, h));
    let gp = build_gaussian(&img, &kernel, levels)?;
    let lp = build_laplacian(&img, &kernel, levels)?;
    create_dir(&args.out_dir)?;

    for (l, g) in gp.levels().iter().enumerate() {
        write_png(&args.out_dir.join(format!("gauss_{l}.png")), g)?;
    }
    // bands are signed: show v as 0.5 + v/2
    for (l, band) in lp.bands().iter().enumerate() {
        let shown = band.map(|v| 0.5 + 0.5 * v);
        write_png(&args.out_dir.join(format!("laplace_{l}.png")), &shown)?;
    }
    write_png(
        &args.out_dir.join(format!("laplace_{levels}.png")),
        lp.top(),
    )?;
    let recon = collapse(&lp, &kernel);
    write_png(&args.out_dir.join("recon.png"), &recon)?;

    println!("{}x{} input, {levels} levels", w, h);
    for (l, (lw, lh)) in gp.level_dims().into_iter().enumerate() {
        println!("level {l}: {lw}x{lh}");
    }
    println!(
        "reconstruction max abs error: {:.3e}",
        recon.max_abs_diff(&img)?
    );
    Ok(OK)
}

pub fn blend(args: &BlendArgs) -> CmdResult {
    let kernel = Kernel::default();
    let method: BlendMethod = args.method.parse()?;
    let mask_kind: MaskKind = args.mask_kind.parse()?;
    if mask_kind == MaskKind::Custom && args.mask.is_none() {
        return Err(CliError::usage("--mask-kind custom requires --mask"));
    }
    if mask_kind != MaskKind::Custom && args.mask.is_some() {
        return Err(CliError::usage("--mask requires --mask-kind custom"));
    }

    let a = load(&args.a, args.resize_half, &kernel)?;
    let b = load(&args.b, args.resize_half, &kernel)?;
    if !a.same_shape(&b) {
        return Err(Error::DimMismatch(format!(
            "{} is {}x{}x{}, {} is {}x{}x{}",
            args.a.display(),
            a.width(),
            a.height(),
            a.channels(),
            args.b.display(),
            b.width(),
            b.height(),
            b.channels()
        ))
        .into());
    }
    let custom = match &args.mask {
        Some(p) => {
            let m = load(p, args.resize_half, &kernel)?;
            let m = if m.channels() == 1 { m } else { m.channel(0) };
            Some(BlendMask::new(m.clamped())?)
        }
        None => None,
    };
    let orientation = mask_kind
        .orientation()
        .unwrap_or(glpb::Orientation::Vertical);
    let spec = BlendSpec {
        method,
        mask_kind,
        transition_width: args
            .transition_width
            .unwrap_or_else(|| orientation.span(a.width(), a.height()) / 4),
        n_levels: args.levels,
    };
    let out = spec.apply(&a, &b, custom.as_ref(), &kernel)?;
    write_png(&args.out, &out)?;

    let shown = out.clamped();
    println!("seam_energy: {:.6}", seam_energy(&shown, orientation));
    println!(
        "max_adjacent_jump: {:.6}",
        max_adjacent_jump(&shown, orientation)
    );
    Ok(OK)
}

fn report_malformed(outcome: &ScanOutcome) {
    for m in &outcome.malformed {
        eprintln!("warning: skipping {}: {}", m.path.display(), m.reason);
    }
}

fn print_table(index: &DatasetIndex) {
    let table = index.subtype_table();
    print!("{:<10} {:<8} {:<20}", "class", "subtype", "tumor type");
    for m in Magnification::ALL {
        print!(" {:>7}", m.to_string());
    }
    println!(" {:>8} {:>9}", "images", "patients");

    let row = |label: &str, code: &str, name: &str, pred: &dyn Fn(Subtype) -> bool| {
        print!("{label:<10} {code:<8} {name:<20}");
        let mut total = 0;
        for m in Magnification::ALL {
            let n: usize = table
                .iter()
                .filter(|((t, mag), _)| pred(*t) && *mag == m)
                .map(|(_, (n, _))| n)
                .sum();
            total += n;
            print!(" {n:>7}");
        }
        let patients = index.patient_count_where(|r| pred(r.subtype));
        println!(" {total:>8} {patients:>9}");
    };

    for class in ClassLabel::ALL {
        for t in Subtype::ALL
            .into_iter()
            .filter(|t| t.class_label() == class)
        {
            row(class.as_str(), t.code(), t.name(), &|s| s == t);
        }
        row(class.as_str(), "total", "", &|s| s.class_label() == class);
    }
    row("all", "total", "", &|_| true);
}

pub fn scan(args: &ScanArgs) -> CmdResult {
    let outcome = scan_dataset(&args.root)?;
    report_malformed(&outcome);
    print_table(&outcome.index);
    println!("malformed files: {}", outcome.malformed.len());
    Ok(OK)
}

fn augment_options(
    args: &AugmentArgs,
    method: AugmentMethod,
    mask_kind: MaskKind,
) -> AugmentOptions {
    AugmentOptions {
        method,
        mask_kind,
        n_levels: args.levels,
        transition_width: args.transition_width,
        jitter_strength: args.jitter_strength,
        randomize_orientation: args.randomize_orientation,
    }
}

pub fn augment(args: &AugmentArgs) -> CmdResult {
    if args.factor == 0 {
        return Err(CliError::usage("--factor must be at least 1"));
    }
    if args.workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let balance_method: AugmentMethod = args.balance_method.parse()?;
    let multiply_method: AugmentMethod = args.method.parse()?;
    let mask_kind: MaskKind = args.mask_kind.parse()?;
    let balance_opts = augment_options(args, balance_method, mask_kind);
    let multiply_opts = augment_options(args, multiply_method, mask_kind);
    balance_opts.validate()?;
    multiply_opts.validate()?;

    let outcome = scan_dataset(&args.root)?;
    report_malformed(&outcome);

    let mut policy = PairingPolicy {
        same_magnification: !args.allow_cross_magnification,
        same_subtype: args.same_subtype,
        restrict_to_patients: None,
    };
    let train = match &args.fold_file {
        Some(path) => {
            let folds = FoldFile::read(path)?;
            let split = folds.fold(args.fold_index.unwrap_or(0))?;
            let (train, test) = apply_fold(&outcome.index, split)?;
            println!(
                "fold {}: {} train images, {} test images",
                args.fold_index.unwrap_or(0),
                train.len(),
                test.len()
            );
            policy.restrict_to_patients = Some(train.patient_ids().map(str::to_string).collect());
            train
        }
        None => outcome.index.clone(),
    };

    let balanced = if args.balance {
        plan_balancing(&train, &policy, &balance_opts, args.seed)?
    } else {
        AugmentationPlan::default()
    };
    let multiplied = plan_multiplication(
        &train,
        &balanced,
        args.factor,
        &multiply_opts,
        &policy,
        args.seed,
    )?;
    let plan = balanced.merged(&multiplied)?;

    let exec = ExecuteOptions {
        workers: args.workers,
        resize_half: args.resize_half,
        kernel: Kernel::default(),
    };
    let records = execute_plan(&plan, &args.out_dir, &exec)?;
    let manifest = args
        .manifest
        .clone()
        .unwrap_or_else(|| args.out_dir.join("manifest.jsonl"));
    write_manifest(&manifest, &records)?;

    let ok = records
        .iter()
        .filter(|r| r.status == EntryStatus::Ok)
        .count();
    let failed = records.len() - ok;
    for r in records.iter().filter(|r| r.status == EntryStatus::Failed) {
        eprintln!(
            "warning: {} failed: {}",
            r.output,
            r.error.as_deref().unwrap_or("unknown error")
        );
    }
    println!(
        "planned {} (balance {}, multiply {}), succeeded {ok}, failed {failed}",
        plan.len(),
        balanced.len(),
        multiplied.len()
    );

    let mut finals: BTreeMap<(ClassLabel, Magnification), usize> = train.counts().clone();
    for r in records.iter().filter(|r| r.status == EntryStatus::Ok) {
        *finals.entry((r.class_label, r.magnification)).or_default() += 1;
    }
    for class in ClassLabel::ALL {
        let total: usize = finals
            .iter()
            .filter(|((c, _), _)| *c == class)
            .map(|(_, n)| n)
            .sum();
        let per_mag: Vec<String> = finals
            .iter()
            .filter(|((c, _), _)| *c == class)
            .map(|((_, m), n)| format!("{m}={n}"))
            .collect();
        println!("final {class}: {total} ({})", per_mag.join(", "));
    }
    println!("manifest: {}", manifest.display());

    if !records.is_empty() && ok == 0 {
        return Ok(ALL_FAILED);
    }
    Ok(OK)
}
