use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use fitbench_core::formats::{
    self, decode_densepose_png, encode_densepose_png, encode_layout_png, encode_mask_png,
    load_layout, load_manifest, parse_skeleton, read_file, write_file, ManifestEntry,
};
use fitbench_core::geometry::{
    intersect_densepose, keypoints_to_mask, synthesize_densepose, Provenance,
};
use fitbench_core::harness::{
    fit_confusion, pair_indices, render_report, synth_silhouette, ConfusionOptions, HarnessError,
    LabeledLayout,
};
use fitbench_core::shape_metrics::{
    extract_garment_contour, garment_region, hausdorff_distance, hu_distance, hu_vector, Contour,
    HuVector, MetricError,
};
use fitbench_core::{FitClass, GarmentKind, LayoutMap};
use log::{error, info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CommandKind, JobConfig, Outcome};
use crate::selftest::run_selftest;

pub fn run(config: &JobConfig) -> Outcome {
    match config.command {
        CommandKind::Mask => run_mask(config),
        CommandKind::Densepose => run_densepose(config),
        CommandKind::Contour => run_contour(config),
        CommandKind::Metrics => run_metrics(config),
        CommandKind::Report => run_report(config),
        CommandKind::Selftest => run_selftest(config),
        CommandKind::Synth => run_synth(config),
    }
}

/// Runs `f` over `items` on a pool of `parallelism` workers, keeping input order.
fn map_ordered<T, R, F>(parallelism: usize, items: &[T], f: F) -> anyhow::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

/// Sorted files in `dir` with the given extension.
fn list_inputs(dir: &Path, extension: &str) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in
        fs::read_dir(dir).with_context(|| format!("reading input directory {}", dir.display()))?
    {
        let path = entry
            .with_context(|| format!("reading input directory {}", dir.display()))?
            .path();
        if path.is_file()
            && path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case(extension))
        {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn config_failure(err: anyhow::Error) -> Outcome {
    error!("{err:#}");
    Outcome::ConfigFailure
}

/// Shared driver for the per-file commands: one output file per input,
/// per-file failures logged and reported as a partial outcome.
fn per_file<F>(config: &JobConfig, extension: &str, suffix: &str, work: F) -> Outcome
where
    F: Fn(&Path) -> anyhow::Result<Vec<u8>> + Sync + Send,
{
    let input = config.input.as_deref().expect("validated");
    let out = config.out.as_deref().expect("validated");
    let files = match list_inputs(input, extension) {
        Ok(f) => f,
        Err(e) => return config_failure(e),
    };
    if files.is_empty() {
        warn!("no .{extension} files in {}", input.display());
        return Outcome::Clean;
    }
    if let Err(e) = fs::create_dir_all(out) {
        return config_failure(
            anyhow!(e).context(format!("creating output directory {}", out.display())),
        );
    }
    let results = match map_ordered(config.parallelism, &files, |path| {
        let bytes = work(path)?;
        let target = out.join(format!("{}{suffix}", stem(path)));
        write_file(&target, &bytes)?;
        Ok::<_, anyhow::Error>(target)
    }) {
        Ok(r) => r,
        Err(e) => return config_failure(e),
    };
    let mut failed = 0;
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(target) => info!("{} -> {}", path.display(), target.display()),
            Err(e) => {
                failed += 1;
                error!("{}: {e:#}", path.display());
            }
        }
    }
    if failed > 0 {
        warn!("{failed} of {} files failed", files.len());
        Outcome::Partial
    } else {
        Outcome::Clean
    }
}

fn load_skeleton(path: &Path) -> anyhow::Result<fitbench_core::geometry::Skeleton2D> {
    let text = String::from_utf8(read_file(path)?).context("keypoint file is not UTF-8")?;
    Ok(parse_skeleton(&text)?)
}

pub fn run_mask(config: &JobConfig) -> Outcome {
    per_file(config, "json", "_mask.png", |path| {
        let skeleton = load_skeleton(path)?;
        let rect = keypoints_to_mask(&skeleton, config.region)?;
        Ok(encode_mask_png(&rect.rasterize())?)
    })
}

pub fn run_densepose(config: &JobConfig) -> Outcome {
    per_file(config, "json", "_densepose.png", |path| {
        let skeleton = load_skeleton(path)?;
        let mut map = synthesize_densepose(&skeleton)?;
        if let Some(dir) = &config.predicted {
            let pred_path = dir.join(format!("{}.png", stem(path)));
            let predicted = decode_densepose_png(&read_file(&pred_path)?, Provenance::Synthesized)
                .with_context(|| format!("predicted dense pose {}", pred_path.display()))?;
            map = intersect_densepose(&map, &predicted)?;
        }
        Ok(encode_densepose_png(&map)?)
    })
}

pub fn run_contour(config: &JobConfig) -> Outcome {
    per_file(config, "png", "_contour.json", |path| {
        let layout = load_layout(path)?;
        let contour = extract_garment_contour(&layout)?;
        Ok(formats::contour_to_json(&contour).into_bytes())
    })
}

struct Loaded {
    entries: Vec<ManifestEntry>,
    layouts: Vec<LayoutMap>,
}

/// Reads a manifest and every layout it references; any failure is a configuration error.
fn load_dataset(path: &Path) -> anyhow::Result<Loaded> {
    let entries = load_manifest(path).with_context(|| format!("manifest {}", path.display()))?;
    let layouts = entries
        .iter()
        .map(|e| load_layout(&e.layout).with_context(|| format!("layout {}", e.layout.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Loaded { entries, layouts })
}

fn labeled(data: &Loaded) -> Vec<LabeledLayout> {
    data.entries
        .iter()
        .zip(&data.layouts)
        .map(|(e, l)| LabeledLayout {
            layout: l.clone(),
            fit: e.fit,
            pair_id: e.pair_id.clone(),
        })
        .collect()
}

#[derive(Serialize)]
struct PairLine<'a> {
    generated_index: usize,
    source_index: usize,
    generated_fit: FitClass,
    source_fit: FitClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_id: Option<&'a str>,
    hu: f64,
    hd: f64,
}

type Features = Result<(HuVector, Contour), MetricError>;

fn features(layout: &LayoutMap) -> Features {
    Ok((
        hu_vector(&garment_region(layout)?)?,
        extract_garment_contour(layout)?,
    ))
}

fn write_output(config: &JobConfig, text: &str) -> anyhow::Result<()> {
    match &config.out {
        Some(path) => Ok(write_file(path, text.as_bytes())?),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

pub fn run_metrics(config: &JobConfig) -> Outcome {
    let loaded = config
        .input
        .as_deref()
        .map(load_dataset)
        .unwrap()
        .and_then(|g| Ok((g, load_dataset(config.source.as_deref().unwrap())?)));
    let (generated, sources) = match loaded {
        Ok(x) => x,
        Err(e) => return config_failure(e),
    };
    let pairs = match pair_indices(&labeled(&generated), &labeled(&sources), config.pairing) {
        Ok(p) => p,
        Err(e) => return config_failure(e.into()),
    };
    let computed = map_ordered(config.parallelism, &generated.layouts, features).and_then(|g| {
        Ok((
            g,
            map_ordered(config.parallelism, &sources.layouts, features)?,
        ))
    });
    let (gen_features, src_features) = match computed {
        Ok(x) => x,
        Err(e) => return config_failure(e),
    };
    let distances = match map_ordered(config.parallelism, &pairs, |&(i, j)| {
        let (a, b) = match (&gen_features[i], &src_features[j]) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) => {
                return Err(format!(
                    "generated entry {i} ({}): {e}",
                    generated.entries[i].layout.display()
                ))
            }
            (_, Err(e)) => {
                return Err(format!(
                    "source entry {j} ({}): {e}",
                    sources.entries[j].layout.display()
                ))
            }
        };
        let hd = hausdorff_distance(&a.1, &b.1).map_err(|e| e.to_string())?;
        Ok((hu_distance(&a.0, &b.0), hd))
    }) {
        Ok(d) => d,
        Err(e) => return config_failure(e),
    };

    let mut text = String::new();
    let mut skipped = 0;
    for (&(i, j), d) in pairs.iter().zip(distances) {
        match d {
            Ok((hu, hd)) => {
                let line = PairLine {
                    generated_index: i,
                    source_index: j,
                    generated_fit: generated.entries[i].fit,
                    source_fit: sources.entries[j].fit,
                    pair_id: generated.entries[i].pair_id.as_deref(),
                    hu,
                    hd,
                };
                text.push_str(&serde_json::to_string(&line).expect("serializable"));
                text.push('\n');
            }
            Err(msg) => {
                skipped += 1;
                error!("skipping pair ({i}, {j}): {msg}");
            }
        }
    }
    if let Err(e) = write_output(config, &text) {
        return config_failure(e);
    }
    if skipped > 0 {
        Outcome::Partial
    } else {
        Outcome::Clean
    }
}

pub fn run_report(config: &JobConfig) -> Outcome {
    let loaded = load_dataset(config.input.as_deref().unwrap())
        .and_then(|g| Ok((g, load_dataset(config.source.as_deref().unwrap())?)));
    let (generated, sources) = match loaded {
        Ok(x) => x,
        Err(e) => return config_failure(e),
    };
    let options = ConfusionOptions {
        pairing: config.pairing,
        ..Default::default()
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
    {
        Ok(p) => p,
        Err(e) => return config_failure(e.into()),
    };
    let report = pool.install(|| fit_confusion(&labeled(&generated), &labeled(&sources), options));
    match report {
        Ok(r) => match write_output(config, &render_report(&r, config.format)) {
            Ok(()) => Outcome::Clean,
            Err(e) => config_failure(e),
        },
        Err(e @ HarnessError::Metric { .. }) => {
            error!("{e}");
            Outcome::Partial
        }
        Err(e) => config_failure(e.into()),
    }
}

pub fn run_synth(config: &JobConfig) -> Outcome {
    let out = config.out.as_deref().expect("validated");
    let fits: Vec<FitClass> = if config.fits.is_empty() {
        GarmentKind::Top.fits().to_vec()
    } else {
        config.fits.clone()
    };
    if let Err(e) = fs::create_dir_all(out) {
        return config_failure(anyhow!(e).context(format!("creating {}", out.display())));
    }
    let jobs: Vec<(FitClass, u64)> = fits
        .iter()
        .flat_map(|&f| (config.seed..config.seed + config.count).map(move |s| (f, s)))
        .collect();
    let written = map_ordered(config.parallelism, &jobs, |&(fit, seed)| {
        let layout = synth_silhouette(fit, seed, config.canvas)?;
        let name = format!("{fit}_{seed:05}.png");
        write_file(&out.join(&name), &encode_layout_png(&layout)?)?;
        Ok::<_, anyhow::Error>(ManifestEntry {
            layout: PathBuf::from(name),
            fit,
            // ordinal within the run, so two runs with different seeds pair up
            pair_id: Some(format!("{fit}-{}", seed - config.seed)),
        })
    });
    let entries = match written.and_then(|r| r.into_iter().collect::<anyhow::Result<Vec<_>>>()) {
        Ok(e) => e,
        Err(e) => return config_failure(e),
    };
    let manifest = serde_json::to_string_pretty(&entries).expect("serializable") + "\n";
    match write_file(&out.join("manifest.json"), manifest.as_bytes()) {
        Ok(()) => Outcome::Clean,
        Err(e) => config_failure(e.into()),
    }
}
