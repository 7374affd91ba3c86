use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fuzzycolor::{
    lab_to_srgb, nearest_centroids, run_fcm, seed_from_references, ClusterConfig, InitMode, Lab,
    ReferenceSet,
};
use image::{Rgb, RgbImage};

use crate::input::{load_input, RasterInput};
use crate::report::RunReport;

const PALETTE_SWATCH: u32 = 32;

fn load_refs(path: Option<&Path>) -> Result<ReferenceSet> {
    match path {
        Some(p) => ReferenceSet::load(p).with_context(|| format!("reference file {}", p.display())),
        None => Ok(ReferenceSet::builtin()),
    }
}

pub struct SeedArgs {
    pub input: PathBuf,
    pub clusters: usize,
    pub lambda: f64,
    pub refs: Option<PathBuf>,
    pub sample: Option<usize>,
}

/// Prints the scanned reference table, the sorted order, the dominant colors
/// and the initial centroids.
pub fn cmd_seed(args: &SeedArgs, out: &mut impl Write) -> Result<()> {
    let refs = load_refs(args.refs.as_deref())?;
    let input = load_input(&args.input, args.sample)?;
    let seeding = seed_from_references(&input.colors, &refs, args.lambda, args.clusters)?;

    writeln!(
        out,
        "# reference scan over {} points, lambda = {}",
        input.colors.len(),
        args.lambda
    )?;
    writeln!(
        out,
        "{:<4} {:<18} {:>8} {:>8} {:>8} {:>8}  p",
        "ref", "name", "L*", "a*", "b*", "mu"
    )?;
    for (i, r) in seeding.scanned.refs().iter().enumerate() {
        let p =
            r.p.map_or_else(|| "-".to_string(), |p| format!("x{}", p + 1));
        writeln!(
            out,
            "R{:<3} {:<18} {:>8.2} {:>8.2} {:>8.2} {:>8.4}  {}",
            i + 1,
            r.name,
            r.lab.l,
            r.lab.a,
            r.lab.b,
            r.mu,
            p
        )?;
    }
    let names = |entries: &[fuzzycolor::RankedReference]| {
        entries
            .iter()
            .map(|e| e.color.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    writeln!(out, "sorted: {}", names(seeding.sorted.entries()))?;
    writeln!(
        out,
        "dominant colors: {}",
        names(seeding.dominant.entries())
    )?;
    writeln!(out, "initial centroids:")?;
    for (i, s) in seeding.seeds.iter().enumerate() {
        writeln!(
            out,
            "v{:<3} x{:<5} {}  {}",
            i + 1,
            s.point + 1,
            s.lab,
            s.name
        )?;
    }
    Ok(())
}

pub struct ClusterArgs {
    pub input: PathBuf,
    pub config: ClusterConfig,
    pub report: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub palette: Option<PathBuf>,
    pub sample: Option<usize>,
}

/// Runs the full pipeline and writes the report (to `out` when no report
/// path is given) plus any requested images.
pub fn cmd_cluster(args: &ClusterArgs, out: &mut impl Write) -> Result<RunReport> {
    let input = load_input(&args.input, args.sample)?;
    if input.raster.is_none() && (args.labels.is_some() || args.palette.is_some()) {
        bail!("--labels and --palette require a PNG input");
    }
    let partition = run_fcm(&input.colors, &args.config)?;
    let report = RunReport::new(&args.config, &partition);
    let json = report.to_json();
    match &args.report {
        Some(path) => std::fs::write(path, &json)
            .with_context(|| format!("failed to write report {}", path.display()))?,
        None => out.write_all(json.as_bytes())?,
    }
    if let (Some(path), Some(raster)) = (&args.labels, &input.raster) {
        label_image(raster, &partition.centroids)
            .save(path)
            .with_context(|| format!("failed to write {}", path.display()))?;
    }
    if let Some(path) = &args.palette {
        palette_strip(&partition.centroids)
            .save(path)
            .with_context(|| format!("failed to write {}", path.display()))?;
    }
    Ok(report)
}

/// Each pixel painted with the sRGB color of its nearest centroid.
pub fn label_image(raster: &RasterInput, centroids: &[Lab]) -> RgbImage {
    let colors: Vec<[u8; 3]> = centroids.iter().map(lab_to_srgb).collect();
    let labels = nearest_centroids(&raster.pixels, centroids);
    let mut img = RgbImage::new(raster.width, raster.height);
    for (pixel, label) in img.pixels_mut().zip(labels) {
        *pixel = Rgb(colors[label]);
    }
    img
}

pub fn palette_strip(centroids: &[Lab]) -> RgbImage {
    let width = PALETTE_SWATCH * centroids.len().max(1) as u32;
    let colors: Vec<[u8; 3]> = centroids.iter().map(lab_to_srgb).collect();
    RgbImage::from_fn(width, PALETTE_SWATCH, |x, _| {
        Rgb(colors[(x / PALETTE_SWATCH) as usize])
    })
}

pub struct CompareArgs {
    pub input: PathBuf,
    /// Shared settings; `init` and `seed` are overridden per run.
    pub config: ClusterConfig,
    pub inits: Vec<InitMode>,
    pub seeds: Vec<u64>,
    pub sample: Option<usize>,
}

/// One CSV row per run: deterministic modes run once, `random` once per seed.
pub fn cmd_compare(args: &CompareArgs, out: &mut impl Write) -> Result<()> {
    if args.inits.is_empty() {
        bail!("at least one init mode is required");
    }
    let input = load_input(&args.input, args.sample)?;
    let seeds = if args.seeds.is_empty() {
        vec![0]
    } else {
        args.seeds.clone()
    };

    let mut modes: Vec<InitMode> = Vec::new();
    for &m in &args.inits {
        if !modes.contains(&m) {
            modes.push(m);
        }
    }

    writeln!(out, "init,seed,iterations,objective,converged")?;
    for mode in modes {
        let runs: Vec<Option<u64>> = if mode == InitMode::Random {
            seeds.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for seed in runs {
            let mut config = args.config.clone();
            config.init = mode;
            config.seed = seed.unwrap_or(config.seed);
            let partition = run_fcm(&input.colors, &config)
                .with_context(|| format!("{mode} initialization failed"))?;
            writeln!(
                out,
                "{},{},{},{},{}",
                mode,
                seed.map_or_else(String::new, |s| s.to_string()),
                partition.iterations,
                partition.objective(),
                partition.converged
            )?;
        }
    }
    Ok(())
}
