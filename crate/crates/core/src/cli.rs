//! The `leafid` command line: extract, train, classify, evaluate, ablate.
//!
//! Usage errors exit with status 2, pipeline errors with status 1.

use std::error::Error as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::classifier::{load_model, save_model, FitOptions, TrainedModel};
use crate::config::RunConfig;
use crate::error::{LeafError, Result};
use crate::features::{
    analyze_file, extract_file, load_cache, load_cache_expecting, save_cache, ExtractionParams, FeatureCache,
    FeatureSetSpec,
};
use crate::harness::{
    ablation_on_cache, build_manifest, evaluate, extract_manifest, parse_spec_list, split_cache, with_jobs,
    DatasetManifest, EvaluationReport, ManifestLayout, SplitRule,
};
use crate::vein::VeinPolarity;

#[derive(Debug, Parser)]
#[command(name = "leafid", version, about = "Leaf image features and species classification")]
pub struct Cli {
    /// Flat `key = value` config file; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for image extraction (default: LEAFID_JOBS, then all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract features of every image in a dataset into a cache file.
    Extract {
        root: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write masks and vein layers as PNGs here.
        #[arg(long)]
        debug_dir: Option<PathBuf>,
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        extraction: ExtractionArgs,
    },
    /// Fit a classifier on a cache or dataset (on the reference part if split).
    Train {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Feature groups, e.g. `pft+hull+color` or `row 10`.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        ridge_factor: Option<f64>,
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[command(flatten)]
        extraction: ExtractionArgs,
    },
    /// Print the most probable species of each image.
    Classify {
        model: PathBuf,
        #[arg(required = true)]
        images: Vec<PathBuf>,
        /// Species listed per image.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Accuracy and confusion matrix on a cache or dataset (on the test part if split).
    Evaluate {
        model: PathBuf,
        input: PathBuf,
        /// Write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Train and evaluate one model per feature set listed in a spec file.
    Ablate {
        root: PathBuf,
        #[arg(long)]
        specs: PathBuf,
        /// Write the reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Save the extracted features here as well.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        ridge_factor: Option<f64>,
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        split: SplitArgs,
        #[command(flatten)]
        extraction: ExtractionArgs,
    },
}

#[derive(Debug, Args, Default)]
pub struct DatasetArgs {
    /// class-subdirs, flavia-ranges or manifest-file.
    #[arg(long)]
    pub layout: Option<ManifestLayout>,
}

#[derive(Debug, Args, Default)]
pub struct SplitArgs {
    /// References per species.
    #[arg(long)]
    pub refs: Option<usize>,
    /// Test leaves per species.
    #[arg(long)]
    pub tests: Option<usize>,
    /// sorted-name or seeded.
    #[arg(long)]
    pub rule: Option<SplitRule>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct ExtractionArgs {
    #[arg(long)]
    pub glcm_levels: Option<usize>,
    #[arg(long)]
    pub signature_samples: Option<usize>,
    #[arg(long)]
    pub polar_radial: Option<usize>,
    #[arg(long)]
    pub polar_angular: Option<usize>,
    /// bright or dark.
    #[arg(long)]
    pub vein_polarity: Option<VeinPolarity>,
}

impl DatasetArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.layout = self.layout.or(c.layout);
    }
}

impl SplitArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.refs = self.refs.or(c.refs);
        c.tests = self.tests.or(c.tests);
        c.rule = self.rule.or(c.rule);
        c.seed = self.seed.or(c.seed);
    }
}

impl ExtractionArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.glcm_levels = self.glcm_levels.or(c.glcm_levels);
        c.signature_samples = self.signature_samples.or(c.signature_samples);
        c.polar_radial = self.polar_radial.or(c.polar_radial);
        c.polar_angular = self.polar_angular.or(c.polar_angular);
        c.vein_polarity = self.vein_polarity.or(c.vein_polarity);
    }
}

/// Parses `std::env::args`, runs the command and maps the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut msg = format!("error: {e}");
            let mut src = e.source();
            while let Some(s) = src {
                // stage errors already print their source inline
                if !msg.contains(&s.to_string()) {
                    msg.push_str(&format!("\n  caused by: {s}"));
                }
                src = s.source();
            }
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    verbose: bool,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn jobs(&self) -> Result<Option<usize>> {
        if let Some(j) = self.cfg.jobs {
            return Ok(Some(j));
        }
        match std::env::var("LEAFID_JOBS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| LeafError::Config(format!("LEAFID_JOBS must be a positive integer, got `{v}`"))),
            _ => Ok(None),
        }
    }

    fn manifest(&self, root: &Path) -> Result<DatasetManifest> {
        let layout = self.cfg.layout.unwrap_or(ManifestLayout::ClassSubdirs);
        let m = build_manifest(root, layout)?;
        self.log(format!("{}: {} images, {} species", root.display(), m.len(), m.classes.len()));
        Ok(m)
    }

    fn extract(&self, root: &Path, params: &ExtractionParams) -> Result<FeatureCache> {
        let m = self.manifest(root)?;
        let cache = extract_manifest(&m, params, self.jobs()?)?;
        self.log(format!("extracted {} feature vectors", cache.rows.len()));
        Ok(cache)
    }

    /// A cache file is loaded; a directory is extracted. With `expect`, a cache
    /// must have been produced with exactly those parameters.
    fn features(&self, input: &Path, params: &ExtractionParams, expect: bool) -> Result<FeatureCache> {
        if input.is_file() {
            if expect {
                load_cache_expecting(input, params)
            } else {
                load_cache(input)
            }
        } else {
            self.extract(input, params)
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.jobs = cli.jobs.or(cfg.jobs);
    if cfg.jobs == Some(0) {
        return Err(LeafError::Config("--jobs must be at least 1".into()));
    }
    let verbose = cli.verbose;
    match cli.command {
        Command::Extract { root, out, debug_dir, dataset, extraction } => {
            dataset.apply(&mut cfg);
            extraction.apply(&mut cfg);
            let ctx = Ctx { cfg, verbose };
            let params = ctx.cfg.extraction_params()?;
            let cache = ctx.extract(&root, &params)?;
            save_cache(&cache, &out)?;
            if let Some(dir) = debug_dir {
                write_debug(&ctx, &root, &cache, &params, &dir)?;
            }
            println!("wrote {} feature vectors to {}", cache.rows.len(), out.display());
        }
        Command::Train { input, out, spec, ridge_factor, dataset, split, extraction } => {
            dataset.apply(&mut cfg);
            split.apply(&mut cfg);
            extraction.apply(&mut cfg);
            if let Some(s) = spec {
                cfg.spec = Some(s.parse()?);
            }
            cfg.ridge_factor = ridge_factor.or(cfg.ridge_factor);
            let ctx = Ctx { cfg, verbose };
            let params = ctx.cfg.extraction_params()?;
            let cache = ctx.features(&input, &params, ctx.cfg.has_extraction_overrides())?;
            let rows = match ctx.cfg.split_plan(None) {
                Some(plan) => split_cache(&cache, &plan)?.0,
                None => cache.rows.clone(),
            };
            let spec: FeatureSetSpec = ctx.cfg.spec();
            let fit = FitOptions { ridge_factor: ctx.cfg.ridge_factor()? };
            let model = TrainedModel::fit(&rows, cache.classes.clone(), spec, cache.params, fit)?;
            save_model(&model, &out)?;
            println!(
                "trained `{}` ({} dims, {} species) on {} leaves, wrote {}",
                model.spec,
                model.spec.dim(),
                model.classes.len(),
                rows.len(),
                out.display()
            );
        }
        Command::Classify { model, images, top } => {
            cfg.top_k = top.or(cfg.top_k);
            let ctx = Ctx { cfg, verbose };
            let model = load_model(&model)?;
            let k = ctx.cfg.top_k.unwrap_or(1).max(1);
            let results: Vec<Result<String>> = with_jobs(ctx.jobs()?, || {
                images
                    .par_iter()
                    .map(|img| {
                        let v = extract_file(img, &model.params)?;
                        let post = model.posterior(&v)?;
                        let ranked: Vec<String> =
                            post.top_k(k).into_iter().map(|(c, p)| format!("{}\t{p:.4}", model.classes[c])).collect();
                        Ok(format!("{}\t{}", img.display(), ranked.join("\t")))
                    })
                    .collect()
            })?;
            for line in results {
                println!("{}", line?);
            }
        }
        Command::Evaluate { model, input, report, dataset, split } => {
            dataset.apply(&mut cfg);
            split.apply(&mut cfg);
            let ctx = Ctx { cfg, verbose };
            let model = load_model(&model)?;
            let cache = ctx.features(&input, &model.params, true)?;
            if cache.classes != model.classes {
                return Err(LeafError::Classifier("species of the test data differ from the model's".into()));
            }
            let plan = ctx.cfg.split_plan(None);
            let rows = match &plan {
                Some(p) => split_cache(&cache, p)?.1,
                None => cache.rows,
            };
            let rep = EvaluationReport { plan, ..evaluate(&model, &rows)? };
            print!("{}", rep.to_text());
            if let Some(path) = report {
                std::fs::write(&path, rep.to_json() + "\n")?;
            }
        }
        Command::Ablate { root, specs, report, cache, ridge_factor, dataset, split, extraction } => {
            dataset.apply(&mut cfg);
            split.apply(&mut cfg);
            extraction.apply(&mut cfg);
            cfg.ridge_factor = ridge_factor.or(cfg.ridge_factor);
            let ctx = Ctx { cfg, verbose };
            let text = std::fs::read_to_string(&specs)
                .map_err(|e| LeafError::Config(format!("cannot read {}: {e}", specs.display())))?;
            let specs = parse_spec_list(&text)?;
            let params = ctx.cfg.extraction_params()?;
            let plan = ctx.cfg.split_plan(Some(crate::harness::SplitPlan::flavia())).expect("fallback given");
            let features = ctx.extract(&root, &params)?;
            if let Some(path) = cache {
                save_cache(&features, path)?;
            }
            let fit = FitOptions { ridge_factor: ctx.cfg.ridge_factor()? };
            let rep = ablation_on_cache(&features, &plan, &specs, fit)?;
            print!("{}", rep.to_text_table());
            if let Some(path) = report {
                std::fs::write(&path, rep.to_json() + "\n")?;
            }
        }
    }
    Ok(())
}

fn write_debug(ctx: &Ctx, root: &Path, cache: &FeatureCache, params: &ExtractionParams, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for row in &cache.rows {
        let a = analyze_file(root.join(&row.source), params)?;
        let stem = row.source.with_extension("").to_string_lossy().replace(['/', '\\'], "_");
        a.mask.save_png(dir.join(format!("{stem}-mask.png")))?;
        for layer in &a.veins {
            layer.veins.save_png(dir.join(format!("{stem}-vein-r{}.png", layer.radius)))?;
        }
    }
    ctx.log(format!("wrote debug images to {}", dir.display()));
    Ok(())
}
