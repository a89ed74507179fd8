//! Command-line front end: detection, synthesis, execution, manipulation and
//! rendering over files.
//!
//! Every command reads its inputs, validates them, and either writes its
//! output or fails with a [`CliError`] whose JSON form goes to stderr.

pub mod error;
pub mod files;
pub mod render;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use regprog::detect::{detect, DetectParams};
use regprog::dsl::{self, execute, Bounds};
use regprog::manip::{edit_regularity, extrapolate, inpaint, Constraint, Extension};
use regprog::raster::RasterImage;
use regprog::synth::{synthesize, SynthConfig};

pub use error::CliError;
use files::{CentroidFile, Costs, RunManifest, Timing};

#[derive(Debug, Parser)]
#[command(
    name = "regprog",
    version,
    about = "Regularity programs for images of repeated objects"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect repeated-object centroids in an image.
    Detect(DetectArgs),
    /// Synthesize a program from centroids (JSON) or an image.
    Synth(SynthArgs),
    /// Execute a program and emit its draws as centroids.
    Exec(ExecArgs),
    /// Fill the holes of an image guided by a program.
    Inpaint(InpaintArgs),
    /// Grow the pattern beyond the canvas or the program's region.
    Extrapolate(ExtrapolateArgs),
    /// Scale the irregularity of detected objects around the program lattice.
    Edit(EditArgs),
    /// Render centroids, lattice and hull as SVG.
    Render(RenderArgs),
    /// Re-run a synthesis from its manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    pub image: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub peak_radius: u32,
    #[arg(long, default_value_t = 2.0)]
    pub bin_size: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Centroid JSON, or a PNG/PPM image to run detection on first.
    pub input: PathBuf,
    /// Image for attribute search when the input is a centroid file.
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Manifest path; defaults to `manifest.json` beside the output.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 5.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 4)]
    pub spacing_min: i64,
    #[arg(long, default_value_t = 128)]
    pub spacing_max: i64,
    #[arg(long)]
    pub no_attributes: bool,
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    pub program: PathBuf,
    /// Image bounds as WxH.
    #[arg(long, value_parser = parse_bounds)]
    pub bounds: Bounds,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InpaintArgs {
    pub image: PathBuf,
    /// PNG whose non-zero pixels are holes.
    pub mask: PathBuf,
    pub program: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    pub image: PathBuf,
    pub program: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub left: u32,
    #[arg(long, default_value_t = 0)]
    pub right: u32,
    #[arg(long, default_value_t = 0)]
    pub top: u32,
    #[arg(long, default_value_t = 0)]
    pub bottom: u32,
    /// Relax condition K on the current canvas instead of growing it.
    #[arg(long, conflicts_with_all = ["left", "right", "top", "bottom"])]
    pub relax_condition: Option<usize>,
    #[arg(long, default_value_t = 1, requires = "relax_condition")]
    pub delta: i64,
    /// Where to write the relaxed program.
    #[arg(long)]
    pub program_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EditArgs {
    pub image: PathBuf,
    pub program: PathBuf,
    /// Detected centroids.
    pub centroids: PathBuf,
    #[arg(long)]
    pub gain: f64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub centroids: PathBuf,
    pub program: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Fail unless the replayed program equals this file byte for byte.
    #[arg(long)]
    pub check: Option<PathBuf>,
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w: u32 = w.trim().parse().map_err(|_| format!("bad width {w:?}"))?;
    let h: u32 = h.trim().parse().map_err(|_| format!("bad height {h:?}"))?;
    if w == 0 || h == 0 {
        return Err("bounds must be positive".into());
    }
    Ok(Bounds::new(w, h))
}

/// Runs one command. Text outputs without `-o` go to stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Detect(a) => cmd_detect(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Exec(a) => cmd_exec(&a),
        Command::Inpaint(a) => cmd_inpaint(&a),
        Command::Extrapolate(a) => cmd_extrapolate(&a),
        Command::Edit(a) => cmd_edit(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Replay(a) => cmd_replay(&a),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => files::write_bytes(p, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::file(Path::new("<stdout>"), e))
        }
    }
}

fn is_image(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png" | "ppm")
    )
}

pub fn cmd_detect(a: &DetectArgs) -> Result<(), CliError> {
    let img = files::read_image(&a.image)?;
    let params = DetectParams {
        peak_radius: a.peak_radius,
        bin_size: a.bin_size,
        ..DetectParams::default()
    };
    let found = detect(&img, &params)?;
    let file = CentroidFile::from_set(&found.centroid_set()?);
    emit(a.output.as_deref(), &file.to_json())
}

/// Synthesis shared by `synth` and `replay`.
pub fn synthesize_program(
    centroids: &CentroidFile,
    image: Option<&RasterImage>,
    config: &SynthConfig,
) -> Result<(regprog::synth::SynthReport, String), CliError> {
    let set = centroids.to_set()?;
    let report = synthesize(&set, image, config)?;
    let text = dsl::print(&report.program);
    Ok((report, text))
}

pub fn cmd_synth(a: &SynthArgs) -> Result<(), CliError> {
    let config = SynthConfig {
        lambda: a.lambda,
        mu: a.mu,
        spacing_min: a.spacing_min,
        spacing_max: a.spacing_max,
        ..SynthConfig::default()
    };
    config.validate()?;
    let mut detect_seconds = None;
    let (centroids, image_path) = if is_image(&a.input) {
        let img = files::read_image(&a.input)?;
        let t = Instant::now();
        let found = detect(&img, &DetectParams::default())?;
        detect_seconds = Some(t.elapsed().as_secs_f64());
        (
            CentroidFile::from_set(&found.centroid_set()?),
            Some(a.image.clone().unwrap_or_else(|| a.input.clone())),
        )
    } else {
        (files::read_centroids(&a.input)?, a.image.clone())
    };
    let image_path = image_path.filter(|_| !a.no_attributes);
    let image = image_path.as_deref().map(files::read_image).transpose()?;
    let t = Instant::now();
    let (report, text) = synthesize_program(&centroids, image.as_ref(), &config)?;
    let synth_seconds = t.elapsed().as_secs_f64();
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let manifest = RunManifest {
        config,
        use_attributes: image.is_some(),
        centroids,
        image: image_path.map(|p| p.display().to_string()),
        program: text.clone(),
        costs: Costs {
            lattice: report.lattice_cost,
            attribute: report.attribute_cost,
        },
        timing: Timing {
            detect_seconds,
            synth_seconds,
        },
    };
    let manifest_path = a.manifest.clone().or_else(|| {
        a.output
            .as_deref()
            .map(|o| files::sibling(o, "manifest.json"))
    });
    if let Some(p) = manifest_path {
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        files::write_bytes(&p, json.as_bytes())?;
    }
    emit(a.output.as_deref(), &text)
}

pub fn cmd_replay(a: &ReplayArgs) -> Result<(), CliError> {
    let m = files::read_manifest(&a.manifest)?;
    let image = match (&m.image, m.use_attributes) {
        (Some(p), true) => Some(files::read_image(Path::new(p))?),
        (None, true) => {
            return Err(CliError::schema(
                &a.manifest,
                "use_attributes is set but no image is recorded",
            ))
        }
        _ => None,
    };
    let (_, text) = synthesize_program(&m.centroids, image.as_ref(), &m.config)?;
    if let Some(check) = &a.check {
        if files::read_text(check)? != text {
            return Err(CliError::ReplayMismatch {
                path: check.clone(),
            });
        }
    }
    emit(a.output.as_deref(), &text)
}

pub fn cmd_exec(a: &ExecArgs) -> Result<(), CliError> {
    let program = files::read_program(&a.program)?;
    let draws = execute(&program, a.bounds);
    let file = CentroidFile::from_draws(&draws, a.bounds.width, a.bounds.height);
    emit(a.output.as_deref(), &file.to_json())
}

pub fn cmd_inpaint(a: &InpaintArgs) -> Result<(), CliError> {
    let mut img = files::read_image(&a.image)?;
    let mask = files::read_mask(&a.mask)?;
    let program = files::read_program(&a.program)?;
    img.apply_holes(&mask)
        .map_err(|e| CliError::schema(&a.mask, e.to_string()))?;
    let out = inpaint(&img, &program)?;
    files::write_image(&a.output, &out)
}

pub fn cmd_extrapolate(a: &ExtrapolateArgs) -> Result<(), CliError> {
    let img = files::read_image(&a.image)?;
    let program = files::read_program(&a.program)?;
    let extension = match a.relax_condition {
        Some(k) => {
            if k >= program.conditions().len() {
                return Err(CliError::Usage(format!(
                    "--relax-condition {k}: the program has {} condition(s)",
                    program.conditions().len()
                )));
            }
            Extension::Relax {
                constraint: Constraint::Condition(k),
                delta: a.delta,
            }
        }
        None => Extension::Canvas {
            left: a.left,
            right: a.right,
            top: a.top,
            bottom: a.bottom,
        },
    };
    let result = extrapolate(&img, &program, extension)?;
    files::write_image(&a.output, &result.image)?;
    if let Some(p) = &a.program_out {
        files::write_bytes(p, dsl::print(&result.program).as_bytes())?;
    }
    Ok(())
}

pub fn cmd_edit(a: &EditArgs) -> Result<(), CliError> {
    let img = files::read_image(&a.image)?;
    let program = files::read_program(&a.program)?;
    let centroids = files::read_centroids(&a.centroids)?;
    if (centroids.width, centroids.height) != (img.width(), img.height()) {
        return Err(CliError::schema(
            &a.centroids,
            format!(
                "centroids are in a {}x{} frame but the image is {}x{}",
                centroids.width,
                centroids.height,
                img.width(),
                img.height()
            ),
        ));
    }
    if !a.gain.is_finite() {
        return Err(CliError::Usage(format!(
            "--gain must be finite, got {}",
            a.gain
        )));
    }
    let set = centroids.to_set()?;
    let edited = edit_regularity(&img, &program, &set, a.gain)?;
    files::write_image(&a.output, &edited.image)
}

pub fn cmd_render(a: &RenderArgs) -> Result<(), CliError> {
    let centroids = files::read_centroids(&a.centroids)?;
    let program = files::read_program(&a.program)?;
    emit(
        a.output.as_deref(),
        &render::render_svg(&centroids, &program),
    )
}

/// Caps the global worker pool from `RS_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RS_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!("RS_THREADS must be a positive integer, got {v:?}"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} worker threads: {e}")))
}
