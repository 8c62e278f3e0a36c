//! Library side of the `critiq` command: each subcommand is a function
//! returning its exit code, so tests can drive it without a process.

pub mod eval;
pub mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{anyhow, Context as _, Result};
use critiq_core::analyze::{detect_all, measure_all, Principle, Thresholds};
use critiq_core::annotate::{
    gen_awareness, gen_explanation, gen_solution, render_svg, Context, Mode,
};
use critiq_core::diff::diff_designs;
use critiq_core::metrics::FallbackMetrics;
use critiq_core::model::{parse_design, DesignDocument};
use critiq_service::{CritiqueService, JsonlLog, Server, SystemClock};

pub use report::Format;

/// No issues, or no changes.
pub const EXIT_CLEAN: u8 = 0;
/// Issues found, or designs differ.
pub const EXIT_FINDINGS: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

pub fn load_design(path: &Path) -> Result<DesignDocument> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_design(&text).with_context(|| format!("{} is not a valid design", path.display()))
}

fn parse_principle(s: Option<&str>) -> Result<Option<Principle>> {
    s.map(|s| Principle::from_str(s).map_err(|e| anyhow!(e)))
        .transpose()
}

fn parse_mode(s: Option<&str>) -> Result<Option<Mode>> {
    s.map(|s| Mode::from_str(s).map_err(|e| anyhow!(e)))
        .transpose()
}

pub fn analyze(
    file: &Path,
    principle: Option<&str>,
    mode: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8> {
    let principle = parse_principle(principle)?;
    let mode = parse_mode(mode)?;
    let doc = load_design(file)?;
    let result = detect_all(&doc, &FallbackMetrics);
    let principles: Vec<Principle> = principle.map_or(Principle::ALL.to_vec(), |p| vec![p]);
    let explanations = match mode {
        None => Vec::new(),
        Some(m) => {
            let extents = measure_all(&doc, &FallbackMetrics);
            let t = Thresholds::default();
            let ctx = Context::new(&doc, &result, &extents, &t);
            principles
                .iter()
                .map(|p| gen_explanation(*p, m, &ctx))
                .collect()
        }
    };
    let source = file.display().to_string();
    let analysis = report::Analysis {
        source: &source,
        result: &result,
        principles,
        explanations,
    };
    out.write_all(analysis.render(format).as_bytes())?;
    Ok(if analysis.has_issues() {
        EXIT_FINDINGS
    } else {
        EXIT_CLEAN
    })
}

/// SVG of the design, with one annotation layer when a principle is given.
pub fn render(file: &Path, principle: Option<&str>, mode: Option<&str>) -> Result<String> {
    let principle = parse_principle(principle)?;
    let mode = parse_mode(mode)?;
    if principle.is_none() && mode.is_some() {
        return Err(anyhow!("--mode needs --principle"));
    }
    let doc = load_design(file)?;
    let result = detect_all(&doc, &FallbackMetrics);
    let extents = measure_all(&doc, &FallbackMetrics);
    let t = Thresholds::default();
    let ctx = Context::new(&doc, &result, &extents, &t);
    let layer = principle.map(|p| match mode.unwrap_or(Mode::Awareness) {
        Mode::Awareness => gen_awareness(p, &ctx),
        Mode::Solution => gen_solution(p, &ctx),
    });
    Ok(render_svg(&doc, layer.as_ref(), &extents))
}

pub fn render_to(
    file: &Path,
    principle: Option<&str>,
    mode: Option<&str>,
    out: Option<&Path>,
) -> Result<u8> {
    let svg = render(file, principle, mode)?;
    match out {
        Some(path) => {
            fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => io::stdout().write_all(svg.as_bytes())?,
    }
    Ok(EXIT_CLEAN)
}

pub fn evaluate(
    corpus_dir: &Path,
    labels: &Path,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8> {
    let labels = eval::load_labels(labels)?;
    let report = eval::evaluate(corpus_dir, &labels)?;
    let text = match format {
        Format::Md => report.to_markdown(),
        Format::Json => report.to_json() + "\n",
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_CLEAN)
}

pub fn diff(a: &Path, b: &Path, out: &mut dyn Write) -> Result<u8> {
    let (da, db) = (load_design(a)?, load_design(b)?);
    let changes = diff_designs(&da, &db);
    write!(out, "{changes}")?;
    Ok(if changes.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_FINDINGS
    })
}

pub struct ServeOptions {
    pub host: String,
    pub port: u16,
    pub log_dir: PathBuf,
}

/// Serves until `shutdown` is set. A busy port is an error before anything runs.
pub fn serve(opts: &ServeOptions, shutdown: Arc<AtomicBool>) -> Result<u8> {
    let addr = format!("{}:{}", opts.host, opts.port);
    let server = Server::bind(&addr).with_context(|| format!("cannot listen on {addr}"))?;
    let log = JsonlLog::new(&opts.log_dir)
        .with_context(|| format!("cannot create log directory {}", opts.log_dir.display()))?;
    let service = Arc::new(CritiqueService::new(Arc::new(SystemClock), Arc::new(log)));
    log::info!("listening on {}", server.local_addr()?);
    server.run(service, Arc::clone(&shutdown))?;
    shutdown.store(true, Ordering::SeqCst);
    log::info!("stopped");
    Ok(EXIT_CLEAN)
}
