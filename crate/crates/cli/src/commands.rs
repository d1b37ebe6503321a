use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use normweingarten::io::{
    read_profile_csv, write_obj, write_profile_csv, IoError, Job, RunMetadata,
};
use normweingarten::profile_solver::{solve, Classification, ProfileBranch, SolverError};
use normweingarten::singular_quadrature::EndpointKind;
use normweingarten::surface_assembler::{
    assemble_fold, cap, extend_periodic, AssembledSurface, AssemblyError, FoldInput, GlueRecipe,
};
use normweingarten::verifier::{verify_branch, verify_table, VerifyError};

/// Why a command stopped; each kind has its own exit code.
#[derive(Debug)]
pub enum Failure {
    NoSurface(String),
    MalformedCsv(String),
    Other(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Other(_) => 1,
            Failure::NoSurface(_) => 2,
            Failure::MalformedCsv(_) => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NoSurface(reason) => write!(f, "no surface: {reason}"),
            Failure::MalformedCsv(msg) | Failure::Other(msg) => f.write_str(msg),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NoSurface { reason } => Failure::NoSurface(reason),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<AssemblyError> for Failure {
    fn from(e: AssemblyError) -> Self {
        match e {
            AssemblyError::Solver(e) => e.into(),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Solver(e) => e.into(),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::MalformedCsv { .. } => Failure::MalformedCsv(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

/// Six significant digits without trailing zeros.
fn short(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn kind_text(kind: EndpointKind) -> String {
    match kind {
        EndpointKind::Unbounded { decay } => format!("unbounded (decay {})", short(decay)),
        other => other.name().to_string(),
    }
}

fn classification_text(cls: &Classification) -> String {
    let mut out = String::new();
    for piece in &cls.pieces {
        let d = piece.domain;
        out += &format!(
            "{}, domain ({}, {})\n  ends: {} / {}\n",
            piece.tag.label(),
            short(d.lower),
            short(d.upper),
            kind_text(d.lower_kind),
            kind_text(d.upper_kind),
        );
    }
    for w in &cls.warnings {
        out += &format!("warning: {w}\n");
    }
    out
}

pub fn classify(job: &Job, as_json: bool) -> Result<ExitCode, Failure> {
    let cls = job.classify()?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&cls).map_err(|e| Failure::Other(e.to_string()))?);
    } else {
        print!("{}", classification_text(&cls));
    }
    Ok(ExitCode::SUCCESS)
}

fn fold_input(job: &Job, constant: f64) -> FoldInput {
    FoldInput {
        norm: job.request.norm,
        lambda: job.request.relation.lambda(),
        mu: job.request.relation.mu(),
        constant,
        height: job.request.height,
    }
}

fn capped(branches: &[ProfileBranch]) -> Result<AssembledSurface, Failure> {
    let b = branches
        .iter()
        .find(|b| {
            b.domain.lower_kind == EndpointKind::SimpleRoot
                || b.domain.upper_kind == EndpointKind::SimpleRoot
        })
        .ok_or_else(|| Failure::Other("no branch ends at a simple root".into()))?;
    Ok(cap(b)?)
}

/// Glues the job's recipe at `constant`, extending periodic profiles.
fn assemble(job: &Job, recipe: GlueRecipe, constant: f64) -> Result<AssembledSurface, Failure> {
    let surface = if recipe == GlueRecipe::Cap {
        let mut req = job.request;
        req.constant = constant;
        capped(&solve(&req, &job.options)?)?
    } else {
        assemble_fold(recipe, &fold_input(job, constant), &job.options)?
    };
    if surface.period.is_none() {
        return Ok(surface);
    }
    match extend_periodic(&surface) {
        Ok(s) => Ok(s),
        Err(e) => {
            log::warn!("kept one period: {e}");
            Ok(surface)
        }
    }
}

pub fn generate(job: &Job, piece: usize) -> Result<ExitCode, Failure> {
    let cls = job.classify()?;
    for w in &cls.warnings {
        log::warn!("{w}");
    }
    let (surface, meta) = match job.recipe {
        None => {
            let branches = solve(&job.request, &job.options)?;
            let chosen = branches
                .get(piece)
                .ok_or_else(|| Failure::Other(format!("piece {piece} of {}", branches.len())))?;
            let surface = AssembledSurface::single(chosen)?;
            (surface, RunMetadata::for_branches(&job.request, &branches, cls.warnings))
        }
        Some(recipe) => {
            let surface = assemble(job, recipe, job.request.constant)?;
            let meta = RunMetadata::for_surface(&job.request, &surface, cls.warnings);
            (surface, meta)
        }
    };
    let samples = &surface
        .pieces
        .get(piece)
        .ok_or_else(|| Failure::Other(format!("piece {piece} of {}", surface.pieces.len())))?
        .branch
        .samples;
    let out = &job.outputs;
    match &out.csv {
        Some(path) => write_profile_csv(create(path)?, samples)?,
        None => write_profile_csv(std::io::stdout().lock(), samples)?,
    }
    if let Some(path) = &out.obj {
        write_obj(create(path)?, &surface.mesh(job.segments))?;
    }
    if let Some(path) = &out.json {
        let mut w = create(path)?;
        writeln!(w, "{}", meta.to_json())?;
        w.flush()?;
    }
    log::info!(
        "{:?} from {} piece(s), {} junction(s)",
        surface.topology,
        surface.pieces.len(),
        surface.junctions.len()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn verify(job: &Job, piece: usize) -> Result<ExitCode, Failure> {
    job.classify()?;
    let report = match &job.profile {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            verify_table(&job.request, &read_profile_csv(file)?, job.epsilon)?
        }
        None => {
            let branches = solve(&job.request, &job.options)?;
            let b = branches
                .get(piece)
                .ok_or_else(|| Failure::Other(format!("piece {piece} of {}", branches.len())))?;
            verify_branch(b, job.epsilon)?
        }
    };
    let json = report.to_json();
    match &job.outputs.report {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => println!("{json}"),
    }
    if report.residual_max < job.tol {
        Ok(ExitCode::SUCCESS)
    } else {
        log::error!("residual {:e} is not below {:e}", report.residual_max, job.tol);
        Ok(ExitCode::FAILURE)
    }
}

/// Period for repeating profiles, pole height gap for axis-to-axis ones.
fn gap_of(surface: &AssembledSurface) -> Option<(&'static str, f64)> {
    if let Some(p) = surface.period {
        return Some(("period", p));
    }
    match surface.axis_points.as_slice() {
        [a, b] => Some(("pole-gap", b.u - a.u)),
        _ => None,
    }
}

#[derive(Clone)]
struct ScanRow {
    constant: f64,
    measure: Option<(&'static str, f64)>,
    note: String,
}

fn scan_at(job: &Job, recipe: GlueRecipe, c: f64) -> ScanRow {
    match assemble(job, recipe, c) {
        Ok(s) => {
            let flags: Vec<String> = s
                .flags
                .iter()
                .map(|f| serde_json::to_value(f).ok().and_then(|v| v["flag"].as_str().map(String::from)).unwrap_or_default())
                .collect();
            ScanRow {
                constant: c,
                measure: gap_of(&s),
                note: flags.join(" "),
            }
        }
        Err(e) => ScanRow {
            constant: c,
            measure: None,
            note: format!("skipped: {e}"),
        },
    }
}

/// Bisects a sign change of the measure between `lo` and `hi`.
fn refine(job: &Job, recipe: GlueRecipe, mut lo: ScanRow, mut hi: ScanRow) -> ScanRow {
    let value = |r: &ScanRow| r.measure.map_or(f64::NAN, |m| m.1);
    for _ in 0..60 {
        let mid = scan_at(job, recipe, 0.5 * (lo.constant + hi.constant));
        let v = value(&mid);
        if !v.is_finite() || v == 0.0 {
            return mid;
        }
        if v.signum() == value(&lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi.constant - lo.constant).abs() <= 1e-14 * hi.constant.abs().max(1.0) {
            break;
        }
    }
    if value(&lo).abs() <= value(&hi).abs() { lo } else { hi }
}

fn row_text(r: &ScanRow) -> String {
    let (name, v) = r.measure.map_or(("", String::new()), |(n, v)| (n, format!("{v:.13e}")));
    format!("{:.13e},{name},{v},{}", r.constant, r.note)
}

/// Tabulates the period (or pole gap) over a constant range, then bisects
/// each sign change. A zero is a numerical coincidence, reported as such.
pub fn scan_coincidence(job: &Job, from: f64, to: f64, steps: usize) -> Result<ExitCode, Failure> {
    let recipe = job
        .recipe
        .ok_or_else(|| Failure::Other("scan-coincidence needs --recipe".into()))?;
    if steps < 2 || from.partial_cmp(&to) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Other("need from < to and at least two steps".into()));
    }
    let rows: Vec<ScanRow> = (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .map(|c| scan_at(job, recipe, c))
        .collect();
    let mut out = std::io::stdout().lock();
    writeln!(out, "constant,measure,value,note")?;
    for r in &rows {
        writeln!(out, "{}", row_text(r))?;
    }
    for pair in rows.windows(2) {
        let [a, b] = [&pair[0], &pair[1]].map(|r| r.measure.map_or(f64::NAN, |m| m.1));
        if a.is_finite() && b.is_finite() && a.signum() != b.signum() {
            let mut r = refine(job, recipe, pair[0].clone(), pair[1].clone());
            r.note = format!("sign change, refined {}", r.note).trim_end().to_string();
            writeln!(out, "{}", row_text(&r))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_numbers() {
        assert_eq!(short(1.0), "1");
        assert_eq!(short(0.22540333075851662), "0.225403");
        assert_eq!(short(f64::INFINITY), "inf");
        assert_eq!(short(-0.0), "0");
    }
}
