use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use serde::Serialize;

use embcanon::align::{component_word_set, greedy_align, retrain_rotation};
use embcanon::canon::{canonicalize, canonicalize_raw};
use embcanon::cluster::greedy_cluster;
use embcanon::embeddings::{load_word2vec_text, save_word2vec_text};
use embcanon::interp::{interp_all, restricted_interp};
use embcanon::linalg::random_orthogonal;
use embcanon::{AlignmentResult, Canonical, Model, WordMatrix, WordScore};

use crate::args::{
    AlignArgs, ComponentsArgs, Format, InputOpts, InterpArgs, RetrainArgs, RotateArgs, SpectrumArgs,
};
use crate::output::{json, md_cell, num, ser_sig9, Tsv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or arguments; exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Anything that goes wrong with the data itself; exit code 2.
    #[error(transparent)]
    Data(#[from] embcanon::Error),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn pick_format(requested: Option<Format>, allowed: &[Format], command: &str) -> Result<Format> {
    match requested {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(usage(format!("{command} does not support --format {f:?}").to_lowercase())),
    }
}

fn check_input(path: &Path, opts: &InputOpts) -> Result<()> {
    if opts.limit == 0 {
        return Err(usage("--limit must be at least 1"));
    }
    if !path.is_file() {
        return Err(usage(format!("{}: no such file", path.display())));
    }
    Ok(())
}

/// Load, truncate to `--limit` while reading, then normalize rows.
fn load(path: &Path, opts: &InputOpts) -> Result<Model> {
    let start = Instant::now();
    let model: Model = load_word2vec_text(path, Some(opts.limit), !opts.no_header)?;
    info!(
        "{}: {} words, dimension {} ({:.2?})",
        path.display(),
        model.len(),
        model.dim(),
        start.elapsed()
    );
    if opts.skip_normalize {
        warn!("rows left unnormalized; interpretability identities do not apply");
        Ok(model)
    } else {
        Ok(model.normalize_rows()?)
    }
}

fn rotate(model: &Model, opts: &InputOpts) -> Result<Canonical> {
    let start = Instant::now();
    let c = if opts.skip_normalize {
        canonicalize_raw(model)?
    } else {
        canonicalize(model)?
    };
    info!("canonicalized in {:.2?}", start.elapsed());
    if !c.degenerate_components().is_empty() {
        warn!(
            "components {:?} have tied or vanishing singular values; their axes are not unique",
            c.degenerate_components()
        );
    }
    Ok(c)
}

pub fn cmd_rotate(a: &RotateArgs) -> Result<()> {
    check_input(&a.input, &a.input_opts)?;
    let model = load(&a.input, &a.input_opts)?;
    let c = rotate(&model, &a.input_opts)?;
    save_word2vec_text(&c.as_model(), &a.output, !a.input_opts.no_header)?;
    info!("wrote {}", a.output.display());
    Ok(())
}

#[derive(Serialize)]
struct SpectrumRow {
    component: usize,
    #[serde(serialize_with = "ser_sig9")]
    sigma: f64,
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<()> {
    let format = pick_format(a.format, &[Format::Tsv, Format::Json], "spectrum")?;
    check_input(&a.input, &a.input_opts)?;
    let model = load(&a.input, &a.input_opts)?;
    let c = rotate(&model, &a.input_opts)?;
    let rows: Vec<SpectrumRow> = c
        .spectrum()
        .into_iter()
        .enumerate()
        .map(|(component, sigma)| SpectrumRow { component, sigma })
        .collect();
    match format {
        Format::Json => json(stdout(), &rows)?,
        _ => {
            let mut t = Tsv::new(stdout(), &["component", "sigma"])?;
            for r in &rows {
                t.row(&[r.component.to_string(), num(r.sigma)])?;
            }
            t.finish()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct InterpRow {
    space: &'static str,
    component: usize,
    #[serde(serialize_with = "ser_sig9")]
    interp: f64,
    #[serde(serialize_with = "ser_sig9")]
    normalized_full: f64,
    #[serde(serialize_with = "ser_sig9")]
    normalized_restricted: f64,
}

fn interp_rows<M: WordMatrix<f64> + ?Sized>(
    space: &'static str,
    words: &M,
    top_t: usize,
) -> Result<Vec<InterpRow>> {
    let report = interp_all(words.coords())?;
    let mut rows = Vec::with_capacity(report.per_component.len());
    for (k, (&interp, &normalized_full)) in
        report.per_component.iter().zip(&report.normalized).enumerate()
    {
        let set = component_word_set(words, k, top_t)?;
        let restricted = restricted_interp(words, k, &set.joined_indices())?;
        rows.push(InterpRow {
            space,
            component: k,
            interp,
            normalized_full,
            normalized_restricted: restricted.normalized,
        });
    }
    Ok(rows)
}

pub fn cmd_interp(a: &InterpArgs) -> Result<()> {
    let format = pick_format(a.format, &[Format::Tsv, Format::Json], "interp")?;
    if a.top_t == 0 {
        return Err(usage("--top-t must be at least 1"));
    }
    check_input(&a.input, &a.input_opts)?;
    let model = load(&a.input, &a.input_opts)?;
    let c = rotate(&model, &a.input_opts)?;

    let mut rows = interp_rows("source", &model, a.top_t)?;
    rows.extend(interp_rows("canonical", &c, a.top_t)?);

    if a.random_rotations > 0 {
        let base = interp_all(model.matrix())?.total;
        let mut worst = 0.0f64;
        for r in 0..a.random_rotations {
            let q = random_orthogonal::<f64>(model.dim(), a.seed.wrapping_add(r as u64));
            let total = interp_all(&model.matrix().matmul(&q)?)?.total;
            worst = worst.max((total - base).abs() / base.max(f64::MIN_POSITIVE));
        }
        eprintln!(
            "trace check: {} random rotations (seed {}), max relative change in total {:e}",
            a.random_rotations, a.seed, worst
        );
    }

    match format {
        Format::Json => json(stdout(), &rows)?,
        _ => {
            let mut t = Tsv::new(
                stdout(),
                &["space", "component", "interp", "normalized_full", "normalized_restricted"],
            )?;
            for r in &rows {
                t.row(&[
                    r.space.to_string(),
                    r.component.to_string(),
                    num(r.interp),
                    num(r.normalized_full),
                    num(r.normalized_restricted),
                ])?;
            }
            t.finish()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ComponentSide {
    clusters: Vec<Vec<String>>,
    cluster_count: usize,
}

#[derive(Serialize)]
struct ComponentReport {
    component: usize,
    #[serde(serialize_with = "ser_sig9")]
    sigma: f64,
    #[serde(serialize_with = "ser_sig9")]
    restricted_interp: f64,
    #[serde(serialize_with = "ser_sig9")]
    restricted_normalized: f64,
    negative: ComponentSide,
    positive: ComponentSide,
}

/// Clusters one half of a word set, visiting words by frequency rank.
fn cluster_side(c: &Canonical, words: &[WordScore<f64>], threshold: f64) -> Result<ComponentSide> {
    let mut idx: Vec<usize> = words.iter().map(|w| w.index).collect();
    idx.sort_unstable();
    let tokens: Vec<&str> = idx.iter().map(|&i| c.vocab().tokens()[i].as_str()).collect();
    let vectors: Vec<&[f64]> = idx.iter().map(|&i| c.rotated().row(i)).collect();
    let cs = greedy_cluster(&tokens, &vectors, threshold)?;
    Ok(ComponentSide {
        clusters: cs.clusters.iter().map(|cl| cl.members.clone()).collect(),
        cluster_count: cs.cluster_count(),
    })
}

pub fn cmd_components(a: &ComponentsArgs) -> Result<()> {
    let format = pick_format(a.format, &[Format::Markdown, Format::Json], "components")?;
    if a.table_t == 0 {
        return Err(usage("--table-t must be at least 1"));
    }
    if !(-1.0..=1.0).contains(&a.threshold) {
        return Err(usage(format!("--threshold {} is outside [-1, 1]", a.threshold)));
    }
    if a.component.is_empty() && a.components == 0 {
        return Err(usage("--components must be at least 1"));
    }
    check_input(&a.input, &a.input_opts)?;
    let model = load(&a.input, &a.input_opts)?;
    let d = model.dim();
    let selected: Vec<usize> = if a.component.is_empty() {
        (0..a.components.min(d)).collect()
    } else {
        if let Some(&k) = a.component.iter().find(|&&k| k >= d) {
            return Err(usage(format!(
                "--component {k} is out of range: the model has {d} components (0..{})",
                d - 1
            )));
        }
        a.component.clone()
    };
    let c = rotate(&model, &a.input_opts)?;

    let mut reports = Vec::with_capacity(selected.len());
    for k in selected {
        let set = component_word_set(&c, k, a.table_t)?;
        let r = restricted_interp(&c, k, &set.joined_indices())?;
        reports.push(ComponentReport {
            component: k,
            sigma: c.sigma()[k],
            restricted_interp: r.value,
            restricted_normalized: r.normalized,
            negative: cluster_side(&c, &set.negative, a.threshold)?,
            positive: cluster_side(&c, &set.positive, a.threshold)?,
        });
    }

    match format {
        Format::Json => json(stdout(), &reports)?,
        _ => write_markdown(stdout(), &reports)?,
    }
    Ok(())
}

fn write_markdown<W: Write>(mut out: W, reports: &[ComponentReport]) -> io::Result<()> {
    writeln!(
        out,
        "| component | sigma | restricted interp | normalized | side | clusters | words |"
    )?;
    writeln!(out, "|---:|---:|---:|---:|---|---:|---|")?;
    for r in reports {
        for (name, side) in [("negative", &r.negative), ("positive", &r.positive)] {
            let words = side
                .clusters
                .iter()
                .map(|cl| cl.iter().map(|w| md_cell(w)).collect::<Vec<_>>().join(", "))
                .collect::<Vec<_>>()
                .join("; ");
            writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                r.component,
                num(r.sigma),
                num(r.restricted_interp),
                num(r.restricted_normalized),
                name,
                side.cluster_count,
                words
            )?;
        }
    }
    out.flush()
}

#[derive(Serialize)]
struct AlignRow {
    space: &'static str,
    i: usize,
    j: usize,
    overlap: usize,
    shift: i64,
}

fn align_rows(space: &'static str, r: &AlignmentResult) -> Vec<AlignRow> {
    r.by_first_component()
        .into_iter()
        .map(|p| AlignRow {
            space,
            i: p.i,
            j: p.j,
            overlap: p.overlap,
            shift: p.shift(),
        })
        .collect()
}

pub fn cmd_align(a: &AlignArgs) -> Result<()> {
    let format = pick_format(a.format, &[Format::Tsv, Format::Json], "align")?;
    if a.top_t == 0 {
        return Err(usage("--top-t must be at least 1"));
    }
    check_input(&a.first, &a.input_opts)?;
    check_input(&a.second, &a.input_opts)?;
    let m1 = load(&a.first, &a.input_opts)?;
    let m2 = load(&a.second, &a.input_opts)?;
    let source = greedy_align(&m1, &m2, a.top_t)?;
    let c1 = rotate(&m1, &a.input_opts)?;
    let c2 = rotate(&m2, &a.input_opts)?;
    let canonical = greedy_align(&c1, &c2, a.top_t)?;

    let mut rows = align_rows("source", &source);
    rows.extend(align_rows("canonical", &canonical));
    match format {
        Format::Json => json(stdout(), &rows)?,
        _ => {
            let mut t = Tsv::new(stdout(), &["space", "i", "j", "overlap", "shift"])?;
            for r in &rows {
                t.row(&[
                    r.space.to_string(),
                    r.i.to_string(),
                    r.j.to_string(),
                    r.overlap.to_string(),
                    r.shift.to_string(),
                ])?;
            }
            t.finish()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RetrainReport {
    #[serde(serialize_with = "ser_sig9")]
    orthogonality: f64,
    #[serde(serialize_with = "ser_sig9")]
    relative_residual: f64,
    shared_words: usize,
}

pub fn cmd_retrain_check(a: &RetrainArgs) -> Result<()> {
    let format = pick_format(a.format, &[Format::Json, Format::Tsv], "retrain-check")?;
    check_input(&a.first, &a.input_opts)?;
    check_input(&a.second, &a.input_opts)?;
    let m1 = load(&a.first, &a.input_opts)?;
    let m2 = load(&a.second, &a.input_opts)?;
    let check = retrain_rotation(&m1, &m2)?;
    let report = RetrainReport {
        orthogonality: check.orthogonality,
        relative_residual: check.relative_residual,
        shared_words: check.shared_words,
    };
    match format {
        Format::Tsv => {
            let mut t = Tsv::new(stdout(), &["metric", "value"])?;
            t.row(&["orthogonality".into(), num(report.orthogonality)])?;
            t.row(&["relative_residual".into(), num(report.relative_residual)])?;
            t.row(&["shared_words".into(), report.shared_words.to_string()])?;
            t.finish()?;
        }
        _ => json(stdout(), &report)?,
    }
    Ok(())
}
