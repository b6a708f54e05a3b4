//! Command dispatch.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use qlie_core::{
    CheckEntry, CheckReport, EvaluationTables, FormIndex, QGroupInstance, QuantumLie, Scalar,
};
use serde::{Deserialize, Serialize};

use crate::instance_file::{self, LoadError, Loaded};
use crate::report::{InstanceMeta, Report, Section};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Tables,
    Sigma,
    Brackets,
    Jacobi,
    Leibniz,
    Relations,
    All,
    Emit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Tables => "tables",
            Command::Sigma => "sigma",
            Command::Brackets => "brackets",
            Command::Jacobi => "jacobi",
            Command::Leibniz => "leibniz",
            Command::Relations => "relations",
            Command::All => "all",
            Command::Emit => "emit",
        }
    }

    fn sections(self) -> &'static [Suite] {
        use Suite::*;
        match self {
            Command::Validate | Command::Emit => &[Validate],
            Command::Tables => &[Validate, Tables],
            Command::Sigma => &[Validate, Sigma],
            Command::Brackets => &[Validate, Brackets],
            Command::Jacobi => &[Validate, Jacobi],
            Command::Leibniz => &[Validate, Leibniz],
            Command::Relations => &[Validate, Relations],
            Command::All => &[Validate, Tables, Relations, Sigma, Brackets, Leibniz, Jacobi],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Validate,
    Tables,
    Relations,
    Sigma,
    Brackets,
    Leibniz,
    Jacobi,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Validate => "validate",
            Suite::Tables => "tables",
            Suite::Relations => "relations",
            Suite::Sigma => "sigma",
            Suite::Brackets => "brackets",
            Suite::Leibniz => "leibniz",
            Suite::Jacobi => "jacobi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub instance: String,
    pub max_len: usize,
    pub pairing_order: usize,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub strict_extended: bool,
    pub out: Option<std::path::PathBuf>,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(command: Command, instance: impl Into<String>) -> Self {
        RunConfig {
            command,
            instance: instance.into(),
            max_len: 2,
            pairing_order: 2,
            tolerance: None,
            format: Format::Text,
            strict_extended: false,
            out: None,
            threads: threads_from_env(),
        }
    }
}

/// `QLIE_THREADS` if set and positive, otherwise the available parallelism.
pub fn threads_from_env() -> usize {
    std::env::var("QLIE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&k: &usize| k > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |k| k.get()))
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("invalid option: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

pub struct RunOutput {
    pub report: Report,
    /// Structure-constant file for `emit`.
    pub emitted: Option<StructureFile>,
}

pub const STRICT_EXTENDED_WARNING: &str =
    "--strict-extended adds no checks: the two damaged translation conditions have no reliable reading";

pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    if cfg.max_len == 0 || cfg.pairing_order == 0 {
        return Err(RunError::Config("--max-len and --pairing-order must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    if cfg.strict_extended {
        warnings.push(STRICT_EXTENDED_WARNING.to_string());
    }
    let loaded = match instance_file::load(&cfg.instance)? {
        Loaded::Exact(i) => {
            if cfg.tolerance.is_some() {
                warnings.push("--tol ignored: instance is exact".into());
            }
            Loaded::Exact(i)
        }
        Loaded::Float(i) => Loaded::Float(match cfg.tolerance {
            Some(t) => i.with_tolerance(t),
            None => i,
        }),
    };
    let (report, emitted) = match &loaded {
        Loaded::Exact(i) => execute(cfg, i, warnings),
        Loaded::Float(i) => execute(cfg, i, warnings),
    };
    if let (Some(path), Some(file)) = (&cfg.out, &emitted) {
        std::fs::write(path, file.to_json())
            .map_err(|source| RunError::Write { path: path.display().to_string(), source })?;
    }
    Ok(RunOutput { report, emitted })
}

fn meta<S: Scalar>(cfg: &RunConfig, inst: &QGroupInstance<S>) -> InstanceMeta {
    InstanceMeta {
        source: cfg.instance.clone(),
        name: inst.name().to_string(),
        n: inst.n(),
        dim: FormIndex::count(inst.n()),
        arithmetic: if S::is_exact() { "exact" } else { "float" }.into(),
        tolerance: (!S::is_exact()).then(|| inst.tolerance()),
    }
}

fn execute<S: Scalar>(
    cfg: &RunConfig,
    inst: &QGroupInstance<S>,
    warnings: Vec<String>,
) -> (Report, Option<StructureFile>) {
    let suites = cfg.command.sections();
    let mut sections = run_parallel(suites, cfg.threads, |s| run_suite(*s, inst, cfg));
    let mut emitted = None;
    if cfg.command == Command::Emit && sections.iter().all(Section::passed) {
        let start = Instant::now();
        let mut rep = CheckReport::new();
        match EvaluationTables::build(inst) {
            Ok(t) => {
                emitted = Some(StructureFile::build(&meta(cfg, inst), &QuantumLie::new(&t)));
                rep.push(CheckEntry::new("structure_constants_emitted", true, 0.0));
            }
            Err(e) => rep.push(CheckEntry::new("tables_build", false, f64::INFINITY).with_note(e.to_string())),
        }
        sections.push(Section::new("emit", rep, elapsed_us(start)));
    }
    let passed = sections.iter().all(Section::passed);
    let report = Report {
        instance: meta(cfg, inst),
        command: cfg.command.name().into(),
        max_len: cfg.max_len,
        pairing_order: cfg.pairing_order,
        strict_extended: cfg.strict_extended,
        sections,
        warnings,
        passed,
    };
    (report, emitted)
}

fn elapsed_us(start: Instant) -> u64 {
    start.elapsed().as_micros().try_into().unwrap_or(u64::MAX)
}

/// Runs `f` over `items` on up to `threads` workers; results keep input order.
fn run_parallel<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = threads.clamp(1, items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new(items.iter().map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(k) else { break };
                let r = f(item);
                slots.lock().expect("worker panicked")[k] = Some(r);
            });
        }
    });
    slots.into_inner().expect("worker panicked").into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn run_suite<S: Scalar>(suite: Suite, inst: &QGroupInstance<S>, cfg: &RunConfig) -> Section {
    let start = Instant::now();
    let rep = suite_report(suite, inst, cfg);
    Section::new(suite.name(), rep, elapsed_us(start))
}

fn suite_report<S: Scalar>(suite: Suite, inst: &QGroupInstance<S>, cfg: &RunConfig) -> CheckReport {
    if suite == Suite::Validate {
        return inst.validate();
    }
    // tables are not shared across threads; each suite builds its own
    let tables = match EvaluationTables::build(inst) {
        Ok(t) => t,
        Err(e) => {
            let mut rep = CheckReport::new();
            rep.push(CheckEntry::new("tables_build", false, f64::INFINITY).with_note(e.to_string()));
            return rep;
        }
    };
    let (len, order) = (cfg.max_len, cfg.pairing_order);
    let mut rep = CheckReport::new();
    match suite {
        Suite::Validate => unreachable!(),
        Suite::Tables => {
            rep.extend(tables.check_dual_hopf_axioms(len));
            rep.extend(tables.check_unit_values(len.max(4)));
            rep.push(tables.check_composite_factorization(3));
        }
        Suite::Relations => rep.extend(tables.check_algebra_relations(order)),
        Suite::Sigma => {
            let ql = QuantumLie::new(&tables);
            rep.push(ql.check_quantum_trace(order));
            rep.extend(ql.check_generators(len));
            rep.extend(ql.check_sigma());
        }
        Suite::Brackets => {
            let ql = QuantumLie::new(&tables);
            rep.extend(ql.check_brackets(len));
            rep.extend(ql.check_l_coproduct(len));
            rep.extend(ql.check_differential(len, order));
        }
        Suite::Leibniz => rep.push(QuantumLie::new(&tables).check_twisted_leibniz(len.max(2))),
        Suite::Jacobi => {
            let ql = QuantumLie::new(&tables);
            rep.push(ql.check_adjoint_coassociativity(len));
            rep.push(ql.check_jacobi(len));
        }
    }
    rep
}

/// σ and the sparse structure constants of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFile {
    pub instance: InstanceMeta,
    pub n: usize,
    pub dim: usize,
    /// Form names in index order; `Theta[a,b]` at `a·n + b`, `Pi[a]` at `n² + a`.
    pub forms: Vec<String>,
    /// Flat `σ[A][B][C][E]`, row-major, `dim⁴` entries.
    pub sigma: Vec<String>,
    /// `(A, B)` input blocks of σ whose values rest on a reconstructed formula.
    pub sigma_reconstructed_blocks: Vec<[String; 2]>,
    /// Nonzero `[A, B, G, value]` with `[χ_A, χ_B] = Σ_G value·χ_G`.
    pub structure_constants: Vec<(usize, usize, usize, String)>,
}

impl StructureFile {
    pub fn build<S: Scalar>(meta: &InstanceMeta, ql: &QuantumLie<'_, S>) -> Self {
        let n = ql.tables().n();
        let sigma = ql.sigma();
        let forms: Vec<FormIndex> = FormIndex::all(n).collect();
        let mut recon = Vec::new();
        for a in &forms {
            for b in &forms {
                if sigma.is_reconstructed(a.index(n), b.index(n)) {
                    recon.push([a.to_string(), b.to_string()]);
                }
            }
        }
        StructureFile {
            instance: meta.clone(),
            n,
            dim: forms.len(),
            forms: forms.iter().map(ToString::to_string).collect(),
            sigma: sigma.data().iter().map(ToString::to_string).collect(),
            sigma_reconstructed_blocks: recon,
            structure_constants: ql
                .structure_constants()
                .sparse()
                .into_iter()
                .map(|(a, b, g, v)| (a.index(n), b.index(n), g.index(n), v.to_string()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure file serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
