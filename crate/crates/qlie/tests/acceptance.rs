//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use qlie::{builtin, Report};
use qlie_core::{CheckEntry, CheckReport, EvaluationTables, Exact, QGroupInstance, QuantumLie, Status};

const BUILTINS: &[&str] = &[
    "classical:1",
    "classical:2",
    "classical:3",
    "graded:2:+-",
    "scalar1:1:-2:3:1",
    "scalar1:1/2:-3/2:1:2",
];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn inst(name: &str) -> QGroupInstance<Exact> {
    builtin(name).unwrap()
}

/// Every entry passes (skips allowed) with residual exactly zero.
fn exact(name: &str, rep: &CheckReport) -> Result<usize, String> {
    for e in &rep.entries {
        if e.status == Status::Fail || e.residual != 0.0 {
            return Err(format!("{name}: {} residual {} at {:?}", e.id, e.residual, e.counterexample));
        }
    }
    Ok(rep.entries.len())
}

fn one(e: CheckEntry) -> CheckReport {
    CheckReport { entries: vec![e] }
}

fn over_builtins(
    names: &[&str],
    f: impl Fn(&str, &EvaluationTables<Exact>) -> CheckReport,
) -> Verdict {
    let mut checks = 0;
    for name in names {
        let i = inst(name);
        let t = EvaluationTables::build(&i).map_err(|e| format!("{name}: {e}"))?;
        checks += exact(name, &f(name, &t))?;
    }
    Ok(format!("{checks} checks on {} instances", names.len()))
}

fn validator() -> Verdict {
    let mut n = 0;
    for name in ["classical:1", "classical:2", "classical:3", "graded:2:+-"] {
        n += exact(name, &inst(name).validate())?;
    }
    let bad = inst("classical:2").with_r_entry([0, 1, 0, 1], Exact::ratio(1, 1)).map_err(|e| e.to_string())?;
    match bad.check_yang_baxter().status {
        Status::Fail => Ok(format!("{n} conditions exact, perturbed R rejected")),
        s => Err(format!("perturbed R gave {s:?}")),
    }
}

fn hopf_axioms() -> Verdict {
    over_builtins(BUILTINS, |_, t| t.check_dual_hopf_axioms(3))
}

fn unit_values() -> Verdict {
    over_builtins(BUILTINS, |_, t| t.check_unit_values(4))
}

fn relations() -> Verdict {
    over_builtins(BUILTINS, |_, t| t.check_algebra_relations(2))
}

fn quantum_trace() -> Verdict {
    over_builtins(BUILTINS, |_, t| one(QuantumLie::new(t).check_quantum_trace(2)))
}

fn degenerate_limit() -> Verdict {
    over_builtins(&["classical:1", "classical:2", "classical:3"], |_, t| {
        let ql = QuantumLie::new(t);
        let mut rep = CheckReport::new();
        rep.push(ql.check_degenerate(3));
        rep.extend(ql.check_brackets(2));
        rep.extend(ql.check_differential(2, 2));
        rep.push(ql.check_twisted_leibniz(3));
        rep.push(ql.check_jacobi(2));
        if ql.structure_constants().sparse().is_empty() {
            rep.push(CheckEntry::new("structure_constants_vanish", true, 0.0));
        } else {
            rep.push(CheckEntry::new("structure_constants_vanish", false, 1.0));
        }
        rep
    })
}

fn entry<'a>(rep: &'a CheckReport, id: &str) -> Result<&'a CheckEntry, String> {
    rep.get(id).ok_or_else(|| format!("no {id} entry"))
}

fn nondegenerate() -> [&'static str; 3] {
    ["graded:2:+-", "scalar1:1:-2:3:1", "scalar1:1/2:-3/2:1:2"]
}

fn route_equivalence() -> Verdict {
    over_builtins(&nondegenerate(), |_, t| {
        let rep = QuantumLie::new(t).check_brackets(2);
        one(rep.get("bracket_adjoint_vs_sigma_conv").cloned().unwrap_or_else(|| CheckEntry::new("missing", false, 1.0)))
    })
}

fn closed_form() -> Verdict {
    let mut compared = 0;
    for name in nondegenerate() {
        let t = EvaluationTables::build(&inst(name)).unwrap();
        let rep = QuantumLie::new(&t).check_brackets(2);
        for id in ["bracket_closed_form_vs_adjoint", "bracket_translation_pair_low_degree"] {
            let e = entry(&rep, id)?;
            if e.status != Status::Pass || e.residual != 0.0 {
                return Err(format!("{name}: {id} residual {}", e.residual));
            }
        }
        let e = entry(&rep, "bracket_translation_pair_degree_two")?;
        if e.status == Status::Fail {
            return Err(format!("{name}: degree-two translation bracket mismatch"));
        }
        compared += 1;
    }
    Ok(format!("{compared} instances, degree-two translation brackets compared"))
}

fn leibniz() -> Verdict {
    over_builtins(BUILTINS, |_, t| one(QuantumLie::new(t).check_twisted_leibniz(3)))
}

fn jacobi() -> Verdict {
    over_builtins(&["graded:2:+-"], |_, t| one(QuantumLie::new(t).check_jacobi(2)))
}

fn ad_coassociativity() -> Verdict {
    over_builtins(BUILTINS, |_, t| one(QuantumLie::new(t).check_adjoint_coassociativity(2)))
}

fn cli_contract() -> Verdict {
    let fixture = |f: &str| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(f);
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_qlie")).args(args).output().map_err(|e| e.to_string())
    };
    for (file, want) in [("scalar_pass.json", 0), ("malformed.json", 1), ("lambda_minus_one.json", 1), ("scalar_fail.json", 2)] {
        let path = fixture(file);
        let o = run(&["validate", "--instance", path.to_str().unwrap()])?;
        if o.status.code() != Some(want) {
            return Err(format!("{file}: exit {:?}, expected {want}", o.status.code()));
        }
    }
    let o = run(&["all", "--instance", "scalar1:1:-2:3:1", "--format", "json"])?;
    let text = String::from_utf8_lossy(&o.stdout);
    let r = Report::from_json(&text).map_err(|e| e.to_string())?;
    if Report::from_json(&r.to_json()).ok() != Some(r) {
        return Err("report does not round-trip".into());
    }
    Ok("exit codes 0/1/1/2, report round-trips".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("validator exactness", validator),
        ("dual Hopf axioms", hopf_axioms),
        ("unit values", unit_values),
        ("algebra relations under pairing", relations),
        ("quantum trace", quantum_trace),
        ("classical degenerate limit", degenerate_limit),
        ("bracket route equivalence", route_equivalence),
        ("closed-form brackets", closed_form),
        ("twisted Leibniz rule", leibniz),
        ("quantum Jacobi identity", jacobi),
        ("coassociativity of Ad", ad_coassociativity),
        ("CLI contract", cli_contract),
    ];
    let start = Instant::now();
    let results: Vec<(Verdict, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let v = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (v, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (k, ((label, _), (v, secs))) in criteria.iter().zip(results).enumerate() {
        match v {
            Ok(detail) => println!("criterion {:>2} PASS  {label}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of 12 passed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
