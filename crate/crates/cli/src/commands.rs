use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use nichols_core::braided_space::YDRealization;
use nichols_core::hopf_core::{bosonize, solve_antipode, verify_hopf, AxiomReport, TruncatedHopf};
use nichols_core::nichols::{
    hilbert_series, nichols_truncated, pre_nichols_quotient, GradedQuotient,
};
use nichols_core::pairing::{
    graded_dual_pairing, lemma_transfer_check, nichols_dual_pairing, transport_action,
    verify_hopf_pairing,
};
use nichols_core::unrolled::{
    bosonization_action, check_biderivation, check_comodule_hopf_via_grading, check_module_algebra,
    gk_growth, nichols_action, pointed_criterion, smash_for_growth, unrolled_bosonization,
    BiderivationMode, HopfAction,
};
use serde_json::{json, Value};

use crate::spec::SpecDocument;

pub const REPORT_VERSION: u32 = 1;
pub const DEFAULT_DIMS_CAP: usize = 8;
pub const DEFAULT_VERIFY_CAP: usize = 4;

/// Result of one command: a JSON document, its table rendering, and whether
/// every requested check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub table: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("spec has no [{0}] section, which suite {1} needs")]
    MissingSection(&'static str, String),
    #[error("B(V) is not finite-dimensional within cap {0}")]
    NotFiniteWithinCap(usize),
    #[error("unknown suite {0}; expected hopf, biderivation, comodule, pairing or pointed")]
    UnknownSuite(String),
}

fn envelope(command: &str, cap: usize, body: Value, passed: bool) -> Value {
    let mut doc = json!({ "version": REPORT_VERSION, "command": command, "cap": cap });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc["passed"] = json!(passed);
    doc
}

pub fn quotient(spec: &SpecDocument, cap: usize) -> anyhow::Result<GradedQuotient> {
    Ok(match &spec.ideal {
        Some(gens) => pre_nichols_quotient(&spec.braiding, gens, cap)?.0,
        None => nichols_truncated(&spec.braiding, cap)?,
    })
}

fn axiom_table(rep: &AxiomReport) -> String {
    let mut s = String::new();
    for c in &rep.checks {
        if c.failures == 0 {
            let _ = writeln!(s, "  {}: pass ({} cases)", c.axiom, c.cases);
        } else {
            let _ = writeln!(
                s,
                "  {}: FAIL ({} of {} cases)",
                c.axiom, c.failures, c.cases
            );
        }
    }
    for v in &rep.violations {
        let _ = writeln!(
            s,
            "    witness [{}] {}: {} != {}",
            v.axiom, v.witness, v.lhs, v.rhs
        );
    }
    s
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn cmd_dims(spec: &SpecDocument, cap: usize) -> anyhow::Result<Outcome> {
    let gq = quotient(spec, cap)?;
    let hs = hilbert_series(&gq);
    let dims: Vec<String> = hs.dims.iter().map(ToString::to_string).collect();
    let mut table = dims.join(",");
    match hs.total_dim {
        Some(t) => {
            let _ = write!(table, " total={t}");
        }
        None => table.push_str(" (unknown beyond cap)"),
    }
    table.push('\n');
    let body = json!({
        "kind": if spec.ideal.is_some() { "pre-nichols" } else { "nichols" },
        "dims": hs.dims,
        "vanishes_from": hs.vanishes_from,
        "finite": hs.is_finite(),
        "total_dim": hs.total_dim,
    });
    Ok(Outcome {
        report: envelope("dims", cap, body, true),
        table,
        passed: true,
    })
}

struct Built {
    h: TruncatedHopf,
    unrolled: bool,
}

/// The bosonization, or the unrolled bosonization when a Lie algebra is given.
fn build_hopf(spec: &SpecDocument, cap: usize) -> anyhow::Result<Built> {
    let gq = quotient(spec, cap)?;
    let r = spec.realization()?;
    let lie = spec.lie_action(&r)?;
    let (h, unrolled) = match lie {
        Some(l) if l.dim() > 0 => (unrolled_bosonization(&gq, &r, &l, cap)?, true),
        _ => (solve_antipode(&bosonize(&gq, &r)?)?, false),
    };
    Ok(Built { h, unrolled })
}

fn host_action(
    spec: &SpecDocument,
    suite: &str,
    gq: &GradedQuotient,
    r: &YDRealization,
    h: &TruncatedHopf,
) -> anyhow::Result<HopfAction> {
    let lie = spec
        .lie_action(r)?
        .ok_or_else(|| CliError::MissingSection("lie", suite.to_string()))?;
    let central = spec.lie.as_ref().map_or(0, |l| l.central);
    Ok(bosonization_action(h, gq, r, &lie)?.with_central(h, central))
}

pub fn cmd_verify(spec: &SpecDocument, suite: &str, cap: usize) -> anyhow::Result<Outcome> {
    let (body, report) = match suite {
        "hopf" | "comodule" => {
            let b = build_hopf(spec, cap)?;
            let rep = if suite == "hopf" {
                verify_hopf(&b.h, Some(cap))
            } else {
                check_comodule_hopf_via_grading(&b.h)?
            };
            (
                json!({ "suite": suite, "dim": b.h.dim(), "unrolled": b.unrolled }),
                rep,
            )
        }
        "biderivation" | "pointed" => {
            if spec.lie.is_none() {
                return Err(CliError::MissingSection("lie", suite.to_string()).into());
            }
            let gq = quotient(spec, cap)?;
            let r = spec.realization()?;
            let h = solve_antipode(&bosonize(&gq, &r)?)?;
            let act = host_action(spec, suite, &gq, &r, &h)?;
            if suite == "biderivation" {
                let mut rep = check_module_algebra(&h, &act, Some(cap));
                rep.merge(check_biderivation(
                    &h,
                    &act,
                    Some(cap),
                    &BiderivationMode::All,
                ));
                (json!({ "suite": suite, "dim": h.dim() }), rep)
            } else {
                let pc = pointed_criterion(&h, &act, None)?;
                let body = json!({
                    "suite": suite,
                    "dim": h.dim(),
                    "skew_primitive_dims": pc.skew_primitive_dims,
                    "biderivation_passed": pc.biderivation.passed(),
                });
                (body, pc.stability)
            }
        }
        "pairing" => {
            let p = graded_dual_pairing(&spec.braiding, cap)?;
            let rep = verify_hopf_pairing(&p, cap);
            (
                json!({ "suite": suite, "ranks": p.nondegeneracy(cap) }),
                rep,
            )
        }
        other => return Err(CliError::UnknownSuite(other.to_string()).into()),
    };
    let passed = report.passed();
    let table = format!(
        "suite {suite} (cap {cap})\n{}verify: {}\n",
        axiom_table(&report),
        verdict(passed)
    );
    let mut body = body;
    body["report"] = serde_json::to_value(&report)?;
    Ok(Outcome {
        report: envelope("verify", cap, body, passed),
        table,
        passed,
    })
}

pub fn cmd_unroll(spec: &SpecDocument, cap: usize, out: Option<&Path>) -> anyhow::Result<Outcome> {
    let b = build_hopf(spec, cap)?;
    let rep = verify_hopf(&b.h, Some(cap));
    let passed = rep.passed();
    let mut levels = Vec::new();
    for d in 0..=cap {
        levels.push((0..b.h.dim()).filter(|&i| b.h.degree(i) <= d).count());
    }
    if let Some(path) = out {
        std::fs::write(path, b.h.to_json())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{} (dim {} within cap {cap})",
        if b.unrolled {
            "unrolled bosonization"
        } else {
            "bosonization"
        },
        b.h.dim()
    );
    let _ = writeln!(
        table,
        "filtration dims: {}",
        levels
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    table.push_str(&axiom_table(&rep));
    let _ = writeln!(table, "verify: {}", verdict(passed));
    let body = json!({
        "unrolled": b.unrolled,
        "dim": b.h.dim(),
        "filtration_dims": levels,
        "out": out.map(|p| p.display().to_string()),
        "report": rep,
    });
    Ok(Outcome {
        report: envelope("unroll", cap, body, passed),
        table,
        passed,
    })
}

pub fn cmd_gk(spec: &SpecDocument, cap: usize) -> anyhow::Result<Outcome> {
    let gq = quotient(spec, cap)?;
    if !gq.is_finite() {
        return Err(CliError::NotFiniteWithinCap(cap).into());
    }
    let r = spec.realization()?;
    let h = solve_antipode(&bosonize(&gq, &r)?)?;
    let act = match spec.lie {
        Some(_) => host_action(spec, "gk", &gq, &r, &h)?,
        None => HopfAction::zero(&h, nichols_core::braided_space::LieStructure::abelian(0)),
    };
    let smash = smash_for_growth(&h, &act, cap)?;
    let g = gk_growth(&smash)?;
    let mut table = String::from("n f(n)\n");
    for (n, f) in g.dims.iter().enumerate() {
        let _ = writeln!(table, "{n} {f}");
    }
    let fitted = g
        .fitted_degree
        .map_or("undetermined".to_string(), |d| d.to_string());
    let _ = writeln!(table, "fitted degree: {fitted}");
    let _ = writeln!(
        table,
        "closed form: f(n) = {} ({})",
        g.closed_form,
        if g.closed_form_holds {
            "holds"
        } else {
            "fails"
        }
    );
    let passed = g.closed_form_holds && g.fitted_degree == Some(g.lie_dim);
    Ok(Outcome {
        report: envelope("gk", cap, serde_json::to_value(&g)?, passed),
        table,
        passed,
    })
}

pub fn cmd_pair(spec: &SpecDocument, cap: usize) -> anyhow::Result<Outcome> {
    let p = graded_dual_pairing(&spec.braiding, cap)?;
    let rep = verify_hopf_pairing(&p, cap);
    let ranks = p.nondegeneracy(cap);
    let nichols = hilbert_series(&nichols_truncated(&spec.braiding, cap)?);
    let radical_ok = ranks
        .iter()
        .all(|d| nichols.dims.get(d.degree) == Some(&d.rank));
    let mut table = format!("pairing T(V) x T(V*) (cap {cap})\n{}", axiom_table(&rep));
    let _ = writeln!(
        table,
        "gram ranks: {}",
        ranks
            .iter()
            .map(|d| d.rank.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(
        table,
        "nichols dims: {}",
        nichols
            .dims
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let mut passed = rep.passed() && radical_ok;
    let mut body = json!({ "report": rep, "ranks": ranks, "nichols_dims": nichols.dims, "radical_is_kernel": radical_ok });

    if spec.lie.is_some() {
        let (gq, np) = nichols_dual_pairing(&spec.braiding, cap)?;
        if !gq.is_finite() {
            bail!(CliError::NotFiniteWithinCap(cap));
        }
        let r = spec.realization()?;
        let lie = spec.lie_action(&r)?.expect("lie section present");
        let left = nichols_action(&np.left, &gq, &lie)?;
        let right = transport_action(&np, &left)?;
        let v = lemma_transfer_check(&np, &left, &right, cap)?;
        let _ = writeln!(
            table,
            "module Hopf verdicts: left {}, right {} ({})",
            verdict(v.left_passed),
            verdict(v.right_passed),
            if v.agree() { "agree" } else { "DISAGREE" }
        );
        passed &= v.agree();
        body["lemma"] = serde_json::to_value(&v)?;
        body["lemma_agrees"] = json!(v.agree());
    }
    let _ = writeln!(table, "pair: {}", verdict(passed));
    Ok(Outcome {
        report: envelope("pair", cap, body, passed),
        table,
        passed,
    })
}

pub fn cmd_run_suites(
    spec: &SpecDocument,
    suites: &[String],
    cap: usize,
) -> anyhow::Result<Outcome> {
    let mut reports = Vec::new();
    let mut table = String::new();
    let mut passed = true;
    for s in suites {
        let o = cmd_verify(spec, s, cap)?;
        passed &= o.passed;
        table.push_str(&o.table);
        reports.push(o.report);
    }
    Ok(Outcome {
        report: envelope("verify", cap, json!({ "suites": reports }), passed),
        table,
        passed,
    })
}
