use homchar::equation::{degree_split, parse_equation, print_equation, ExponentProfile};
use homchar::expr::int;
use homchar::fieldlab::{
    additivity_oracle, equation_oracle, nonzero_pairs, random_quads, random_ratfuncs, AdditivityVerdict, Bindings,
    EquationVerdict, FieldChoice, OracleField, QPoly, QuadExtElem, RatFunc,
};
use homchar::symmetrize::BlockPattern;
use homchar::verify::{check_equation, check_pattern_identity, classify_candidate, Candidate, CandidateClass};
use homchar::{Error, Result};
use serde_json::{json, Value};

use super::{provenance, provenance_text, to_value, Options, Report, EXIT_FAILED, EXIT_OK};

fn class_text(c: &CandidateClass) -> String {
    match c {
        CandidateClass::HomCombination => "combination of homomorphisms".into(),
        CandidateClass::PolynomialTimesHom { hom, log_degree } => {
            format!("phi{hom} times a log-derivative polynomial of degree {log_degree}")
        }
        CandidateClass::Mixed => "mixed".into(),
    }
}

/// Fixed points first (the ones worth reading in a report), then random ones.
fn sample_points<F: OracleField>(fixed: Vec<F>, random: Vec<F>, samples: usize) -> Vec<F> {
    fixed.into_iter().chain(random).take(samples.max(1)).collect()
}

fn sample_pairs<F: OracleField>(fixed: (F, F), points: &[F], samples: usize) -> Vec<(F, F)> {
    std::iter::once(fixed)
        .chain(nonzero_pairs(points))
        .take(samples.max(1))
        .collect()
}

struct OracleRun {
    field: String,
    equation: Vec<EquationVerdict>,
    additivity: Vec<(String, AdditivityVerdict)>,
}

fn run_oracle<F: OracleField>(
    field: String,
    groups: &[(ExponentProfile, Candidate)],
    cand: &Candidate,
    bindings: &Bindings,
    points: Vec<F>,
    pairs: Vec<(F, F)>,
) -> Result<OracleRun> {
    let mut equation = Vec::new();
    for (profile, sub) in groups {
        equation.push(equation_oracle(profile, sub, bindings, &points)?);
    }
    let mut additivity = Vec::new();
    for (name, row) in cand.names().iter().zip(cand.rows()) {
        additivity.push((name.clone(), additivity_oracle(row, bindings, &pairs)?));
    }
    Ok(OracleRun {
        field,
        equation,
        additivity,
    })
}

/// Symbolic residuals and exact oracle verdicts for a candidate file.
pub fn verify(equation: &str, candidates: &str, opts: &Options) -> Result<Report> {
    let terms = parse_equation(equation)?;
    let canonical = print_equation(&terms);
    let cand = Candidate::parse_file(candidates)?;
    let mut text = format!("equation: {canonical}\ncandidates:\n");
    for line in cand.to_string().lines() {
        text.push_str(&format!("  {line}\n"));
    }
    if cand.len() != terms.len() {
        return Err(Error::RowCountMismatch {
            expected: terms.len(),
            found: cand.len(),
        });
    }

    let mut groups = Vec::new();
    for g in degree_split(&terms) {
        if g.degenerate {
            return Err(Error::InvalidProfile(format!(
                "degree-1 part {} is not supported by verify",
                print_equation(&g.terms)
            )));
        }
        let profile = ExponentProfile::from_terms(&g.terms)?;
        let mut rows = Vec::new();
        for r in profile.rows() {
            let poly = cand
                .get(&r.name)
                .ok_or_else(|| Error::IncompleteAssignment(format!("no candidate for '{}'", r.name)))?;
            rows.push((r.name.clone(), poly.clone()));
        }
        groups.push((profile, Candidate::from_polys(rows)?));
    }

    let mut ok = true;
    let mut symbolic = Value::Null;
    if opts.mode.symbolic() {
        text.push_str("symbolic:\n");
        let mut parts = Vec::new();
        for (profile, sub) in &groups {
            let residual = check_equation(profile, sub)?;
            ok &= residual.is_zero();
            let n = profile.n();
            text.push_str(&format!("  N = {n}: equation residual {residual}\n"));
            let mut patterns = Vec::new();
            for (name, pattern) in [("dependence", BlockPattern::single(n)), ("pair", BlockPattern::pair(n))] {
                let r = check_pattern_identity(profile, sub, &pattern)?;
                text.push_str(&format!("    {name} {pattern} residual {r}\n"));
                patterns.push(json!({ "name": name, "pattern": pattern.to_string(), "residual": r.to_string(), "zero": r.is_zero() }));
            }
            parts.push(json!({
                "n": n,
                "residual": residual.to_string(),
                "zero": residual.is_zero(),
                "patterns": patterns,
            }));
        }
        let classes = classify_candidate(&cand);
        for c in &classes {
            text.push_str(&format!("  {}: {}\n", c.name, class_text(&c.class)));
        }
        symbolic = json!({ "groups": parts, "classes": to_value(&classes) });
    }

    let mut oracle = Value::Null;
    if opts.mode.oracle() {
        let bindings = Bindings::parse_map(&opts.bindings)?;
        let run = match bindings.field()? {
            FieldChoice::RationalFunctions => {
                let t = RatFunc::t();
                let fixed = vec![
                    t.clone(),
                    RatFunc::poly(QPoly::new(vec![int(1), int(1)])),
                    RatFunc::poly(QPoly::new(vec![int(-3), int(0), int(1)])),
                ];
                let points = sample_points(fixed, random_ratfuncs(opts.seed, opts.samples), opts.samples);
                let pairs = sample_pairs((t, RatFunc::constant(int(1))), &points, opts.samples);
                run_oracle("Q(t)".into(), &groups, &cand, &bindings, points, pairs)?
            }
            FieldChoice::Quadratic(d) => {
                let s = QuadExtElem::sqrt(d)?;
                let one = QuadExtElem::rational(int(1), d)?;
                let fixed = vec![s.clone(), s.add(&one)];
                let points = sample_points(fixed, random_quads(d, opts.seed, opts.samples)?, opts.samples);
                let pairs = sample_pairs((s, one), &points, opts.samples);
                run_oracle(format!("Q(sqrt({d}))"), &groups, &cand, &bindings, points, pairs)?
            }
        };
        text.push_str(&format!("oracle over {} (seed {}):\n", run.field, opts.seed));
        for ((profile, _), v) in groups.iter().zip(&run.equation) {
            ok &= v.holds;
            match &v.witness {
                None => text.push_str(&format!("  N = {}: equation holds on {} points\n", profile.n(), v.samples)),
                Some(w) => text.push_str(&format!(
                    "  N = {}: equation fails at {}, residual {}\n",
                    profile.n(),
                    w.point,
                    w.residual
                )),
            }
        }
        for (name, v) in &run.additivity {
            match &v.witness {
                None => text.push_str(&format!("  {name}: additive on {} pairs\n", v.samples)),
                Some(w) => text.push_str(&format!(
                    "  {name}: not additive, {name}(u+v) - {name}(u) - {name}(v) = {} at u = {}, v = {}\n",
                    w.defect, w.u, w.v
                )),
            }
        }
        let additivity: serde_json::Map<String, Value> =
            run.additivity.iter().map(|(n, v)| (n.clone(), to_value(v))).collect();
        oracle = json!({
            "field": run.field,
            "bindings": to_value(&bindings),
            "equation": to_value(&run.equation),
            "additivity": additivity,
        });
    }

    let mut sections = Vec::new();
    if opts.mode.symbolic() {
        sections.push("symbolic");
    }
    if opts.mode.oracle() {
        sections.push("oracle");
    }
    provenance_text(&sections, &mut text);
    text.push_str(if ok { "verdict: solution\n" } else { "verdict: not a solution\n" });
    let body = json!({
        "input": equation,
        "equation": canonical,
        "candidates": cand.names().iter().zip(cand.rows()).map(|(n, r)| json!({"name": n, "value": r.to_string()})).collect::<Vec<_>>(),
        "mode": to_value(&opts.mode),
        "seed": opts.seed,
        "samples": opts.samples,
        "symbolic": symbolic,
        "oracle": oracle,
        "solution": ok,
        "provenance": provenance(&sections),
    });
    Ok(Report::new("verify", body, text, if ok { EXIT_OK } else { EXIT_FAILED }))
}
