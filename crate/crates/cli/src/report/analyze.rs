use std::collections::BTreeMap;

use homchar::ansatz::{
    check_family, expand_ansatz, extract_constraints, solution_families, solve_weighted_block_constraint,
    PartitionFamily, Tolerances,
};
use homchar::equation::{
    check_condition_c, degree_split, parse_equation, print_equation, real_even_note, DegreeGroup, ExponentProfile,
};
use homchar::symmetrize::{eliminate_dependence, evaluate_pattern, AbstractIdentity, BlockPattern};
use homchar::Result;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::{provenance, provenance_text, to_value, Options, Report, EXIT_INVALID, EXIT_OK};

/// Families beyond this count are listed without a numeric instance.
const INSTANCE_LIMIT: usize = 64;

pub(crate) const REAL_NOTE: &str = "real mode: the only nonzero homomorphism R -> R is the identity, so with \
phi = identity every irreducible solution is f_i = c_i*x with real c_i satisfying the block constraint; \
such solutions are automatically continuous";

pub(crate) const EVEN_NOTE: &str = "every outer exponent is even: over the reals each summand is a square, \
so every real-valued solution vanishes identically";

pub(crate) fn fmt_complex(c: Complex64) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    format!("{re:.12}{}{:.12}i", if im < 0.0 { "-" } else { "+" }, im.abs())
}

struct NamedIdentity {
    name: &'static str,
    pattern: BlockPattern,
    identity: AbstractIdentity,
}

fn identities(profile: &ExponentProfile) -> Result<Vec<NamedIdentity>> {
    let n = profile.n();
    let mut out = Vec::new();
    for (name, pattern) in [
        ("unit", BlockPattern::unit(n)),
        ("dependence", BlockPattern::single(n)),
        ("pair", BlockPattern::pair(n)),
    ] {
        out.push(NamedIdentity {
            name,
            identity: evaluate_pattern(profile, &pattern)?,
            pattern,
        });
    }
    Ok(out)
}

/// One numeric point of the family: in each block the first unknown is solved
/// for with the others set to 1.
fn family_instance(profile: &ExponentProfile, fam: &PartitionFamily, opts: &Options) -> Result<Value> {
    let mut values: BTreeMap<String, Complex64> = BTreeMap::new();
    for c in &fam.constraints {
        let weights: Vec<f64> = c.terms.iter().map(|t| t.weight_f64()).collect();
        let q: Vec<u32> = c.terms.iter().map(|t| t.q).collect();
        let fixed = vec![Complex64::new(1.0, 0.0); q.len() - 1];
        let roots = solve_weighted_block_constraint(&weights, &q, &fixed, 0)?;
        values.insert(c.terms[0].unknown.clone(), roots[0]);
        for t in &c.terms[1..] {
            values.insert(t.unknown.clone(), Complex64::new(1.0, 0.0));
        }
    }
    let tol = Tolerances {
        constraint: opts.tolerance,
        substitution: opts.tolerance * 10.0,
    };
    let check = check_family(profile, fam, &values, opts.seed, tol)?;
    let shown: BTreeMap<String, String> = values.iter().map(|(k, v)| (k.clone(), fmt_complex(*v))).collect();
    Ok(json!({
        "values": shown,
        "holds": check.holds,
        "block_residuals": check.block_residuals,
        "substitution_residual": check.substitution_residual,
        "samples": check.samples,
    }))
}

fn analyze_group(group: &DegreeGroup, opts: &Options, text: &mut String) -> Result<(Value, bool)> {
    let canonical = print_equation(&group.terms);
    text.push_str(&format!("group N = {}: {canonical}\n", group.n));
    if group.degenerate {
        text.push_str("  degree 1: the equation reads f(x) = 0 and is not analyzed further\n");
        return Ok((
            json!({ "n": group.n, "equation": canonical, "degenerate": true }),
            true,
        ));
    }
    let pairs: Vec<(u32, u32)> = group.terms.iter().map(|t| (t.p, t.q)).collect();
    let condition = check_condition_c(&pairs);
    if !condition.valid {
        text.push_str("  condition (C) violated:\n");
        for v in &condition.violations {
            text.push_str(&format!("    {v}\n"));
        }
        return Ok((
            json!({ "n": group.n, "equation": canonical, "degenerate": false, "condition": to_value(&condition) }),
            false,
        ));
    }
    let profile = ExponentProfile::from_terms(&group.terms)?;
    text.push_str(&format!("  condition (C): satisfied, N = {}\n", profile.n()));

    let ids = identities(&profile)?;
    text.push_str("  identities:\n");
    let mut id_values = Vec::new();
    for id in &ids {
        text.push_str(&format!("    {} {}: {}\n", id.name, id.pattern, id.identity));
        id_values.push(json!({
            "name": id.name,
            "pattern": id.pattern.to_string(),
            "identity": to_value(&id.identity),
        }));
    }
    let target = &profile.rows()[0].name;
    let elimination = match eliminate_dependence(&ids[1].identity, &ids[2].identity, 0) {
        Ok(e) if !e.is_zero() => {
            text.push_str(&format!("    eliminated ({target}): {e}\n"));
            json!({ "target": target, "identity": to_value(&e) })
        }
        Ok(_) => {
            text.push_str(&format!("    eliminated ({target}): trivial\n"));
            json!({ "target": target, "identity": null })
        }
        Err(e) => {
            text.push_str(&format!("    elimination skipped: {e}\n"));
            json!({ "target": target, "identity": null, "reason": e.to_string() })
        }
    };

    let k = opts.k.unwrap_or_else(|| (profile.len() as u32).saturating_sub(1).max(1));
    let system = extract_constraints(&expand_ansatz(&profile, k)?, k);
    text.push_str(&format!("  constraints (k = {k}, {} monomials):\n", system.len()));
    for line in system.lines() {
        text.push_str(&format!("    {line}\n"));
    }

    let families = solution_families(&profile);
    let names = profile.names();
    let with_instances = families.len() <= INSTANCE_LIMIT;
    text.push_str(&format!("  solution families ({}):\n", families.len()));
    let mut fam_values = Vec::new();
    for fam in &families {
        let mut tags = Vec::new();
        if fam.irreducible {
            tags.push("irreducible".to_string());
        }
        if fam.shared_first {
            tags.push("shared first row".to_string());
        }
        if !fam.zero_rows.is_empty() {
            let zs: Vec<&str> = fam.zero_rows.iter().map(|&i| names[i - 1].as_str()).collect();
            tags.push(format!("forces {} = 0", zs.join(", ")));
        }
        let constraints: Vec<&str> = fam.constraints.iter().map(|c| c.text.as_str()).collect();
        let tag_text = if tags.is_empty() { String::new() } else { format!(" [{}]", tags.join("; ")) };
        text.push_str(&format!("    {}{}: {}\n", fam.label(), tag_text, constraints.join(", ")));
        let lines = fam.solution_lines(&names);
        text.push_str(&format!("      {}\n", lines.join("; ")));
        let mut v = to_value(fam);
        let obj = v.as_object_mut().expect("families serialize to objects");
        obj.insert("label".into(), json!(fam.label()));
        obj.insert("solutions".into(), json!(lines));
        if with_instances {
            let inst = family_instance(&profile, fam, opts)?;
            text.push_str(&format!(
                "      instance: {} (substitution residual {:.1e})\n",
                if inst["holds"].as_bool() == Some(true) { "holds" } else { "fails" },
                inst["substitution_residual"].as_f64().unwrap_or(f64::NAN)
            ));
            obj.insert("instance".into(), inst);
        }
        fam_values.push(v);
    }

    let mut notes = Vec::new();
    if real_even_note(&profile) {
        notes.push(EVEN_NOTE);
    }
    if opts.real {
        notes.push(REAL_NOTE);
    }
    if !notes.is_empty() {
        text.push_str("  notes:\n");
        for n in &notes {
            text.push_str(&format!("    {n}\n"));
        }
    }
    Ok((
        json!({
            "n": group.n,
            "equation": canonical,
            "degenerate": false,
            "condition": to_value(&condition),
            "profile": to_value(&profile),
            "identities": id_values,
            "elimination": elimination,
            "constraints": to_value(&system),
            "families": fam_values,
            "notes": notes,
        }),
        true,
    ))
}

/// Parse, split by degree, check condition (C), derive identities,
/// constraints and families for every homogeneous part.
pub fn analyze(equation: &str, opts: &Options) -> Result<Report> {
    let terms = parse_equation(equation)?;
    let canonical = print_equation(&terms);
    let mut text = format!("equation: {canonical}\n");
    let all_pairs: Vec<(u32, u32)> = terms.iter().map(|t| (t.p, t.q)).collect();
    let overall = check_condition_c(&all_pairs);
    let groups = degree_split(&terms);
    if groups.len() > 1 {
        let degrees: Vec<String> = groups.iter().map(|g| g.n.to_string()).collect();
        text.push_str(&format!(
            "degree split: {} independent parts of degree {}\n",
            groups.len(),
            degrees.join(", ")
        ));
    }
    let mut group_values = Vec::new();
    let mut valid = true;
    for g in &groups {
        let (v, ok) = analyze_group(g, opts, &mut text)?;
        valid &= ok;
        group_values.push(v);
    }
    let sections: &[&str] = if valid {
        &["condition", "degree_split", "identities", "elimination", "constraints", "families"]
    } else {
        &["condition", "degree_split"]
    };
    provenance_text(sections, &mut text);
    let exit = if valid { EXIT_OK } else { EXIT_INVALID };
    text.push_str(if valid {
        "status: ok\n"
    } else {
        "status: condition (C) violated\n"
    });
    let body = json!({
        "input": equation,
        "equation": canonical,
        "terms": to_value(&terms),
        "condition": to_value(&overall),
        "groups": group_values,
        "valid": valid,
        "real": opts.real,
        "seed": opts.seed,
        "tolerance": opts.tolerance,
        "provenance": provenance(sections),
    });
    Ok(Report::new("analyze", body, text, exit))
}
