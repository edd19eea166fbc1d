use homchar::equation::ExponentProfile;
use homchar::symmetrize::{brute_force_pattern, evaluate_pattern, polarization_check, BlockPattern};
use homchar::Result;
use serde_json::json;

use super::{provenance, provenance_text, to_value, Report, EXIT_FAILED, EXIT_OK};

pub fn oracle_polarization(n: u32) -> Result<Report> {
    let proof = polarization_check(n)?;
    let mut text = format!("polarization of a symmetric {n}-additive map\n");
    for line in &proof.trace {
        text.push_str(&format!("  {line}\n"));
    }
    for (label, ok) in [
        ("n-th difference in one direction equals n! A(y,...,y)", proof.single_direction),
        ("mixed n-th difference equals n! A(y1,...,yn)", proof.mixed_directions),
        ("(n+1)-th mixed difference vanishes", proof.higher_order_vanishes),
        ("(n+1)-th difference in one direction vanishes", proof.higher_single_vanishes),
    ] {
        text.push_str(&format!("  {}: {label}\n", if ok { "ok" } else { "FAILED" }));
    }
    provenance_text(&["polarization"], &mut text);
    let verified = proof.verified();
    text.push_str(if verified { "verdict: verified\n" } else { "verdict: failed\n" });
    let body = json!({
        "oracle": "polarization",
        "proof": to_value(&proof),
        "verified": verified,
        "provenance": provenance(&["polarization"]),
    });
    Ok(Report::new("oracle", body, text, if verified { EXIT_OK } else { EXIT_FAILED }))
}

pub fn oracle_bruteforce(profile: &str, pattern: &str) -> Result<Report> {
    let pairs = ExponentProfile::parse_pairs(profile)?;
    let profile = ExponentProfile::from_pairs(&pairs)?;
    let pattern = BlockPattern::parse(pattern)?;
    let fast = evaluate_pattern(&profile, &pattern)?;
    let brute = brute_force_pattern(&profile, &pattern)?;
    let agree = fast == brute;
    let mut text = format!("profile {profile}, pattern {pattern}\n");
    text.push_str(&format!("  combinatorial: {fast}\n  permutations:  {brute}\n"));
    provenance_text(&["bruteforce"], &mut text);
    text.push_str(if agree { "verdict: agree\n" } else { "verdict: disagree\n" });
    let body = json!({
        "oracle": "bruteforce",
        "profile": to_value(&profile),
        "pattern": pattern.to_string(),
        "combinatorial": to_value(&fast),
        "permutations": to_value(&brute),
        "agree": agree,
        "provenance": provenance(&["bruteforce"]),
    });
    Ok(Report::new("oracle", body, text, if agree { EXIT_OK } else { EXIT_FAILED }))
}
