use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ansatz_universe, coefficient_name, eval_numeric, expand_ansatz, rational_to_f64};
use crate::equation::ExponentProfile;
use crate::expr::{render_rational, Rational};
use crate::{Error, Result};

/// Number of random points used by [`check_family`].
pub const SAMPLE_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Bound on each block constraint residual.
    pub constraint: f64,
    /// Bound on the sampled substitution residual.
    pub substitution: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constraint: 1e-9,
            substitution: 1e-8,
        }
    }
}

/// `weight · unknown^q` inside a block constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintTerm {
    pub unknown: String,
    /// 1-based row of the profile.
    pub row: usize,
    pub q: u32,
    #[serde(serialize_with = "ser_rational")]
    pub weight: Rational,
}

impl ConstraintTerm {
    pub fn weight_f64(&self) -> f64 {
        rational_to_f64(&self.weight)
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockConstraint {
    /// 1-based index of the homomorphism carried by the block.
    pub block: usize,
    pub terms: Vec<ConstraintTerm>,
    pub text: String,
}

impl BlockConstraint {
    fn new(block: usize, terms: Vec<ConstraintTerm>) -> Self {
        let mut text = String::new();
        for (k, t) in terms.iter().enumerate() {
            let negative = t.weight.is_negative();
            let magnitude = t.weight.abs();
            match (k, negative) {
                (0, true) => text.push('-'),
                (0, false) => {}
                (_, true) => text.push_str(" - "),
                (_, false) => text.push_str(" + "),
            }
            if !magnitude.is_one() {
                text.push_str(&render_rational(&magnitude));
                text.push('*');
            }
            text.push_str(&t.unknown);
            if t.q != 1 {
                text.push_str(&format!("^{}", t.q));
            }
        }
        text.push_str(" = 0");
        BlockConstraint { block, terms, text }
    }

    pub fn residual(&self, values: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let v = values
                .get(&t.unknown)
                .ok_or_else(|| Error::IncompleteAssignment(t.unknown.clone()))?;
            acc += v.powu(t.q) * rational_to_f64(&t.weight);
        }
        Ok(acc)
    }
}

/// Rows split into blocks, one homomorphism per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionFamily {
    /// 1-based rows per block; row 1 appears in every block when shared.
    pub blocks: Vec<Vec<usize>>,
    pub shared_first: bool,
    /// Single block: every unknown is a multiple of one homomorphism.
    pub irreducible: bool,
    /// Rows alone in their block, which the constraint forces to vanish.
    pub zero_rows: Vec<usize>,
    pub constraints: Vec<BlockConstraint>,
}

impl PartitionFamily {
    fn new(profile: &ExponentProfile, blocks: Vec<Vec<usize>>, shared_first: bool) -> Self {
        let rows = profile.rows();
        let constraints: Vec<BlockConstraint> = blocks
            .iter()
            .enumerate()
            .map(|(j, block)| {
                let terms = block
                    .iter()
                    .map(|&i| ConstraintTerm {
                        unknown: family_unknown(i, j + 1, shared_first),
                        row: i,
                        q: rows[i - 1].q,
                        weight: rows[i - 1].weight.clone(),
                    })
                    .collect();
                BlockConstraint::new(j + 1, terms)
            })
            .collect();
        let zero_rows = blocks
            .iter()
            .filter(|b| b.len() == 1)
            .map(|b| b[0])
            .collect();
        PartitionFamily {
            irreducible: blocks.len() == 1,
            blocks,
            shared_first,
            zero_rows,
            constraints,
        }
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// All unknowns in first-appearance order.
    pub fn unknowns(&self) -> Vec<String> {
        self.constraints
            .iter()
            .flat_map(|c| c.terms.iter().map(|t| t.unknown.clone()))
            .fold(Vec::new(), |mut acc, u| {
                if !acc.contains(&u) {
                    acc.push(u);
                }
                acc
            })
    }

    /// `name = c*phiJ` per row, e.g. `["f = c1_1*phi1 + c1_2*phi2", "g = c2*phi1"]`.
    pub fn solution_lines(&self, names: &[String]) -> Vec<String> {
        names
            .iter()
            .enumerate()
            .map(|(idx, name)| {
                let i = idx + 1;
                let parts: Vec<String> = self
                    .blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.contains(&i))
                    .map(|(j, _)| format!("{}*phi{}", family_unknown(i, j + 1, self.shared_first), j + 1))
                    .collect();
                format!("{name} = {}", parts.join(" + "))
            })
            .collect()
    }

    /// Block sets rendered like `{1,2}|{3,4}`.
    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join("|")
    }
}

fn family_unknown(row: usize, block: usize, shared_first: bool) -> String {
    if shared_first && row == 1 {
        coefficient_name(1, block)
    } else {
        format!("c{row}")
    }
}

/// Set partitions of `items` as restricted growth strings, blocks sorted.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(pos: usize, items: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if pos == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[pos]);
            go(pos + 1, items, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[pos]]);
        go(pos + 1, items, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, items, &mut Vec::new(), &mut out);
    out
}

pub fn solution_families(profile: &ExponentProfile) -> Vec<PartitionFamily> {
    let n = profile.len();
    let max_blocks = n.saturating_sub(1).max(1);
    let all: Vec<usize> = (1..=n).collect();
    let mut keyed: Vec<(Vec<Vec<usize>>, bool)> = set_partitions(&all)
        .into_iter()
        .filter(|p| p.len() <= max_blocks)
        .map(|p| (p, false))
        .collect();
    if n >= 2 && profile.rows()[0].q == 1 {
        for p in set_partitions(&all[1..]) {
            if p.len() < 2 || p.len() > max_blocks {
                continue;
            }
            let shared = p
                .into_iter()
                .map(|mut b| {
                    b.insert(0, 1);
                    b
                })
                .collect();
            keyed.push((shared, true));
        }
    }
    for (p, _) in keyed.iter_mut() {
        p.sort();
    }
    keyed.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    keyed.dedup();
    keyed
        .into_iter()
        .map(|(blocks, shared)| PartitionFamily::new(profile, blocks, shared))
        .collect()
}

/// Solves `Σ cᵢ^{qᵢ} = 0` for the unknown at `free`, given the other values
/// in index order. Returns all `q` roots ordered by principal argument.
pub fn solve_block_constraint(q: &[u32], fixed: &[Complex64], free: usize) -> Result<Vec<Complex64>> {
    let weights = vec![1.0; q.len()];
    solve_weighted_block_constraint(&weights, q, fixed, free)
}

/// As [`solve_block_constraint`] for `Σ wᵢ·cᵢ^{qᵢ} = 0`; `w_free` must be nonzero.
pub fn solve_weighted_block_constraint(
    weights: &[f64],
    q: &[u32],
    fixed: &[Complex64],
    free: usize,
) -> Result<Vec<Complex64>> {
    if free >= q.len() || fixed.len() + 1 != q.len() || weights.len() != q.len() {
        return Err(Error::IncompleteAssignment(format!(
            "expected {} fixed values and a free index below {}",
            q.len().saturating_sub(1),
            q.len()
        )));
    }
    let qf = q[free];
    if qf == 0 || weights[free] == 0.0 {
        return Err(Error::Unsupported("the free term needs a positive exponent and a nonzero weight".into()));
    }
    let others = (0..q.len()).filter(|&i| i != free);
    let s: Complex64 = others.zip(fixed).map(|(i, v)| v.powu(q[i]) * weights[i]).sum();
    let target = -s / weights[free];
    if target.norm() == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); qf as usize]);
    }
    let r = target.norm().powf(1.0 / qf as f64);
    let theta = target.arg() / qf as f64;
    let mut roots: Vec<Complex64> = (0..qf)
        .map(|m| {
            let mut c = Complex64::from_polar(r, theta + 2.0 * std::f64::consts::PI * m as f64 / qf as f64);
            // one Newton step to polish
            let d = c.powu(qf - 1) * qf as f64;
            if d.norm() > 0.0 {
                c -= (c.powu(qf) - target) / d;
            }
            c
        })
        .collect();
    let key = |c: &Complex64| {
        let a = c.arg();
        if a <= -std::f64::consts::PI + 1e-12 {
            std::f64::consts::PI
        } else {
            a
        }
    };
    roots.sort_by(|a, b| key(a).total_cmp(&key(b)));
    Ok(roots)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub holds: bool,
    pub block_residuals: Vec<f64>,
    pub substitution_residual: f64,
    pub samples: usize,
}

/// Checks a numeric assignment of a family's unknowns: each block constraint
/// and the sampled substitution of the ansatz into the whole equation.
pub fn check_family(
    profile: &ExponentProfile,
    family: &PartitionFamily,
    values: &BTreeMap<String, Complex64>,
    seed: u64,
    tol: Tolerances,
) -> Result<FamilyCheck> {
    let block_residuals = family
        .constraints
        .iter()
        .map(|c| c.residual(values).map(|r| r.norm()))
        .collect::<Result<Vec<f64>>>()?;

    let k = family.k() as u32;
    let n = profile.len();
    let u = ansatz_universe(n, k);
    let expansion = expand_ansatz(profile, k)?;
    let mut unknowns = vec![Complex64::new(0.0, 0.0); u.unknowns().len()];
    for (j, block) in family.blocks.iter().enumerate() {
        for &i in block {
            let name = family_unknown(i, j + 1, family.shared_first);
            let pos = u
                .unknown_position(&coefficient_name(i, j + 1))
                .expect("ansatz universe holds every coefficient");
            unknowns[pos] = values[&name];
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLE_POINTS {
        let point: Vec<Complex64> = (0..k)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        worst = worst.max(eval_numeric(&expansion, &unknowns, &point).norm());
    }
    let holds = block_residuals.iter().all(|r| *r <= tol.constraint) && worst <= tol.substitution;
    Ok(FamilyCheck {
        holds,
        block_residuals,
        substitution_residual: worst,
        samples: SAMPLE_POINTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex2() -> ExponentProfile {
        ExponentProfile::from_pairs(&[(6, 2), (4, 3), (3, 4), (2, 6)]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assign(pairs: &[(&str, Complex64)]) -> BTreeMap<String, Complex64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| set_partitions(&(1..=n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn ex2_families() {
        let fams = solution_families(&ex2());
        // 1 + S(4,2) + S(4,3)
        assert_eq!(fams.len(), 14);
        assert!(fams[0].irreducible);
        assert_eq!(fams[0].constraints[0].text, "c1^2 + c2^3 + c3^4 + c4^6 = 0");
        let split = fams.iter().find(|f| f.label() == "{1,2}|{3,4}").unwrap();
        let texts: Vec<&str> = split.constraints.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, ["c1^2 + c2^3 = 0", "c3^4 + c4^6 = 0"]);
        for label in ["{1,3}|{2,4}", "{1,4}|{2,3}"] {
            assert!(fams.iter().any(|f| f.label() == label));
        }
        assert!(fams.iter().all(|f| !f.shared_first));
        let counts: Vec<usize> = fams.iter().map(|f| f.k()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn shared_first_row() {
        let profile = ExponentProfile::from_pairs(&[(6, 1), (3, 2), (2, 3)]).unwrap();
        let fams = solution_families(&profile);
        let shared: Vec<_> = fams.iter().filter(|f| f.shared_first).collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].label(), "{1,2}|{1,3}");
        assert_eq!(shared[0].constraints[0].text, "c1_1 + c2^2 = 0");
        let names = vec!["f".to_string(), "g".to_string(), "h".to_string()];
        assert_eq!(
            shared[0].solution_lines(&names),
            ["f = c1_1*phi1 + c1_2*phi2", "g = c2*phi1", "h = c3*phi2"]
        );
    }

    #[test]
    fn single_row_profile() {
        let profile = ExponentProfile::from_pairs(&[(3, 1)]).unwrap();
        let fams = solution_families(&profile);
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].constraints[0].text, "c1 = 0");
        assert_eq!(fams[0].zero_rows, vec![1]);
    }

    #[test]
    fn root_extraction() {
        let r = solve_block_constraint(&[2, 3], &[c(1.0, 0.0)], 0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12 && (r[1] - c(0.0, 1.0)).norm() < 1e-12, "{r:?}");
        assert_eq!(solve_block_constraint(&[2], &[], 0).unwrap(), vec![c(0.0, 0.0); 2]);
        let r = solve_block_constraint(&[2, 3, 4, 6], &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0).unwrap();
        for root in r {
            assert!((root * root + 1.0).norm() < 1e-9);
        }
        assert!(solve_block_constraint(&[2, 3], &[], 0).is_err());
        // -c1 + 2*c2^2 = 0 with c2 = 3
        let r = solve_weighted_block_constraint(&[-1.0, 2.0], &[1, 2], &[c(3.0, 0.0)], 0).unwrap();
        assert!((r[0] - c(18.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ex2_split_instance_holds() {
        let profile = ex2();
        let fams = solution_families(&profile);
        let split = fams.iter().find(|f| f.label() == "{1,2}|{3,4}").unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let v = assign(&[("c1", c(0.0, 1.0)), ("c2", c(1.0, 0.0)), ("c3", w), ("c4", c(1.0, 0.0))]);
        let check = check_family(&profile, split, &v, 7, Tolerances::default()).unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn ex2_single_block_checks() {
        let profile = ex2();
        let fam = &solution_families(&profile)[0];
        let zero = assign(&[("c1", c(0.0, 0.0)), ("c2", c(0.0, 0.0)), ("c3", c(0.0, 0.0)), ("c4", c(0.0, 0.0))]);
        assert!(check_family(&profile, fam, &zero, 1, Tolerances::default()).unwrap().holds);
        let ones = assign(&[("c1", c(1.0, 0.0)), ("c2", c(1.0, 0.0)), ("c3", c(1.0, 0.0)), ("c4", c(1.0, 0.0))]);
        let check = check_family(&profile, fam, &ones, 1, Tolerances::default()).unwrap();
        assert!(!check.holds);
        assert!((check.block_residuals[0] - 4.0).abs() < 1e-12);
        let roots = solve_block_constraint(&[2, 3, 4, 6], &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0).unwrap();
        let v = assign(&[("c1", roots[1]), ("c2", c(1.0, 0.0)), ("c3", c(0.0, 0.0)), ("c4", c(0.0, 0.0))]);
        assert!(check_family(&profile, fam, &v, 1, Tolerances::default()).unwrap().holds);
    }

    #[test]
    fn incomplete_assignment() {
        let profile = ex2();
        let fam = &solution_families(&profile)[0];
        let v = assign(&[("c1", c(0.0, 0.0))]);
        assert!(matches!(
            check_family(&profile, fam, &v, 1, Tolerances::default()),
            Err(Error::IncompleteAssignment(_))
        ));
    }
}
