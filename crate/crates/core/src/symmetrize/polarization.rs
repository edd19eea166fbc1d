//! Symbolic check of the polarization formula for a generic symmetric
//! `n`-additive form `A`: `Δⁿ_y A*(x) = n!·A(y,…,y)` and
//! `Δ_{y₁…y_{n+1}} A*(x) = 0`, where `A*(x) = A(x,…,x)`.
//!
//! Group elements are formal integer combinations of generators
//! (`x`, `y₁`, `y₂`, …); `A` is expanded multilinearly over ordered tuples
//! of generators and symmetry is applied by sorting each tuple.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{binomial, factorial};

pub const POLARIZATION_CAP: u32 = 4;

/// Values of `A` on sorted generator tuples, with integer coefficients.
type FormValue = BTreeMap<Vec<usize>, BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationProof {
    pub n: u32,
    /// `Δⁿ_y A*(x) = n!·A(y,…,y)`.
    pub single_direction: bool,
    /// `Δ_{y₁…yₙ} A*(x) = n!·A(y₁,…,yₙ)`.
    pub mixed_directions: bool,
    /// `Δ_{y₁…y_{n+1}} A*(x) = 0`.
    pub higher_order_vanishes: bool,
    /// `Δ^{n+1}_y A*(x) = 0`.
    pub higher_single_vanishes: bool,
    pub trace: Vec<String>,
}

impl PolarizationProof {
    pub fn verified(&self) -> bool {
        self.single_direction && self.mixed_directions && self.higher_order_vanishes && self.higher_single_vanishes
    }
}

fn add_into(acc: &mut FormValue, key: Vec<usize>, c: BigInt) {
    let entry = acc.entry(key.clone()).or_insert_with(BigInt::zero);
    *entry += c;
    if entry.is_zero() {
        acc.remove(&key);
    }
}

/// `A*(u)` for `u = Σ u[g]·e_g`.
fn trace_value(n: u32, u: &[i64]) -> FormValue {
    let gens = u.len();
    let mut out = FormValue::new();
    let mut tuple = vec![0usize; n as usize];
    loop {
        let coeff = tuple.iter().fold(BigInt::from(1), |acc, &g| acc * BigInt::from(u[g]));
        if !coeff.is_zero() {
            let mut key = tuple.clone();
            key.sort_unstable();
            add_into(&mut out, key, coeff);
        }
        let mut i = 0;
        loop {
            if i == tuple.len() {
                return out;
            }
            tuple[i] += 1;
            if tuple[i] < gens {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

/// `Δ_{d₁}…Δ_{d_m} A*(x)` at `x = e_0`:
/// `Σ_{S ⊆ {1..m}} (−1)^{m−|S|} A*(x + Σ_{s∈S} d_s)`.
fn difference(n: u32, gens: usize, dirs: &[Vec<i64>]) -> FormValue {
    let m = dirs.len();
    let mut out = FormValue::new();
    for mask in 0u32..(1 << m) {
        let mut point = vec![0i64; gens];
        point[0] = 1;
        for (s, d) in dirs.iter().enumerate() {
            if mask & (1 << s) != 0 {
                for g in 0..gens {
                    point[g] += d[g];
                }
            }
        }
        let sign = if (m as u32 - mask.count_ones()) % 2 == 0 { 1 } else { -1 };
        for (k, c) in trace_value(n, &point) {
            add_into(&mut out, k, c * sign);
        }
    }
    out
}

fn render_form(v: &FormValue, names: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (k, c)) in v.iter().enumerate() {
        let args: Vec<&str> = k.iter().map(|&g| names[g].as_str()).collect();
        let neg = c.is_negative();
        let mag = c.abs();
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if mag != BigInt::from(1) {
            s.push_str(&format!("{mag}*"));
        }
        s.push_str(&format!("A({})", args.join(",")));
    }
    s
}

/// `A*(x+k·y)` combination of the forward difference `Δⁿ_y`.
fn render_difference_sum(n: u32) -> String {
    let mut s = String::new();
    for k in (0..=n).rev() {
        let c = binomial(n, k);
        let neg = (n - k) % 2 == 1;
        if k != n {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if c != BigInt::from(1) {
            s.push_str(&format!("{c}*"));
        }
        match k {
            0 => s.push_str("A*(x)"),
            1 => s.push_str("A*(x+y)"),
            _ => s.push_str(&format!("A*(x+{k}*y)")),
        }
    }
    s
}

pub fn polarization_check(n: u32) -> Result<PolarizationProof> {
    if n == 0 {
        return Err(Error::Unsupported("polarization order must be at least 1".into()));
    }
    if n > POLARIZATION_CAP {
        return Err(Error::CapExceeded {
            what: "polarization order",
            value: n as u64,
            cap: POLARIZATION_CAP as u64,
        });
    }
    let nf = factorial(n);

    // generators: x, y
    let names_single = vec!["x".to_string(), "y".to_string()];
    let y = vec![0, 1];
    let single = difference(n, 2, &vec![y.clone(); n as usize]);
    let mut expect_single = FormValue::new();
    add_into(&mut expect_single, vec![1; n as usize], nf.clone());
    let single_next = difference(n, 2, &vec![y; n as usize + 1]);

    // generators: x, y1, …, y_{n+1}
    let gens = n as usize + 2;
    let mut names_mixed = vec!["x".to_string()];
    names_mixed.extend((1..gens).map(|k| format!("y{k}")));
    let unit = |g: usize| {
        let mut v = vec![0i64; gens];
        v[g] = 1;
        v
    };
    let mixed = difference(n, gens, &(1..=n as usize).map(unit).collect::<Vec<_>>());
    let mut expect_mixed = FormValue::new();
    add_into(&mut expect_mixed, (1..=n as usize).collect(), nf.clone());
    let higher = difference(n, gens, &(1..=n as usize + 1).map(unit).collect::<Vec<_>>());

    let ys: Vec<String> = (1..=n).map(|k| format!("y{k}")).collect();
    let ys_next: Vec<String> = (1..=n + 1).map(|k| format!("y{k}")).collect();
    let trace = vec![
        format!(
            "Δ^{n}_y A*(x) = {} = {}",
            render_difference_sum(n),
            render_form(&single, &names_single)
        ),
        format!(
            "Δ_{{{}}} A*(x) = {}",
            ys.join(","),
            render_form(&mixed, &names_mixed)
        ),
        format!(
            "Δ_{{{}}} A*(x) = {}",
            ys_next.join(","),
            render_form(&higher, &names_mixed)
        ),
        format!(
            "Δ^{}_y A*(x) = {}",
            n + 1,
            render_form(&single_next, &names_single)
        ),
    ];
    Ok(PolarizationProof {
        n,
        single_direction: single == expect_single,
        mixed_directions: mixed == expect_mixed,
        higher_order_vanishes: higher.is_empty(),
        higher_single_vanishes: single_next.is_empty(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_is_additivity() {
        let proof = polarization_check(1).unwrap();
        assert!(proof.verified());
        assert_eq!(proof.trace[0], "Δ^1_y A*(x) = A*(x+y) - A*(x) = A(y)");
    }

    /// A(x+2y,x+2y) − 2A(x+y,x+y) + A(x,x), expanded by hand:
    /// (A(x,x) + 4A(x,y) + 4A(y,y)) − 2(A(x,x) + 2A(x,y) + A(y,y)) + A(x,x)
    /// = 2A(y,y).
    #[test]
    fn second_order() {
        let proof = polarization_check(2).unwrap();
        assert!(proof.verified());
        assert!(proof.trace[0].ends_with("= 2*A(y,y)"), "{}", proof.trace[0]);
    }

    #[test]
    fn third_and_fourth_order() {
        for n in 3..=4 {
            let proof = polarization_check(n).unwrap();
            assert!(proof.higher_order_vanishes);
            assert!(proof.verified(), "{proof:?}");
        }
        assert!(polarization_check(3).unwrap().trace[2].ends_with("= 0"));
    }

    #[test]
    fn cap() {
        assert!(matches!(polarization_check(5), Err(Error::CapExceeded { .. })));
        assert!(polarization_check(0).is_err());
    }
}
