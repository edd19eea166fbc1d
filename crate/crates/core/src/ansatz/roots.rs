use num_complex::Complex64;

const MAX_ITER: usize = 500;

/// All roots of `Σ coeffs[k]·z^k` (Durand-Kerner), sorted by argument then modulus.
/// Trailing zero coefficients are ignored; a constant polynomial has no roots.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = match coeffs.iter().rposition(|c| c.norm() != 0.0) {
        Some(d) => d,
        None => return Vec::new(),
    };
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs[..=deg].iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..MAX_ITER {
        let mut shift: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 {
            break;
        }
    }
    z.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    z
}

/// Nonzero roots of `Σ sᵢ·c^{qᵢ} = 0`: the common factor `c^{min q}` is removed
/// before solving.
pub fn nonzero_roots(terms: &[(Complex64, u32)]) -> Vec<Complex64> {
    let Some(qmin) = terms.iter().map(|t| t.1).min() else {
        return Vec::new();
    };
    let qmax = terms.iter().map(|t| t.1).max().unwrap_or(qmin);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (qmax - qmin + 1) as usize];
    for (s, q) in terms {
        coeffs[(q - qmin) as usize] += s;
    }
    polynomial_roots(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn roots_of_unity() {
        let r = polynomial_roots(&[c(-1.0), c(0.0), c(0.0), c(1.0)]);
        assert_eq!(r.len(), 3);
        for z in &r {
            assert!((z.powu(3) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn scaled_terms() {
        // c^2 + c^3 = 0 has the single nonzero root -1
        let r = nonzero_roots(&[(c(1.0), 2), (c(1.0), 3)]);
        assert_eq!(r.len(), 1);
        assert!((r[0] + 1.0).norm() < 1e-12);
        // 2c + 3c^2 - c^4
        let r = nonzero_roots(&[(c(2.0), 1), (c(3.0), 2), (c(-1.0), 4)]);
        assert_eq!(r.len(), 3);
        for z in r {
            assert!((z * 2.0 + z * z * 3.0 - z.powu(4)).norm() < 1e-9);
        }
        assert!(nonzero_roots(&[(c(1.0), 5)]).is_empty());
    }
}
