//! Polynomial root finding via the Durand-Kerner (Weierstrass) iteration.

use crate::error::{ForecastError, Result};
use num_complex::Complex64;

/// All complex roots of the polynomial `c[0] + c[1]·z + … + c[n]·z^n`.
///
/// Coefficients are in ascending order of power. Leading (highest-power)
/// zero coefficients are ignored; a constant polynomial has no roots and
/// returns an empty vector. The iteration is deterministic: it always starts
/// from powers of `0.4 + 0.9i`, which is not a root of unity and in practice
/// separates the iterates for every polynomial arising here.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    // Trim trailing zeros to find the true degree.
    let mut degree = coeffs.len();
    while degree > 0 && coeffs[degree - 1] == 0.0 {
        degree -= 1;
    }
    if degree <= 1 {
        return Ok(Vec::new());
    }
    let degree = degree - 1;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(ForecastError::InvalidInput(
            "polynomial coefficients must be finite".into(),
        ));
    }

    // Normalize to a monic polynomial.
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs[..=degree]
        .iter()
        .map(|&c| Complex64::new(c / lead, 0.0))
        .collect();

    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };

    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32 + 1)).collect();

    for _ in 0..1000 {
        let mut max_step = 0.0_f64;
        for k in 0..degree {
            let zk = roots[k];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != k {
                    denom *= zk - zj;
                }
            }
            if denom.norm() == 0.0 {
                // Perturb coincident iterates and keep going.
                roots[k] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(zk) / denom;
            roots[k] = zk - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 {
            break;
        }
    }

    if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(ForecastError::OptimFailure(
            "root iteration produced non-finite values".into(),
        ));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_real_parts(mut roots: Vec<Complex64>) -> Vec<f64> {
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        roots.iter().map(|r| r.re).collect()
    }

    #[test]
    fn quadratic_with_integer_roots() {
        // z² − 3z + 2 = (z−1)(z−2).
        let roots = polynomial_roots(&[2.0, -3.0, 1.0]).unwrap();
        let re = sorted_real_parts(roots.clone());
        assert!((re[0] - 1.0).abs() < 1e-10);
        assert!((re[1] - 2.0).abs() < 1e-10);
        assert!(roots.iter().all(|r| r.im.abs() < 1e-10));
    }

    #[test]
    fn linear_factor_root_is_reciprocal_of_coefficient() {
        // 1 − 0.5 z has its root at z = 2.
        let roots = polynomial_roots(&[1.0, -0.5]).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].re - 2.0).abs() < 1e-12);
        assert!(roots[0].im.abs() < 1e-12);
    }

    #[test]
    fn cube_roots_of_unity_have_unit_modulus() {
        let roots = polynomial_roots(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degree_six_distinct_integer_roots() {
        // Expand (z−1)(z−2)…(z−6) by convolution.
        let mut coeffs = vec![1.0];
        for root in 1..=6 {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i] += c * (-(root as f64));
                next[i + 1] += c;
            }
            coeffs = next;
        }
        let roots = polynomial_roots(&coeffs).unwrap();
        let re = sorted_real_parts(roots);
        for (k, r) in re.iter().enumerate() {
            assert!((r - (k as f64 + 1.0)).abs() < 1e-7, "root {k}: {r}");
        }
    }

    #[test]
    fn constant_and_empty_have_no_roots() {
        assert!(polynomial_roots(&[5.0]).unwrap().is_empty());
        assert!(polynomial_roots(&[]).unwrap().is_empty());
        assert!(polynomial_roots(&[3.0, 0.0, 0.0]).unwrap().is_empty());
    }

    #[test]
    fn trailing_zero_coefficients_are_trimmed() {
        let roots = polynomial_roots(&[2.0, -3.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(roots.len(), 2);
    }
}
