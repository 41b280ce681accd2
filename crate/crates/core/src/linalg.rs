//! Small dense complex matrix helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// e^{2πi t}
pub fn phase(t: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

/// NaN-propagating max over entry moduli.
pub fn nan_max(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

pub fn max_norm(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| nan_max(a, z.norm()))
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| nan_max(m, (x - y).norm()))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(v: &[C64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

/// Inverse, accepted only if ‖M·M⁻¹ − Id‖ is below `tol`.
pub fn checked_inverse(m: &CMat, tol: f64) -> Option<CMat> {
    if !m.is_square() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    let inv = m.clone().try_inverse()?;
    let err = max_diff(&(m * &inv), &identity(m.nrows()));
    if err.is_finite() && err < tol {
        Some(inv)
    } else {
        None
    }
}

/// 1-norm condition number estimate via the explicit inverse.
pub fn condition_number(m: &CMat) -> f64 {
    let norm1 = |a: &CMat| {
        (0..a.ncols())
            .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, nan_max)
    };
    match m.clone().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Solve `a x = b` for square `a`.
pub fn solve(a: &CMat, b: &[C64]) -> Option<Vec<C64>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs)?;
    Some(x.iter().copied().collect())
}

pub fn matrix_power(m: &CMat, k: u32) -> CMat {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Least-squares scalar ρ minimising ‖a − ρ b‖₂ (Frobenius).
pub fn best_scalar(a: &CMat, b: &CMat) -> C64 {
    let num: C64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    if den == 0.0 {
        ZERO
    } else {
        num / den
    }
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn fmt_c(z: C64, digits: usize) -> String {
    let im = if z.im.abs() < 0.5 * 10f64.powi(-(digits as i32)) {
        0.0
    } else {
        z.im
    };
    let re = if z.re.abs() < 0.5 * 10f64.powi(-(digits as i32)) {
        0.0
    } else {
        z.re
    };
    if im < 0.0 {
        format!("{:.*}-{:.*}i", digits, re, digits, -im)
    } else {
        format!("{:.*}+{:.*}i", digits, re, digits, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_check_rejects_singular() {
        let m = CMat::from_row_slice(2, 2, &[ONE, ONE, ONE, ONE]);
        assert!(checked_inverse(&m, 1e-9).is_none());
        let m = CMat::from_row_slice(2, 2, &[ONE, c(0.0, 1.0), ZERO, ONE]);
        let inv = checked_inverse(&m, 1e-9).unwrap();
        assert!(max_diff(&(&m * &inv), &identity(2)) < 1e-12);
    }

    #[test]
    fn best_scalar_recovers_multiple() {
        let b = CMat::from_row_slice(2, 2, &[ONE, c(0.0, 2.0), c(3.0, 0.0), ONE]);
        let rho = c(0.3, -0.7);
        let a = b.map(|z| z * rho);
        assert!((best_scalar(&a, &b) - rho).norm() < 1e-14);
    }

    #[test]
    fn complex_format() {
        assert_eq!(fmt_c(c(1.0, -0.5), 3), "1.000-0.500i");
        assert_eq!(fmt_c(c(-1e-15, 1e-17), 3), "0.000+0.000i");
    }
}
