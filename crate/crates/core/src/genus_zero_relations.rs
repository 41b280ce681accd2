//! Genus-zero identities among F, R, B, E, d and S.
//!
//! Every check returns reports rather than errors; a failing identity is data.

use rayon::prelude::*;

use crate::basic_data::BasicData;
use crate::error::{Error, Result};
use crate::label_algebra::Label;
use crate::linalg::{condition_number, max_diff, nan_max, CMat, C64, ZERO};
use crate::report::RelationReport;

fn names(bd: &BasicData, t: &[Label]) -> Vec<String> {
    bd.labels.tuple_names(t)
}

fn rep(bd: &BasicData, rel: &str, t: &[Label], residual: f64) -> RelationReport {
    RelationReport::new(rel, names(bd, t), residual, bd.tol)
}

/// The four unit-label specializations of F, each against R or R².
pub fn check_unit_f_cases(bd: &BasicData) -> Vec<RelationReport> {
    let ls = &bd.labels;
    let dt = &bd.dims;
    let u = ls.unit();
    let g = |x| ls.dual(x);
    let mut out = Vec::new();
    // each case: block key, the R-type matrix it must reproduce, and how the
    // free indices sit inside the block
    for a in ls.labels() {
        for b in ls.labels() {
            for c in ls.labels() {
                // λ = 0: (μ,ξ,κ) = (a,b,c); F[μ ξ;0 κ]_{μ†,κ†} (0,j)→(0,l) = R(μ,κ,ξ)
                if dt.get(a, c, b) > 0 {
                    let f = bd.f_block(a, b, u, c, g(a), g(c));
                    let r = bd.r(a, c, b);
                    let res = entry_diff(&r, |j, l| f.get(0, j, 0, l), f.dims[0] * f.dims[2] == 1);
                    out.push(rep(bd, "unit-F-lambda0", &[a, b, c], res));
                }
                // μ = 0: (λ,ξ,κ) = (a,b,c); F[0 ξ;λ κ]_{λ†,ξ} (0,j)→(k,0) = R²(λ,κ,ξ)
                if dt.get(a, c, b) > 0 {
                    let f = bd.f_block(u, b, a, c, g(a), b);
                    let r = bd.r2(a, c, b);
                    let res = entry_diff(&r, |j, k| f.get(0, j, k, 0), f.dims[0] * f.dims[3] == 1);
                    out.push(rep(bd, "unit-F-mu0", &[a, b, c], res));
                }
                // ξ = 0: (μ,λ,κ) = (a,b,c); F[μ 0;λ κ]_{κ,μ} (i,0)→(k,0) = R(κ,μ,λ)
                if dt.get(c, a, b) > 0 {
                    let f = bd.f_block(a, u, b, c, c, a);
                    let r = bd.r(c, a, b);
                    let res = entry_diff(&r, |i, k| f.get(i, 0, k, 0), f.dims[1] * f.dims[3] == 1);
                    out.push(rep(bd, "unit-F-xi0", &[a, b, c], res));
                }
                // κ = 0: (μ,ξ,λ) = (a,b,c); F[μ ξ;λ 0]_{ξ,λ†} (i,0)→(0,l) = R²(ξ,μ,λ)
                if dt.get(b, a, c) > 0 {
                    let f = bd.f_block(a, b, c, u, b, g(c));
                    let r = bd.r2(b, a, c);
                    let res = entry_diff(&r, |i, l| f.get(i, 0, 0, l), f.dims[1] * f.dims[2] == 1);
                    out.push(rep(bd, "unit-F-kappa0", &[a, b, c], res));
                }
            }
        }
    }
    out
}

fn entry_diff(want: &CMat, got: impl Fn(usize, usize) -> C64, unit_dims_ok: bool) -> f64 {
    if !unit_dims_ok {
        return f64::INFINITY;
    }
    let mut m: f64 = 0.0;
    for i in 0..want.nrows() {
        for j in 0..want.ncols() {
            m = nan_max(m, (want[(i, j)] - got(i, j)).norm());
        }
    }
    m
}

/// S_{0,0}·E_λ = S_{0,λ†}, plus nonvanishing of S_{0,0} and S_{0,λ}.
pub fn check_ess(bd: &BasicData) -> Result<Vec<RelationReport>> {
    let s = bd.s.as_ref().ok_or(Error::SRequired)?;
    let ls = &bd.labels;
    let u = ls.unit();
    let s00 = s[(u, u)];
    let mut out = vec![RelationReport::flag(
        "s00-nonzero",
        names(bd, &[u]),
        s00.norm() > bd.tol,
    )];
    for l in ls.labels() {
        let res = match bd.e_scalar(l) {
            Ok(e) => (s00 * e - s[(u, ls.dual(l))]).norm(),
            Err(_) => f64::INFINITY,
        };
        out.push(rep(bd, "ess", &[l], res));
    }
    for l in ls.labels() {
        out.push(RelationReport::flag(
            "s0-nonzero",
            names(bd, &[l]),
            s[(u, l)].norm() > bd.tol,
        ));
    }
    Ok(out)
}

/// E_λ ≠ 0 for every λ.
pub fn check_e_nonzero(bd: &BasicData) -> Vec<RelationReport> {
    bd.labels
        .labels()
        .map(|l| RelationReport::flag("e-nonzero", names(bd, &[l]), bd.e_scalar(l).is_ok()))
        .collect()
}

/// The contraction whose E_{λ†}-scaled value must be δ_{sl}:
/// Σ_{i,j,r} F_{0,μ}[λ ν;λ† ν†]^{ij}_{11} R(μ†,ν,λ)_{jr} F_{ν,0}[λ λ†;μ† μ]^{11}_{rl} R²(μ,λ†,ν†)_{is}.
/// `None` when Z(ν†,μ,λ†) vanishes.
pub fn pentagon_matrix(bd: &BasicData, lam: Label, mu: Label, nu: Label) -> Option<CMat> {
    let ls = &bd.labels;
    let g = |x| ls.dual(x);
    let u = ls.unit();
    if bd.dims.get(g(nu), mu, g(lam)) == 0 {
        return None;
    }
    let fa = bd.f_block(lam, nu, g(lam), g(nu), u, mu);
    let rr = bd.r(g(mu), nu, lam);
    let fb = bd.f_block(lam, g(lam), g(mu), mu, nu, u);
    let r2 = bd.r2(mu, g(lam), g(nu));
    let (di, dj) = (fa.dims[2], fa.dims[3]);
    let (dr, dl) = (fb.dims[0], fb.dims[1]);
    let ds = r2.ncols();
    let mut m = CMat::zeros(ds, dl);
    if fa.dims[0] * fa.dims[1] != 1 || fb.dims[2] * fb.dims[3] != 1 {
        return Some(m);
    }
    for s in 0..ds {
        for l in 0..dl {
            let mut acc = ZERO;
            for i in 0..di {
                for j in 0..dj {
                    for r in 0..dr {
                        acc += fa.get(0, 0, i, j) * rr[(j, r)] * fb.get(r, l, 0, 0) * r2[(i, s)];
                    }
                }
            }
            m[(s, l)] = acc;
        }
    }
    Some(m)
}

pub fn check_pentagon_delta(
    bd: &BasicData,
    lam: Label,
    mu: Label,
    nu: Label,
) -> Option<RelationReport> {
    let m = pentagon_matrix(bd, lam, mu, nu)?;
    let res = match bd.e_scalar(bd.labels.dual(lam)) {
        Ok(e) => max_diff(&m.map(|z| z * e), &CMat::identity(m.nrows(), m.ncols())),
        Err(_) => f64::INFINITY,
    };
    Some(rep(bd, "relpent", &[lam, mu, nu], res))
}

/// Σ_{l,u,v} F_{0,μ}[λ ν†;λ† ν]^{lm}_{11} R²(μ,λ†,ν)_{lu} F_{ν†,0}[λ λ†;μ† μ]^{11}_{vu} R(μ†,ν†,λ)_{tv}
/// with (t,m) free over Z(μ†,ν†,λ). `None` when that space vanishes.
pub fn abba_matrix(bd: &BasicData, lam: Label, mu: Label, nu: Label) -> Option<CMat> {
    let ls = &bd.labels;
    let g = |x| ls.dual(x);
    let u0 = ls.unit();
    let dt = bd.dims.get(g(mu), g(nu), lam);
    if dt == 0 {
        return None;
    }
    let fa = bd.f_block(lam, g(nu), g(lam), nu, u0, mu);
    let r2 = bd.r2(mu, g(lam), nu);
    let fb = bd.f_block(lam, g(lam), g(mu), mu, g(nu), u0);
    let rr = bd.r(g(mu), g(nu), lam);
    let mut m = CMat::zeros(dt, dt);
    if fa.dims[0] * fa.dims[1] != 1 || fb.dims[2] * fb.dims[3] != 1 {
        return Some(m);
    }
    let (dl, dmm) = (fa.dims[2], fa.dims[3]);
    let (dv, du) = (fb.dims[0], fb.dims[1]);
    for t in 0..dt {
        for mm in 0..dmm {
            let mut acc = ZERO;
            for l in 0..dl {
                for u in 0..du {
                    for v in 0..dv {
                        acc += fa.get(0, 0, l, mm) * r2[(l, u)] * fb.get(v, u, 0, 0) * rr[(t, v)];
                    }
                }
            }
            m[(t, mm)] = acc;
        }
    }
    Some(m)
}

pub fn check_abba(bd: &BasicData, lam: Label, mu: Label, nu: Label) -> Option<RelationReport> {
    let m = abba_matrix(bd, lam, mu, nu)?;
    let res = match bd.e_scalar(bd.labels.dual(lam)) {
        Ok(e) => max_diff(&m, &CMat::identity(m.nrows(), m.ncols()).map(|z| z / e)),
        Err(_) => f64::INFINITY,
    };
    Some(rep(bd, "abba", &[lam, mu, nu], res))
}

/// Summed pentagon: tr of the unscaled contraction against E_{λ†}⁻¹ N_{ν†,μ}^λ.
/// Also returns the consistency report against the δ form.
pub fn check_pentsum(bd: &BasicData, lam: Label, mu: Label, nu: Label) -> Vec<RelationReport> {
    let ls = &bd.labels;
    let n_coef = bd.dims.get(ls.dual(nu), mu, ls.dual(lam)) as f64;
    let m = pentagon_matrix(bd, lam, mu, nu);
    let lhs: C64 = m.as_ref().map_or(ZERO, |m| m.trace());
    let e = bd.e_scalar(ls.dual(lam));
    let mut out = Vec::with_capacity(2);
    let res = match &e {
        Ok(e) => (lhs - C64::new(n_coef, 0.0) / e).norm(),
        Err(_) => f64::INFINITY,
    };
    out.push(rep(bd, "pentsum", &[lam, mu, nu], res));
    if let (Some(m), Ok(e)) = (m, e) {
        // Summing the δ form over its diagonal bounds the summed form:
        // |E·tr M − N| ≤ dim · ‖E·M − Id‖. Report how far that bound is violated.
        let delta_res = max_diff(&m.map(|z| z * e), &CMat::identity(m.nrows(), m.ncols()));
        let sum_res = (lhs * e - C64::new(n_coef, 0.0)).norm();
        let excess = nan_max(sum_res - m.nrows() as f64 * delta_res, 0.0);
        out.push(rep(bd, "pentsum-consistency", &[lam, mu, nu], excess));
    }
    out
}

/// Each assembled F map is invertible: finite condition number and
/// ‖F·F⁻¹ − Id‖ < 10·tol.
pub fn check_f_invertible(
    bd: &BasicData,
    mu: Label,
    xi: Label,
    lam: Label,
    ka: Label,
) -> Option<RelationReport> {
    let m = bd.assembled_f(mu, xi, lam, ka);
    if m.nrows() == 0 && m.ncols() == 0 {
        return None;
    }
    let res = if !m.is_square() || !condition_number(&m).is_finite() {
        f64::INFINITY
    } else {
        match m.clone().try_inverse() {
            Some(inv) => max_diff(&(&m * inv), &CMat::identity(m.nrows(), m.nrows())),
            None => f64::INFINITY,
        }
    };
    Some(RelationReport::new(
        "f-invertible",
        names(bd, &[mu, xi, lam, ka]),
        res,
        10.0 * bd.tol,
    ))
}

/// Every genus-zero relation over every label tuple, in deterministic label order.
pub fn run_all(bd: &BasicData) -> Vec<RelationReport> {
    let n = bd.labels.len();
    let mut out = check_unit_f_cases(bd);
    out.extend(check_e_nonzero(bd));
    if bd.s.is_some() {
        out.extend(check_ess(bd).expect("S present"));
    }
    let triples: Vec<Vec<RelationReport>> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (lam, mu, nu) = (idx / (n * n), (idx / n) % n, idx % n);
            let mut v = Vec::new();
            v.extend(check_pentagon_delta(bd, lam, mu, nu));
            v.extend(check_abba(bd, lam, mu, nu));
            v.extend(check_pentsum(bd, lam, mu, nu));
            v
        })
        .collect();
    // group by relation, keeping label order inside each group
    for key in ["relpent", "abba", "pentsum", "pentsum-consistency"] {
        for v in &triples {
            out.extend(v.iter().filter(|r| r.relation == key).cloned());
        }
    }
    let quads: Vec<Option<RelationReport>> = (0..n * n * n * n)
        .into_par_iter()
        .map(|idx| {
            let q = [
                idx / (n * n * n),
                (idx / (n * n)) % n,
                (idx / n) % n,
                idx % n,
            ];
            check_f_invertible(bd, q[0], q[1], q[2], q[3])
        })
        .collect();
    out.extend(quads.into_iter().flatten());
    out
}

/// Observed R³ scalar per triple, recorded and never asserted.
pub fn r_cubed_record(bd: &BasicData) -> Vec<([Label; 3], Option<C64>)> {
    bd.dims
        .nonzero()
        .into_iter()
        .map(|(a, b, c, _)| ([a, b, c], bd.r_cubed_scalar(a, b, c)))
        .collect()
}
