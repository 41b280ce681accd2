//! Curve operators on the once-punctured torus, the C-matrix and the
//! Dehn-twist expansion coefficients.

use crate::basic_data::BasicData;
use crate::error::{Error, Result};
use crate::label_algebra::{fusion_matrix, Label};
use crate::linalg::{condition_number, max_diff, nan_max, solve, CMat, C64, ZERO};
use crate::report::RelationReport;

/// An operator on ⊕_μ Z_{λ,μ,μ†}, basis ordered by (μ, i).
#[derive(Clone, Debug, PartialEq)]
pub struct TorusBlockOperator {
    pub point: Label,
    pub basis: Vec<(Label, usize)>,
    pub m: CMat,
}

/// Which twist divides the curve-operator coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CofVariant {
    /// d⁻¹ of the output summand.
    #[default]
    Statement,
    /// d_μ⁻¹ of the input summand.
    Proof,
}

/// Scalar of the curve operator on a contractible curve: S_{0,λ}/S_{0,0},
/// obtained without S as E_{λ†}. The report cross-checks against S if present.
pub fn contractible_scalar(bd: &BasicData, lam: Label) -> Result<(C64, Option<RelationReport>)> {
    let ls = &bd.labels;
    let e = bd.e_scalar(ls.dual(lam))?;
    let check = bd.s.as_ref().map(|s| {
        let u = ls.unit();
        let want = s[(u, lam)] / s[(u, u)];
        RelationReport::new(
            "contractible",
            ls.tuple_names(&[lam]),
            (want - e).norm(),
            bd.tol,
        )
    });
    Ok((e, check))
}

pub fn fusion_cmat(bd: &BasicData, lam: Label) -> CMat {
    let n = fusion_matrix(&bd.labels, &bd.dims, lam);
    CMat::from_fn(n.len(), n.len(), |i, j| C64::new(n[i][j] as f64, 0.0))
}

/// The F/R chain for the unlabeled-point curve operator with curve label λ.
/// Internally the curve carries λ' = λ†; the (μ, ν†) entry is
/// E_λ · Σ F_{0,ν}[λ' μ†;λ'† μ]^{ji}_{11} R²(ν,λ'†,μ)_{jr} R(ν†,μ†,λ')_{it} F_{μ†,0}[λ' λ'†;ν† ν]^{11}_{tr}.
pub fn unlabeled_chain(bd: &BasicData, lam: Label) -> Result<CMat> {
    let ls = &bd.labels;
    let g = |x| ls.dual(x);
    let u = ls.unit();
    let n = ls.len();
    let lp = g(lam);
    let e = bd.e_scalar(lam)?;
    let mut out = CMat::zeros(n, n);
    for mu in 0..n {
        for nu in 0..n {
            if bd.dims.get(nu, g(lp), mu) == 0 || bd.dims.get(g(nu), g(mu), lp) == 0 {
                continue;
            }
            let fa = bd.f_block(lp, g(mu), g(lp), mu, u, nu);
            let r2 = bd.r2(nu, g(lp), mu);
            let r = bd.r(g(nu), g(mu), lp);
            let fb = bd.f_block(lp, g(lp), g(nu), nu, g(mu), u);
            let mut x = ZERO;
            for j in 0..fa.dims[2] {
                for i in 0..fa.dims[3] {
                    for rr in 0..r2.ncols() {
                        for t in 0..r.ncols() {
                            x += fa.get(0, 0, j, i) * r2[(j, rr)] * r[(i, t)] * fb.get(t, rr, 0, 0);
                        }
                    }
                }
            }
            out[(mu, g(nu))] += e * x;
        }
    }
    Ok(out)
}

/// N^λ promoted to complex, with the independent chain and their residual.
pub struct UnlabeledOp {
    pub fusion: CMat,
    pub chain: CMat,
    pub residual: f64,
}

pub fn curve_op_unlabeled_both(bd: &BasicData, lam: Label) -> Result<UnlabeledOp> {
    let fusion = fusion_cmat(bd, lam);
    let chain = unlabeled_chain(bd, lam)?;
    let residual = max_diff(&fusion, &chain);
    Ok(UnlabeledOp {
        fusion,
        chain,
        residual,
    })
}

/// N^λ, accepted only if the F/R chain reproduces it.
pub fn curve_op_unlabeled(bd: &BasicData, lam: Label) -> Result<TorusBlockOperator> {
    let op = curve_op_unlabeled_both(bd, lam)?;
    // NaN must fail
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(op.residual < bd.tol) {
        return Err(Error::Calibration {
            label: bd.labels.name(lam).to_string(),
            residual: op.residual,
        });
    }
    Ok(TorusBlockOperator {
        point: bd.labels.unit(),
        basis: bd.torus_summands(bd.labels.unit()),
        m: op.fusion,
    })
}

/// Raw COF coefficient block between summands μ and ρ (ν = ρ†) at internal
/// curve label κ':
/// Σ_{k,m} F̃[κ' μ†; ν† λ]_{μ†,ν}(k,i,j,m) R(ν†,μ†,κ')_{mk},
/// rows i over Z(λ,μ,μ†), columns j over Z(λ,ρ,ρ†).
pub fn cof_block(bd: &BasicData, lam: Label, kp: Label, mu: Label, rho: Label) -> CMat {
    let ls = &bd.labels;
    let g = |x| ls.dual(x);
    let nu = g(rho);
    let di = bd.dims.get(lam, mu, g(mu));
    let dj = bd.dims.get(lam, rho, g(rho));
    let mut out = CMat::zeros(di, dj);
    if di == 0 || dj == 0 || bd.dims.get(g(nu), g(mu), kp) == 0 {
        return out;
    }
    let ft = bd.twisted_f_block(kp, g(mu), g(nu), lam, g(mu), nu);
    let r = bd.r(g(nu), g(mu), kp);
    if ft.dims[1] != di || ft.dims[2] != dj || r.nrows() != ft.dims[3] || r.ncols() != ft.dims[0] {
        return out;
    }
    for i in 0..di {
        for j in 0..dj {
            let mut acc = ZERO;
            for k in 0..ft.dims[0] {
                for m in 0..ft.dims[3] {
                    acc += ft.get(k, i, j, m) * r[(m, k)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    out
}

fn assemble(bd: &BasicData, lam: Label, f: impl Fn(Label, Label) -> CMat) -> TorusBlockOperator {
    let basis = bd.torus_summands(lam);
    let n = basis.len();
    let mut m = CMat::zeros(n, n);
    let ls = &bd.labels;
    let mut offs = vec![0usize; ls.len() + 1];
    for mu in ls.labels() {
        offs[mu + 1] = offs[mu] + bd.dims.get(lam, mu, ls.dual(mu));
    }
    for mu in ls.labels() {
        for rho in ls.labels() {
            if offs[mu + 1] == offs[mu] || offs[rho + 1] == offs[rho] {
                continue;
            }
            let blk = f(mu, rho);
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    m[(offs[mu] + i, offs[rho] + j)] = blk[(i, j)];
                }
            }
        }
    }
    TorusBlockOperator {
        point: lam,
        basis,
        m,
    }
}

/// Z(β, κ) on the torus with point label λ. The contraction runs at
/// internal label κ† so that λ = 0 gives N^κ.
pub fn curve_op_torus(
    bd: &BasicData,
    lam: Label,
    ka: Label,
    variant: CofVariant,
) -> TorusBlockOperator {
    let kp = bd.labels.dual(ka);
    assemble(bd, lam, |mu, rho| {
        let d = match variant {
            CofVariant::Statement => bd.d[rho],
            CofVariant::Proof => bd.d[mu],
        };
        cof_block(bd, lam, kp, mu, rho).map(|z| z / d)
    })
}

/// curve_op_torus(0, κ) against the integer matrix N^κ.
pub fn check_integrality(bd: &BasicData, variant: CofVariant) -> Vec<RelationReport> {
    let ls = &bd.labels;
    ls.labels()
        .map(|k| {
            let op = curve_op_torus(bd, ls.unit(), k, variant);
            let n = fusion_cmat(bd, k);
            // within tol of N^κ entrywise means it rounds to N^κ
            RelationReport::new(
                "cof-integral",
                ls.tuple_names(&[k]),
                max_diff(&op.m, &n),
                bd.tol,
            )
        })
        .collect()
}

/// C_{λ,μ} = S_{μ,λ}/S_{μ,0}.
pub fn c_matrix_from_s(bd: &BasicData) -> Result<CMat> {
    let s = bd.s.as_ref().ok_or(Error::SRequired)?;
    let n = bd.labels.len();
    let u = bd.labels.unit();
    for m in 0..n {
        if s[(m, u)].norm() <= bd.tol {
            return Err(Error::Singular(format!(
                "S column at unit vanishes at {}",
                bd.labels.name(m)
            )));
        }
    }
    Ok(CMat::from_fn(n, n, |l, m| s[(m, l)] / s[(m, u)]))
}

/// Joint eigenvalue vectors of the fusion family: chars[c][λ] with N^λ v = χ(λ) v.
#[derive(Clone, Debug)]
pub struct Characters {
    pub chars: Vec<Vec<C64>>,
    /// Smallest gap between eigenvalues of the generic combination.
    pub gap: f64,
}

fn null_vector(a: &CMat) -> Option<(nalgebra::DVector<C64>, f64)> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t?;
    let (idx, smin) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc },
            );
    Some((vt.row(idx).adjoint().into_owned(), smin))
}

pub fn joint_characters(bd: &BasicData) -> Result<Characters> {
    let ls = &bd.labels;
    let n = ls.len();
    let ns: Vec<CMat> = ls.labels().map(|l| fusion_cmat(bd, l)).collect();
    let nr: Vec<nalgebra::DMatrix<f64>> = ns.iter().map(|m| m.map(|z| z.re)).collect();
    // a few fixed generic weightings; the first with a simple spectrum wins
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut last_gap = 0.0;
    for attempt in 0..6 {
        let mut comb = nalgebra::DMatrix::<f64>::zeros(n, n);
        for (k, m) in nr.iter().enumerate() {
            let w = ((k as f64 + 1.0) * phi * (attempt as f64 + 1.3)).fract() + 0.1 * k as f64;
            comb += m * w;
        }
        let eig = comb.complex_eigenvalues();
        let ev: Vec<C64> = eig.iter().copied().collect();
        let mut gap = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                gap = gap.min((ev[a] - ev[b]).norm());
            }
        }
        last_gap = gap;
        if n > 1 && gap < 1e-6 {
            continue;
        }
        let combc = comb.map(|x| C64::new(x, 0.0));
        let mut chars = Vec::with_capacity(n);
        for &w in &ev {
            let a = &combc - CMat::identity(n, n).map(|z| z * w);
            let (v, _) = null_vector(&a).ok_or_else(|| Error::Eigen("SVD failed".into()))?;
            let j = (0..n)
                .max_by(|&x, &y| v[x].norm().partial_cmp(&v[y].norm()).unwrap())
                .unwrap();
            let chi: Vec<C64> = ns.iter().map(|m| (m * &v)[j] / v[j]).collect();
            // must be a joint eigenvector of every N^λ
            for (k, m) in ns.iter().enumerate() {
                let r = m * &v - &v * chi[k];
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if r.iter().any(|z| !(z.norm() < 1e-8)) {
                    return Err(Error::Eigen(format!(
                        "not a joint eigenvector of N^{}",
                        ls.name(k)
                    )));
                }
            }
            chars.push(chi);
        }
        // deterministic order: by descending real part of the summed character
        chars.sort_by(|a, b| {
            let sa: f64 = a.iter().map(|z| z.re).sum();
            let sb: f64 = b.iter().map(|z| z.re).sum();
            sb.partial_cmp(&sa).unwrap().then_with(|| {
                let ia: f64 = a.iter().map(|z| z.im).sum();
                let ib: f64 = b.iter().map(|z| z.im).sum();
                ib.partial_cmp(&ia).unwrap()
            })
        });
        return Ok(Characters { chars, gap });
    }
    Err(Error::Eigen(format!(
        "defective or degenerate joint spectrum (gap {last_gap:.2e})"
    )))
}

/// C with column μ = chars[perm[μ]].
pub fn c_from_characters(ch: &Characters, perm: &[usize]) -> CMat {
    let n = perm.len();
    CMat::from_fn(n, n, |l, m| ch.chars[perm[m]][l])
}

/// C from S when present, else from the joint characters in canonical order.
pub fn c_matrix(bd: &BasicData) -> Result<CMat> {
    if bd.s.is_some() {
        return c_matrix_from_s(bd);
    }
    let ch = joint_characters(bd)?;
    let id: Vec<usize> = (0..bd.labels.len()).collect();
    Ok(c_from_characters(&ch, &id))
}

/// Distance between the S-route C and the eigen route, minimised over the
/// assignment of characters to columns. Greedy matching per column.
pub fn c_routes_agree(bd: &BasicData) -> Result<f64> {
    let cs = c_matrix_from_s(bd)?;
    let ch = joint_characters(bd)?;
    let n = bd.labels.len();
    let mut used = vec![false; n];
    let mut worst: f64 = 0.0;
    for m in 0..n {
        let mut best = (f64::INFINITY, 0);
        for (c, chi) in ch.chars.iter().enumerate() {
            if used[c] {
                continue;
            }
            let d = (0..n)
                .map(|l| (cs[(l, m)] - chi[l]).norm())
                .fold(0.0, nan_max);
            if d < best.0 {
                best = (d, c);
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    Ok(worst)
}

/// C_{λ,μ}C_{λ',μ} = Σ_ν D(λ,λ',ν†) C_{ν,μ}.
pub fn check_multiplicativity(bd: &BasicData, c: &CMat) -> RelationReport {
    let ls = &bd.labels;
    let n = ls.len();
    let mut worst: f64 = 0.0;
    for l in 0..n {
        for lp in 0..n {
            for m in 0..n {
                let rhs: C64 = (0..n)
                    .map(|v| c[(v, m)] * bd.dims.get(l, lp, ls.dual(v)) as f64)
                    .sum();
                worst = worst.max((c[(l, m)] * c[(lp, m)] - rhs).norm());
            }
        }
    }
    RelationReport::new("c-multiplicative", vec![], worst, bd.tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistPower {
    /// Σ_λ c_λ C_{λ,μ} = d_μ
    Twist,
    /// Σ_λ c̃_λ C_{λ,μ} = d_μ⁻¹
    InverseTwist,
}

/// Solve for the Dehn-twist expansion coefficients.
pub fn dehn_coefficients(bd: &BasicData, c: &CMat, power: TwistPower) -> Result<Vec<C64>> {
    let cond = condition_number(c);
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::Singular(format!("C (condition number {cond:.2e})")));
    }
    let rhs: Vec<C64> = match power {
        TwistPower::Twist => bd.d.clone(),
        TwistPower::InverseTwist => bd.d.iter().map(|z| z.inv()).collect(),
    };
    let coef = solve(&c.transpose(), &rhs).ok_or_else(|| Error::Singular("C".into()))?;
    Ok(coef)
}

/// max_μ |Σ_λ c_λ C_{λ,μ} − target_μ|.
pub fn dehn_residual(bd: &BasicData, c: &CMat, coef: &[C64], power: TwistPower) -> f64 {
    let n = bd.labels.len();
    (0..n)
        .map(|m| {
            let lhs: C64 = (0..n).map(|l| coef[l] * c[(l, m)]).sum();
            let want = match power {
                TwistPower::Twist => bd.d[m],
                TwistPower::InverseTwist => bd.d[m].inv(),
            };
            (lhs - want).norm()
        })
        .fold(0.0, nan_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DehnClosedForm {
    /// c_κ = d_{κ†} S_{κ†,0}, as printed.
    Printed,
    /// c_κ = S_{κ,0} / d_κ, what solving d = cC gives.
    TwistQuotient,
}

pub fn dehn_closed_form(bd: &BasicData, form: DehnClosedForm) -> Result<Vec<C64>> {
    let s = bd.s.as_ref().ok_or(Error::SRequired)?;
    let ls = &bd.labels;
    let u = ls.unit();
    Ok(ls
        .labels()
        .map(|k| match form {
            DehnClosedForm::Printed => {
                let kd = ls.dual(k);
                bd.d[kd] * s[(kd, u)]
            }
            DehnClosedForm::TwistQuotient => s[(k, u)] / bd.d[k],
        })
        .collect())
}

/// Solve d = cC and compare against both closed forms when S is present.
pub fn check_dehn(bd: &BasicData) -> Result<Vec<RelationReport>> {
    let c = c_matrix(bd)?;
    let mut out = Vec::new();
    let cond = condition_number(&c);
    out.push(RelationReport::new("c-invertible", vec![], cond, 1e6));
    let coef = dehn_coefficients(bd, &c, TwistPower::Twist)?;
    out.push(RelationReport::new(
        "dehn-solve",
        vec![],
        dehn_residual(bd, &c, &coef, TwistPower::Twist),
        bd.tol,
    ));
    if bd.s.is_some() {
        for (name, form) in [
            ("dehn-closed-printed", DehnClosedForm::Printed),
            ("dehn-closed-quotient", DehnClosedForm::TwistQuotient),
        ] {
            let cf = dehn_closed_form(bd, form)?;
            let res = coef
                .iter()
                .zip(&cf)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, nan_max);
            out.push(RelationReport::new(name, vec![], res, bd.tol));
        }
    }
    Ok(out)
}
