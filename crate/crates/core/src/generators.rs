//! Built-in example theories. Each one is produced by an independent
//! construction and then accepted only if the relation suite, Main′ at the
//! unit point and the torus mapping-class relation all pass.
//!
//! - trivial: one label, every tensor [1].
//! - abelian-k: Z/k fusion, F = R = 1, twists and S found by a finite search
//!   over quadratic phases and Fourier signs.
//! - fibonacci: the 2×2 F block is solved numerically from the pentagon
//!   equation of the fusion rules τ⊗τ = 0 ⊕ τ; twists found by a search
//!   over roots of unity.

use std::collections::BTreeMap;

use crate::basic_data::{f_dims, BasicData, Block4, FKey, DEFAULT_TOL};
use crate::curve_operators::{curve_op_torus, CofVariant};
use crate::error::{Error, Result};
use crate::genus_zero_relations::run_all;
use crate::label_algebra::{DimTable, Label, LabelSet};
use crate::linalg::{checked_inverse, diag, max_diff, phase, CMat, C64, ONE};
use crate::s_reconstruction::{
    mcg_relation_check, mcg_single_rho, s_from_twist_sandwich, s_lambda_main, MainForm, McgForm,
};

/// Parse a generator name: `trivial`, `fibonacci` or `abelian-k`.
pub fn generate(name: &str) -> Result<BasicData> {
    match name {
        "trivial" => trivial(),
        "fibonacci" => fibonacci(),
        _ => match name.strip_prefix("abelian-").map(str::parse::<usize>) {
            Some(Ok(k)) if (1..=12).contains(&k) => abelian(k),
            _ => Err(Error::Generator(format!(
                "unknown theory {name:?} (expected trivial, fibonacci or abelian-k with 1 ≤ k ≤ 12)"
            ))),
        },
    }
}

pub const BUILT_IN: &[&str] = &[
    "trivial",
    "abelian-2",
    "abelian-3",
    "abelian-4",
    "abelian-5",
    "fibonacci",
];

fn scalar(z: C64) -> CMat {
    CMat::from_element(1, 1, z)
}

/// F value at a key with a unit among its four outer labels, from R.
fn unit_f(ls: &LabelSet, key: FKey, r: &dyn Fn([Label; 3]) -> C64) -> Option<C64> {
    let [mu, xi, lam, ka, nu, nt] = key;
    let u = ls.unit();
    let g = |x| ls.dual(x);
    let r2 = |a, b, c| r([a, b, c]) * r([b, c, a]);
    if lam == u && nu == g(mu) && nt == g(ka) {
        return Some(r([mu, ka, xi]));
    }
    if mu == u && nu == g(lam) && nt == xi {
        return Some(r2(lam, ka, xi));
    }
    if xi == u && nu == ka && nt == mu {
        return Some(r([ka, mu, lam]));
    }
    if ka == u && nu == xi && nt == g(lam) {
        return Some(r2(xi, mu, lam));
    }
    None
}

struct MfSpec<'a> {
    ls: LabelSet,
    dims: DimTable,
    f: &'a dyn Fn(FKey) -> C64,
    r: &'a dyn Fn([Label; 3]) -> C64,
    b: &'a dyn Fn([Label; 3]) -> C64,
    d: Vec<C64>,
    s: Option<CMat>,
    comment: String,
}

/// Assemble a multiplicity-free theory: every nonzero space is one-dimensional.
fn build_mf(spec: MfSpec) -> Result<BasicData> {
    let n = spec.ls.len();
    let mut f = BTreeMap::new();
    let mut r = BTreeMap::new();
    let mut b = BTreeMap::new();
    for (x, y, z, v) in spec.dims.nonzero() {
        if v != 1 {
            return Err(Error::Generator(
                "multiplicity-free builder got dim > 1".into(),
            ));
        }
        r.insert([x, y, z], scalar((spec.r)([x, y, z])));
        b.insert([x, y, z], scalar((spec.b)([x, y, z])));
    }
    for idx in 0..n.pow(6) {
        let mut key = [0; 6];
        let mut t = idx;
        for slot in key.iter_mut().rev() {
            *slot = t % n;
            t /= n;
        }
        let dims = f_dims(&spec.ls, &spec.dims, key);
        if dims.contains(&0) {
            continue;
        }
        let val = unit_f(&spec.ls, key, spec.r).unwrap_or_else(|| (spec.f)(key));
        f.insert(
            key,
            Block4 {
                dims,
                m: scalar(val),
            },
        );
    }
    let bd = BasicData {
        labels: spec.ls,
        dims: spec.dims,
        f,
        r,
        b,
        d: spec.d,
        s: spec.s,
        tol: DEFAULT_TOL,
        comment: Some(spec.comment),
    };
    bd.validate()?;
    Ok(bd)
}

pub fn trivial() -> Result<BasicData> {
    let ls = LabelSet::new(vec!["0".into()], vec![0], 0)?;
    let one = |_: [Label; 3]| ONE;
    build_mf(MfSpec {
        ls,
        dims: DimTable::from_fn(1, |_, _, _| 1),
        f: &|_| ONE,
        r: &one,
        b: &one,
        d: vec![ONE],
        s: Some(scalar(ONE)),
        comment: "trivial theory: all tensors 1".into(),
    })
}

/// S in the normalization the torus formulas use, from standard modular
/// data and twists: S = T·S_std·T·S_std⁻¹·T.
fn sandwich_s(s_std: &CMat, d: &[C64]) -> Result<CMat> {
    let t = diag(d);
    let inv =
        checked_inverse(s_std, 1e-10).ok_or_else(|| Error::Generator("singular S_std".into()))?;
    Ok(&t * s_std * &t * inv * &t)
}

/// The acceptance gate every generated theory must pass.
fn accept(bd: &BasicData) -> bool {
    if !run_all(bd).iter().all(|r| r.pass) {
        return false;
    }
    let Ok(main0) = s_lambda_main(
        bd,
        bd.labels.unit(),
        None,
        MainForm::Theorem,
        CofVariant::Statement,
    ) else {
        return false;
    };
    if !main0.residual.is_some_and(|r| r < bd.tol) {
        return false;
    }
    let mut reps = Vec::new();
    for lam in bd.labels.labels() {
        if bd.torus_summands(lam).is_empty() {
            continue;
        }
        let Ok(m) = s_lambda_main(bd, lam, None, MainForm::Theorem, CofVariant::Statement) else {
            return false;
        };
        let Ok(sw) = s_from_twist_sandwich(bd, lam, CofVariant::Statement) else {
            return false;
        };
        if max_diff(&m.m, &sw.m) >= bd.tol {
            return false;
        }
        match mcg_relation_check(bd, lam, &m.m, McgForm::MappingClassImage, bd.tol) {
            Ok(r) => reps.push(r),
            Err(_) => return false,
        }
    }
    mcg_single_rho(&reps, 1e-8).0
}

pub fn abelian(k: usize) -> Result<BasicData> {
    if k == 1 {
        return trivial();
    }
    let names: Vec<String> = (0..k).map(|a| a.to_string()).collect();
    let ls = LabelSet::new(names, (0..k).map(|a| (k - a) % k).collect(), 0)?;
    let dims = DimTable::from_fn(k, |a, b, c| ((a + b + c) % k == 0) as u32);
    for n in 1..2 * k {
        if (n * k) % 2 == 1 {
            continue;
        }
        // θ_a = e^{iπ n a²/k}
        let d: Vec<C64> = (0..k)
            .map(|a| phase((n * a * a) as f64 / (2 * k) as f64))
            .collect();
        for eps in [1i64, -1] {
            let s_std = CMat::from_fn(k, k, |a, b| {
                phase(eps as f64 * (a * b) as f64 / k as f64) / (k as f64).sqrt()
            });
            let s = sandwich_s(&s_std, &d)?;
            let dd = d.clone();
            let bfun = move |t: [Label; 3]| if t[0] == 0 { dd[t[1]] } else { ONE };
            let one = |_: [Label; 3]| ONE;
            let bd = build_mf(MfSpec {
                ls: ls.clone(),
                dims: dims.clone(),
                f: &|_| ONE,
                r: &one,
                b: &bfun,
                d: d.clone(),
                s: Some(s),
                comment: format!(
                    "gauge: F = R = 1; B(0,a,-a) = d_a, other B = 1; d_a = exp(i pi {n} a^2/{k}); \
                     S = T S_std T S_std^-1 T with S_std = exp({}2 pi i ab/{k})/sqrt({k})",
                    if eps > 0 { "" } else { "-" }
                ),
            })?;
            if accept(&bd) {
                return Ok(bd);
            }
        }
    }
    Err(Error::Generator(format!(
        "no twist/sign choice passes for abelian-{k}"
    )))
}

/// Standard pentagon residuals for Fibonacci fusion with the 2×2 block
/// F^{τττ}_τ = [[a, b], [b, c]] and every other admissible F equal to 1.
fn fib_pentagon(x: &[f64; 3]) -> Vec<f64> {
    let adm = |a: usize, b: usize, c: usize| a + b + c != 1;
    let f = |a: usize, b: usize, c: usize, d: usize, e: usize, g: usize| -> f64 {
        if !(adm(a, b, e) && adm(e, c, d) && adm(b, c, g) && adm(a, g, d)) {
            return 0.0;
        }
        if (a, b, c, d) == (1, 1, 1, 1) {
            match (e, g) {
                (0, 0) => x[0],
                (1, 1) => x[2],
                _ => x[1],
            }
        } else {
            1.0
        }
    };
    let mut out = Vec::new();
    let l2 = [0usize, 1];
    for &a in &l2 {
        for &b in &l2 {
            for &c in &l2 {
                for &d in &l2 {
                    for &e in &l2 {
                        for &fi in &l2 {
                            for &g in &l2 {
                                for &k in &l2 {
                                    for &l in &l2 {
                                        let lhs = f(fi, c, d, e, g, l) * f(a, b, l, e, fi, k);
                                        let rhs: f64 = l2
                                            .iter()
                                            .map(|&h| {
                                                f(a, b, c, g, fi, h)
                                                    * f(a, h, d, e, g, k)
                                                    * f(b, c, d, k, h, l)
                                            })
                                            .sum();
                                        out.push(lhs - rhs);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Gauss–Newton from several starts; returns every distinct real solution.
fn solve_fib_pentagon() -> Vec<[f64; 3]> {
    let mut sols: Vec<[f64; 3]> = Vec::new();
    for start in [
        [0.6, 0.8, -0.6],
        [0.5, -0.7, -0.5],
        [-1.5, 0.5, 0.5],
        [1.0, 1.0, 1.0],
        [0.2, 0.3, -0.9],
    ] {
        let mut x = start;
        for _ in 0..100 {
            let r0 = fib_pentagon(&x);
            let m = r0.len();
            let mut jac = nalgebra::DMatrix::<f64>::zeros(m, 3);
            for p in 0..3 {
                let h = 1e-7;
                let mut xp = x;
                xp[p] += h;
                let rp = fib_pentagon(&xp);
                for i in 0..m {
                    jac[(i, p)] = (rp[i] - r0[i]) / h;
                }
            }
            let rv = nalgebra::DVector::from_vec(r0.iter().map(|v| -v).collect());
            let Ok(step) = jac.svd(true, true).solve(&rv, 1e-12) else {
                break;
            };
            for p in 0..3 {
                x[p] += step[p];
            }
            if step.norm() < 1e-15 {
                break;
            }
        }
        let res = fib_pentagon(&x)
            .iter()
            .fold(0.0f64, |a, v| crate::linalg::nan_max(a, v.abs()));
        if res < 1e-12
            && !sols
                .iter()
                .any(|s| (0..3).all(|i| (s[i] - x[i]).abs() < 1e-8))
        {
            sols.push(x);
        }
    }
    sols
}

pub fn fibonacci() -> Result<BasicData> {
    let names = vec!["0".to_string(), "t".into()];
    let ls = LabelSet::new(names, vec![0, 1], 0)?;
    let dims = DimTable::from_fn(2, |a, b, c| (a + b + c != 1) as u32);
    // Perron eigenvalue of N^τ = [[0,1],[1,1]]
    let nt = nalgebra::DMatrix::<f64>::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 1.0]);
    let perron = nt
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let sol = solve_fib_pentagon()
        .into_iter()
        .filter(|s| s[1] > 0.0)
        .find(|s| (1.0 / s[0] - perron).abs() < 1e-9)
        .ok_or_else(|| {
            Error::Generator("pentagon solve found no solution with E = Perron root".into())
        })?;
    let x = [[sol[0], sol[1]], [sol[1], sol[2]]];
    let fval = |key: FKey| -> C64 {
        if key[..4] == [1, 1, 1, 1] {
            // block (ν, ν̃) is the scalar at row ν̃, column ν
            C64::new(x[key[5]][key[4]], 0.0)
        } else {
            ONE
        }
    };
    let one = |_: [Label; 3]| ONE;
    // standard S from the fusion characters χ_μ(τ) = (φ, −1/φ) and quantum dims
    let qd = [1.0, perron];
    let total = (1.0 + perron * perron).sqrt();
    let chi = [[1.0, perron], [1.0, -1.0 / perron]];
    let s_std = CMat::from_fn(2, 2, |m, l| C64::new(qd[m] * chi[m][l] / total, 0.0));
    for step in 1..20 {
        let th = phase(step as f64 / 20.0);
        let d = vec![ONE, th];
        let s = sandwich_s(&s_std, &d)?;
        // B on unit triples: B(0,a,a) = d_a; B(τ,τ,τ) from Z(β,0) = Id on the τ-punctured torus
        let trial_b = |bt: C64| {
            let d2 = d.clone();
            move |t: [Label; 3]| -> C64 {
                if t[0] == 0 {
                    d2[t[1]]
                } else if t == [1, 1, 1] {
                    bt
                } else {
                    ONE
                }
            }
        };
        let probe_b = trial_b(ONE);
        let probe = build_mf(MfSpec {
            ls: ls.clone(),
            dims: dims.clone(),
            f: &fval,
            r: &one,
            b: &probe_b,
            d: d.clone(),
            s: Some(s.clone()),
            comment: String::new(),
        })?;
        let v = curve_op_torus(&probe, 1, 0, CofVariant::Statement).m[(0, 0)];
        if v.norm() < 1e-12 {
            continue;
        }
        // B(τ,τ,τ) enters squared; take the principal root
        let bt = v.inv().sqrt();
        let b = trial_b(bt);
        let bd = build_mf(MfSpec {
            ls: ls.clone(),
            dims: dims.clone(),
            f: &fval,
            r: &one,
            b: &b,
            d: d.clone(),
            s: Some(s),
            comment: format!(
                "gauge: R = 1; F[t t;t t] symmetric with positive off-diagonal (pentagon solution \
                 with E_t = Perron root); B(0,a,a) = d_a; B(t,t,t) = principal root fixed by \
                 Z(beta,0) = Id at point t; d_t = exp(2 pi i {step}/20); S = T S_std T S_std^-1 T"
            ),
        })?;
        if accept(&bd) {
            return Ok(bd);
        }
    }
    Err(Error::Generator("no twist passes for fibonacci".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_solution_is_golden() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let sols = solve_fib_pentagon();
        assert!(sols.iter().any(|s| (s[0] - 1.0 / phi).abs() < 1e-10
            && (s[1].abs() - phi.powf(-0.5)).abs() < 1e-10
            && (s[2] + 1.0 / phi).abs() < 1e-10));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(generate("nope"), Err(Error::Generator(_))));
        assert!(matches!(generate("abelian-0"), Err(Error::Generator(_))));
    }

    #[test]
    fn builtins_pass_gate() {
        for name in BUILT_IN {
            let bd = generate(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(accept(&bd), "{name}");
        }
    }

    #[test]
    fn fibonacci_twist_is_fifth_root() {
        let bd = fibonacci().unwrap();
        let t = bd.d[1];
        assert!((t.powu(5) - ONE).norm() < 1e-9, "{t}");
    }
}
