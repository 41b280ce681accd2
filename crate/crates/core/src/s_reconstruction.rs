//! Genus-one S(λ) from genus-zero data, the torus mapping-class relation,
//! and framed composition with Wall's cocycle in the symplectic plane.

use itertools::Itertools;

use crate::basic_data::BasicData;
use crate::curve_operators::{
    c_from_characters, c_matrix, cof_block, curve_op_torus, dehn_coefficients, joint_characters,
    CofVariant, TwistPower,
};
use crate::error::{Error, Result};
use crate::label_algebra::Label;
use crate::linalg::{
    best_scalar, checked_inverse, diag, matrix_power, max_diff, max_norm, nan_max, CMat, C64,
};
use crate::report::RelationReport;

// ---------------------------------------------------------------------------
// Wall cocycle

/// ω(x, y) = xᵀJy with J = [[0,−1],[1,0]].
pub fn omega(x: [i64; 2], y: [i64; 2]) -> i64 {
    x[1] * y[0] - x[0] * y[1]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Signature of q(x₁,x₂,x₃) = ω(x₁,x₂) on {xᵢ ∈ Lᵢ : x₁+x₂+x₃ = 0}.
pub fn wall_sigma(l1: [i64; 2], l2: [i64; 2], l3: [i64; 2]) -> Result<i8> {
    for l in [l1, l2, l3] {
        if l == [0, 0] {
            return Err(Error::Internal(
                "zero vector is not a Lagrangian line".into(),
            ));
        }
    }
    let (w12, w23, w31) = (omega(l1, l2), omega(l2, l3), omega(l3, l1));
    if w12 == 0 || w23 == 0 || w31 == 0 {
        // two lines coincide: the space is still one-dimensional but q vanishes on it
        return Ok(0);
    }
    // x_i = a_i v_i with a_1 v_1 + a_2 v_2 + a_3 v_3 = 0 gives
    // (a_1, a_2, a_3) ∝ (ω(v2,v3), ω(v3,v1), ω(v1,v2)); then q = a_1 a_2 ω(v1,v2)
    let q = (w23 as i128) * (w31 as i128) * (w12 as i128);
    Ok(q.signum() as i8)
}

/// A mapping class of the torus with a framing integer and Lagrangian
/// bookkeeping: the line it departs from and the line it lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FramedMapClass {
    pub m: [[i64; 2]; 2],
    pub framing: i64,
    pub source: [i64; 2],
    pub target: [i64; 2],
}

fn primitive(v: [i64; 2]) -> bool {
    gcd(v[0], v[1]) == 1
}

impl FramedMapClass {
    pub fn new(m: [[i64; 2]; 2], framing: i64, source: [i64; 2], target: [i64; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
            return Err(Error::Internal(
                "mapping class matrix must have determinant 1".into(),
            ));
        }
        if !primitive(source) || !primitive(target) {
            return Err(Error::Internal("Lagrangian line must be primitive".into()));
        }
        Ok(FramedMapClass {
            m,
            framing,
            source,
            target,
        })
    }

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        apply(self.m, v)
    }
}

pub fn apply(m: [[i64; 2]; 2], v: [i64; 2]) -> [i64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut o = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

/// Primitive vectors spanning the same line.
pub fn same_line(a: [i64; 2], b: [i64; 2]) -> bool {
    a == b || a == [-b[0], -b[1]]
}

/// f₂f₁ = (f₂f₁, s₂ + s₁ − σ((f₂f₁)L₁, f₂L₂, L₃)) with L₁ = f₁'s source,
/// L₂ = f₁'s target = f₂'s source and L₃ = f₂'s target.
pub fn compose_framed(f2: &FramedMapClass, f1: &FramedMapClass) -> Result<FramedMapClass> {
    if !same_line(f1.target, f2.source) {
        return Err(Error::Internal(format!(
            "framed classes do not compose: {:?} lands on {:?}, next leaves {:?}",
            f1.m, f1.target, f2.source
        )));
    }
    let m = mat_mul(f2.m, f1.m);
    let sigma = wall_sigma(apply(m, f1.source), f2.apply(f2.source), f2.target)?;
    Ok(FramedMapClass {
        m,
        framing: f2.framing + f1.framing - sigma as i64,
        source: f1.source,
        target: f2.target,
    })
}

// ---------------------------------------------------------------------------
// S(λ)

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MainForm {
    /// Σ_{κ'} d_{κ'}⁻¹ d_μ S_{κ'†,0} Σ_{k,m} F̃ R, as the theorem displays it.
    #[default]
    Theorem,
    /// d_ρ Σ_κ c_κ Z(β,κ) d_μ, the chain its proof runs through.
    Proof,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SLambdaResult {
    pub lam: Label,
    pub basis: Vec<(Label, usize)>,
    pub m: CMat,
    pub variant: String,
    /// ‖S(0) − input S‖ when λ = 0 and S is present.
    pub residual: Option<f64>,
}

fn finish(bd: &BasicData, lam: Label, m: CMat, variant: String) -> SLambdaResult {
    let residual = if lam == bd.labels.unit() {
        bd.s.as_ref().map(|s| max_diff(&m, s))
    } else {
        None
    };
    SLambdaResult {
        lam,
        basis: bd.torus_summands(lam),
        m,
        variant,
        residual,
    }
}

/// T(λ) = diag(d_μ) over the basis (μ, i) of ⊕_μ Z_{λ,μ,μ†}.
pub fn t_lambda(bd: &BasicData, lam: Label) -> CMat {
    let v: Vec<C64> = bd
        .torus_summands(lam)
        .iter()
        .map(|&(mu, _)| bd.d[mu])
        .collect();
    diag(&v)
}

/// S_{κ,0} for every κ, read from the document's S.
pub fn s_column_from_doc(bd: &BasicData) -> Result<Vec<C64>> {
    let s = bd.s.as_ref().ok_or(Error::SRequired)?;
    let u = bd.labels.unit();
    Ok(bd.labels.labels().map(|k| s[(k, u)]).collect())
}

/// Theorem form, with S_{κ,0} supplied by the caller.
pub fn s_lambda_theorem(bd: &BasicData, lam: Label, s_column: &[C64]) -> Result<SLambdaResult> {
    let ls = &bd.labels;
    if s_column.len() != ls.len() {
        return Err(Error::Shape {
            tensor: "S column".into(),
            expected: ls.len().to_string(),
            found: s_column.len().to_string(),
        });
    }
    let dim = bd.torus_summands(lam).len();
    let mut m = CMat::zeros(dim, dim);
    for kp in ls.labels() {
        let w = s_column[ls.dual(kp)] / bd.d[kp];
        let blocks = assemble_blocks(bd, lam, |mu, rho| {
            cof_block(bd, lam, kp, mu, rho).map(|z| z * bd.d[mu] * w)
        });
        m += blocks;
    }
    Ok(finish(bd, lam, m, "main/theorem".into()))
}

fn assemble_blocks(bd: &BasicData, lam: Label, f: impl Fn(Label, Label) -> CMat) -> CMat {
    let ls = &bd.labels;
    let mut offs = vec![0usize; ls.len() + 1];
    for mu in ls.labels() {
        offs[mu + 1] = offs[mu] + bd.dims.get(lam, mu, ls.dual(mu));
    }
    let n = offs[ls.len()];
    let mut m = CMat::zeros(n, n);
    for mu in ls.labels() {
        for rho in ls.labels() {
            if offs[mu + 1] == offs[mu] || offs[rho + 1] == offs[rho] {
                continue;
            }
            let blk = f(mu, rho);
            m.view_mut((offs[mu], offs[rho]), (blk.nrows(), blk.ncols()))
                .copy_from(&blk);
        }
    }
    m
}

/// Proof form with explicit expansion coefficients c_κ.
pub fn s_lambda_proof(bd: &BasicData, lam: Label, coef: &[C64], cof: CofVariant) -> SLambdaResult {
    let n = bd.torus_summands(lam).len();
    let mut y = CMat::zeros(n, n);
    for k in bd.labels.labels() {
        y += curve_op_torus(bd, lam, k, cof).m.map(|z| z * coef[k]);
    }
    let t = t_lambda(bd, lam);
    let tag = match cof {
        CofVariant::Statement => "main/proof",
        CofVariant::Proof => "main/proof+cof-proof",
    };
    finish(bd, lam, &t * y * &t, tag.into())
}

/// Either form of Main′. The theorem form needs the S column; the proof
/// form solves d = cC with C from S when present, else from the fusion
/// characters in their canonical order.
pub fn s_lambda_main(
    bd: &BasicData,
    lam: Label,
    s_column: Option<&[C64]>,
    form: MainForm,
    cof: CofVariant,
) -> Result<SLambdaResult> {
    match form {
        MainForm::Theorem => {
            let col = match s_column {
                Some(c) => c.to_vec(),
                None => s_column_from_doc(bd)?,
            };
            s_lambda_theorem(bd, lam, &col)
        }
        MainForm::Proof => {
            let c = c_matrix(bd)?;
            let coef = dehn_coefficients(bd, &c, TwistPower::Twist)?;
            Ok(s_lambda_proof(bd, lam, &coef, cof))
        }
    }
}

/// S(λ) = [T⁻¹ (Σ c̃_κ Z(β,κ)) T⁻¹]⁻¹ with d⁻¹ = c̃C.
pub fn s_from_twist_sandwich(bd: &BasicData, lam: Label, cof: CofVariant) -> Result<SLambdaResult> {
    let c = c_matrix(bd)?;
    let ct = dehn_coefficients(bd, &c, TwistPower::InverseTwist)?;
    let n = bd.torus_summands(lam).len();
    let mut y = CMat::zeros(n, n);
    for k in bd.labels.labels() {
        y += curve_op_torus(bd, lam, k, cof).m.map(|z| z * ct[k]);
    }
    let ti = diag(t_lambda(bd, lam).diagonal().map(|z| z.inv()).as_slice());
    let x = &ti * y * &ti;
    let s = checked_inverse(&x, 1e-6)
        .ok_or_else(|| Error::Singular(format!("sandwich candidate at {}", bd.labels.name(lam))))?;
    Ok(finish(bd, lam, s, "sandwich".into()))
}

/// ‖S·S⁻¹ − Id‖ < 10·tol.
pub fn check_invertible(bd: &BasicData, r: &SLambdaResult) -> RelationReport {
    let res = match r.m.clone().try_inverse() {
        Some(inv) => max_diff(&(&r.m * inv), &CMat::identity(r.m.nrows(), r.m.nrows())),
        None => f64::INFINITY,
    };
    RelationReport::new(
        "s-invertible",
        bd.labels.tuple_names(&[r.lam]),
        res,
        10.0 * bd.tol,
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum McgForm {
    /// (S(λ)T(λ))³ = ρ S(λ)², read literally.
    #[default]
    Literal,
    /// The relation on the images Z(S) = S(λ)⁻¹, Z(T) = T(λ):
    /// (S(λ)⁻¹T)³ = ρ S(λ)⁻².
    MappingClassImage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McgReport {
    pub lam: Label,
    pub rho: C64,
    pub residual: f64,
    pub pass: bool,
}

pub fn mcg_relation_check(
    bd: &BasicData,
    lam: Label,
    s: &CMat,
    form: McgForm,
    tol: f64,
) -> Result<McgReport> {
    let t = t_lambda(bd, lam);
    let base = match form {
        McgForm::Literal => s.clone(),
        McgForm::MappingClassImage => checked_inverse(s, 1e-6)
            .ok_or_else(|| Error::Singular(format!("S({})", bd.labels.name(lam))))?,
    };
    let a = matrix_power(&(&base * &t), 3);
    let b = &base * &base;
    let rho = best_scalar(&a, &b);
    let scale = max_norm(&b);
    let residual = if scale > 0.0 {
        max_diff(&a, &b.map(|z| z * rho)) / scale
    } else {
        f64::INFINITY
    };
    Ok(McgReport {
        lam,
        rho,
        residual,
        pass: residual < tol,
    })
}

/// All per-λ relations pass and share one anomaly ρ.
pub fn mcg_single_rho(reports: &[McgReport], tol: f64) -> (bool, f64) {
    let spread = reports
        .iter()
        .flat_map(|a| reports.iter().map(move |b| (a.rho - b.rho).norm()))
        .fold(0.0, nan_max);
    (reports.iter().all(|r| r.pass) && spread < tol, spread)
}

// ---------------------------------------------------------------------------
// Reconstruction without S

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub s: CMat,
    pub c: CMat,
    /// ‖C(S) − C‖ at the accepted fixed point.
    pub residual: f64,
    pub ess_residual: f64,
    /// Number of self-consistent assignments found (1 when unique).
    pub candidates: usize,
}

/// S(0) from F, R, B and d alone. Each assignment of fusion characters to
/// labels gives C, hence c from d = cC, hence
/// S = T (Σ c_κ Z(β,κ)) T. The assignment is accepted when that S
/// reproduces its own C and satisfies S_{0,0}E_λ = S_{0,λ†}.
pub fn reconstruct_s0(bd: &BasicData) -> Result<Reconstruction> {
    let ls = &bd.labels;
    let n = ls.len();
    let u = ls.unit();
    let ch = joint_characters(bd)?;
    let e: Vec<C64> = ls.labels().map(|l| bd.e_scalar(l)).collect::<Result<_>>()?;
    // the unit column is already known: C_{λ,0} = E_{λ†}
    let unit_char = (0..n)
        .min_by(|&a, &b| {
            let da = (0..n)
                .map(|l| (ch.chars[a][l] - e[ls.dual(l)]).norm())
                .fold(0.0, nan_max);
            let db = (0..n)
                .map(|l| (ch.chars[b][l] - e[ls.dual(l)]).norm())
                .fold(0.0, nan_max);
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let rest: Vec<usize> = (0..n).filter(|&c| c != unit_char).collect();
    let others: Vec<Label> = ls.labels().filter(|&l| l != u).collect();
    let ops: Vec<CMat> = ls
        .labels()
        .map(|k| curve_op_torus(bd, u, k, CofVariant::Statement).m)
        .collect();
    let t = t_lambda(bd, u);
    let mut found: Vec<Reconstruction> = Vec::new();
    let mut best_miss = f64::INFINITY;
    for p in rest.iter().copied().permutations(rest.len()) {
        let mut perm = vec![0; n];
        perm[u] = unit_char;
        for (l, c) in others.iter().zip(&p) {
            perm[*l] = *c;
        }
        let c = c_from_characters(&ch, &perm);
        let Ok(coef) = dehn_coefficients(bd, &c, TwistPower::Twist) else {
            continue;
        };
        let mut y = CMat::zeros(n, n);
        for k in 0..n {
            y += ops[k].map(|z| z * coef[k]);
        }
        let s = &t * y * &t;
        if (0..n).any(|m| s[(m, u)].norm() <= bd.tol) {
            continue;
        }
        let c2 = CMat::from_fn(n, n, |l, m| s[(m, l)] / s[(m, u)]);
        let residual = max_diff(&c2, &c);
        let ess = (0..n)
            .map(|l| (s[(u, u)] * e[l] - s[(u, ls.dual(l))]).norm())
            .fold(0.0, nan_max);
        best_miss = best_miss.min(residual.max(ess));
        if residual < bd.tol && ess < bd.tol && !found.iter().any(|f| max_diff(&f.s, &s) < bd.tol) {
            found.push(Reconstruction {
                s,
                c,
                residual,
                ess_residual: ess,
                candidates: 0,
            });
        }
    }
    match found.len() {
        0 => Err(Error::FixedPoint(format!(
            "no assignment is self-consistent (closest {best_miss:.2e})"
        ))),
        1 => {
            let mut r = found.pop().unwrap();
            r.candidates = 1;
            Ok(r)
        }
        k => Err(Error::FixedPoint(format!(
            "{k} distinct self-consistent S; assignment is ambiguous"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(wall_sigma([1, 0], [1, 0], [1, 0]).unwrap(), 0);
        assert_eq!(wall_sigma([1, 0], [0, 1], [1, 1]).unwrap(), -1);
        assert_eq!(wall_sigma([1, 0], [0, 1], [1, -1]).unwrap(), 1);
        assert_eq!(wall_sigma([1, 0], [0, 1], [0, 1]).unwrap(), 0);
        assert!(wall_sigma([0, 0], [0, 1], [1, 1]).is_err());
    }

    #[test]
    fn sigma_is_antisymmetric_and_cyclic() {
        let (a, b, c) = ([2, 1], [1, 3], [-1, 4]);
        let s = wall_sigma(a, b, c).unwrap();
        assert_eq!(wall_sigma(b, c, a).unwrap(), s);
        assert_eq!(wall_sigma(b, a, c).unwrap(), -s);
    }

    #[test]
    fn framed_identity_composition() {
        let id = [[1, 0], [0, 1]];
        let l = [1, 0];
        let f1 = FramedMapClass::new(id, 3, l, l).unwrap();
        let f2 = FramedMapClass::new(id, -5, l, l).unwrap();
        let g = compose_framed(&f2, &f1).unwrap();
        assert_eq!(g.m, id);
        assert_eq!(g.framing, -2);
    }

    #[test]
    fn framed_generators() {
        // torus S and T with the standard lines
        let s = FramedMapClass::new([[0, -1], [1, 0]], 0, [1, 0], [0, 1]).unwrap();
        let t = FramedMapClass::new([[1, 1], [0, 1]], 0, [0, 1], [1, 1]).unwrap();
        let ts = compose_framed(&t, &s).unwrap();
        assert_eq!(ts.m, [[1, -1], [1, 0]]);
        assert!((-1..=1).contains(&ts.framing));
    }

    #[test]
    fn rejects_bad_classes() {
        assert!(FramedMapClass::new([[2, 0], [0, 1]], 0, [1, 0], [1, 0]).is_err());
        assert!(FramedMapClass::new([[1, 0], [0, 1]], 0, [2, 0], [1, 0]).is_err());
        let a = FramedMapClass::new([[1, 0], [0, 1]], 0, [1, 0], [1, 0]).unwrap();
        let b = FramedMapClass::new([[1, 0], [0, 1]], 0, [0, 1], [1, 0]).unwrap();
        assert!(compose_framed(&b, &a).is_err());
        assert!(compose_framed(&a, &b).is_ok());
    }
}
