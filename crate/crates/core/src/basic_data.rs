//! The numeric payload of a modular functor: F blocks, R, B, twists d and an
//! optional S, with loading, shape validation and derived tensors.
//!
//! Conventions. R and B arrays act source-first: `M[(i, j)]` is the coefficient
//! of target basis vector j in the image of source basis vector i. So
//! composing R(a,b,c) then R(b,c,a) is the matrix product in that order.
//! An F block `F[μ ξ; λ κ]_{ν,ν̃}` maps Z(ν,μ,λ)⊗Z(ν†,κ,ξ) to
//! Z(ν̃,λ,κ)⊗Z(ν̃†,ξ,μ); its matrix has rows (k,l) and columns (i,j), both
//! lexicographic, exactly as in the interchange document.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label_algebra::{DimTable, Label, LabelSet};
use crate::linalg::{checked_inverse, is_finite, CMat, C64, ZERO};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Four-index block with entry(i,j,k,l) = m[(k·d₃ + l, i·d₁ + j)].
#[derive(Clone, Debug, PartialEq)]
pub struct Block4 {
    pub dims: [usize; 4],
    pub m: CMat,
}

impl Block4 {
    pub fn zeros(dims: [usize; 4]) -> Self {
        Block4 {
            dims,
            m: CMat::zeros(dims[2] * dims[3], dims[0] * dims[1]),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.m[(k * self.dims[3] + l, i * self.dims[1] + j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: C64) {
        self.m[(k * self.dims[3] + l, i * self.dims[1] + j)] = v;
    }

    pub fn is_empty(&self) -> bool {
        self.dims.contains(&0)
    }
}

/// Key of an F block: (μ, ξ, λ, κ, ν, ν̃).
pub type FKey = [Label; 6];

/// [D(ν,μ,λ), D(ν†,κ,ξ), D(ν̃,λ,κ), D(ν̃†,ξ,μ)] for key (μ,ξ,λ,κ,ν,ν̃).
pub fn f_dims(ls: &LabelSet, dt: &DimTable, key: FKey) -> [usize; 4] {
    let [mu, xi, lam, ka, nu, nt] = key;
    [
        dt.get(nu, mu, lam),
        dt.get(ls.dual(nu), ka, xi),
        dt.get(nt, lam, ka),
        dt.get(ls.dual(nt), xi, mu),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasicData {
    pub labels: LabelSet,
    pub dims: DimTable,
    pub f: BTreeMap<FKey, Block4>,
    pub r: BTreeMap<[Label; 3], CMat>,
    pub b: BTreeMap<[Label; 3], CMat>,
    pub d: Vec<C64>,
    pub s: Option<CMat>,
    pub tol: f64,
    pub comment: Option<String>,
}

impl BasicData {
    /// Dimensions of the four spaces an F block connects.
    pub fn f_dims(&self, key: FKey) -> [usize; 4] {
        f_dims(&self.labels, &self.dims, key)
    }

    /// The F block, zero-filled when absent from storage.
    pub fn f_block(
        &self,
        mu: Label,
        xi: Label,
        lam: Label,
        ka: Label,
        nu: Label,
        nt: Label,
    ) -> Block4 {
        let key = [mu, xi, lam, ka, nu, nt];
        match self.f.get(&key) {
            Some(b) => b.clone(),
            None => Block4::zeros(self.f_dims(key)),
        }
    }

    pub fn f_ref(&self, key: FKey) -> Option<&Block4> {
        self.f.get(&key)
    }

    fn triple(&self, map: &BTreeMap<[Label; 3], CMat>, t: [Label; 3]) -> CMat {
        match map.get(&t) {
            Some(m) => m.clone(),
            None => {
                let n = self.dims.get(t[0], t[1], t[2]);
                CMat::zeros(n, n)
            }
        }
    }

    /// R(a,b,c): Z(a,b,c) → Z(b,c,a).
    pub fn r(&self, a: Label, b: Label, c: Label) -> CMat {
        self.triple(&self.r, [a, b, c])
    }

    /// B(a,b,c): Z(a,b,c) → Z(a,c,b).
    pub fn b(&self, a: Label, b: Label, c: Label) -> CMat {
        self.triple(&self.b, [a, b, c])
    }

    /// R²(a,b,c) = R(a,b,c) then R(b,c,a): Z(a,b,c) → Z(c,a,b).
    pub fn r2(&self, a: Label, b: Label, c: Label) -> CMat {
        self.r(a, b, c) * self.r(b, c, a)
    }

    /// Full cyclic orbit R³; `Some(s)` when it equals s·Id within tol.
    pub fn r_cubed_scalar(&self, a: Label, b: Label, c: Label) -> Option<C64> {
        let m = self.r2(a, b, c) * self.r(c, a, b);
        if m.nrows() == 0 {
            return None;
        }
        let s = m[(0, 0)];
        let off = crate::linalg::max_diff(&m, &CMat::identity(m.nrows(), m.nrows()).map(|z| z * s));
        (off < self.tol).then_some(s)
    }

    /// E_λ, the reciprocal of the unit-channel entry of F[λ λ†; λ† λ]_{0,0}.
    pub fn e_scalar(&self, lam: Label) -> Result<C64> {
        let ls = &self.labels;
        let u = ls.unit();
        let ld = ls.dual(lam);
        let blk = self.f_block(lam, ld, ld, lam, u, u);
        if blk.dims != [1, 1, 1, 1] {
            return Err(Error::Internal(format!(
                "unit F block at {} has dims {:?}",
                ls.name(lam),
                blk.dims
            )));
        }
        let f00 = blk.get(0, 0, 0, 0);
        if f00.norm() <= self.tol || f00.norm().recip() <= self.tol || !is_finite(f00) {
            return Err(Error::VanishingE(ls.name(lam).to_string()));
        }
        Ok(f00.inv())
    }

    /// Twisted F block F̃ = (BR² ⊗ Id) F (Id ⊗ BR), with
    /// F̃_{ki}^{jm} = Σ R(κ,ν†,ξ)_{ip} B(ν†,ξ,κ)_{pr} R²(ν̃,λ,κ)_{sw} B(κ,ν̃,λ)_{wj} F_{kr}^{sm}.
    /// Index spaces: k ∈ Z(ν,μ,λ), i ∈ Z(κ,ν†,ξ), j ∈ Z(κ,λ,ν̃), m ∈ Z(ν̃†,ξ,μ).
    /// The result stores entry(k,i,j,m) in the Block4 layout.
    pub fn twisted_f_block(
        &self,
        mu: Label,
        xi: Label,
        lam: Label,
        ka: Label,
        nu: Label,
        nt: Label,
    ) -> Block4 {
        let ls = &self.labels;
        let nud = ls.dual(nu);
        let f = self.f_block(mu, xi, lam, ka, nu, nt);
        let [dk, dr, ds, dm] = f.dims;
        // Id ⊗ BR on the second input factor: (i → r)
        let br = self.r(ka, nud, xi) * self.b(nud, xi, ka);
        // BR² on the first output factor: (s → j)
        let r2b = self.r2(nt, lam, ka) * self.b(ka, nt, lam);
        let di = br.nrows();
        let dj = r2b.ncols();
        let mut out = Block4::zeros([dk, di, dj, dm]);
        if out.is_empty() || f.is_empty() || br.ncols() != dr || r2b.nrows() != ds {
            return out;
        }
        for k in 0..dk {
            for i in 0..di {
                for j in 0..dj {
                    for m in 0..dm {
                        let mut acc = ZERO;
                        for r in 0..dr {
                            let a = br[(i, r)];
                            if a == ZERO {
                                continue;
                            }
                            for s in 0..ds {
                                acc += a * r2b[(s, j)] * f.get(k, r, s, m);
                            }
                        }
                        out.set(k, i, j, m, acc);
                    }
                }
            }
        }
        out
    }

    /// The full F map of a quadruple, rows over (ν̃,k,l), columns over (ν,i,j).
    pub fn assembled_f(&self, mu: Label, xi: Label, lam: Label, ka: Label) -> CMat {
        let n = self.labels.len();
        let mut cols = Vec::new();
        let mut rows = Vec::new();
        for nu in 0..n {
            let d = self.f_dims([mu, xi, lam, ka, nu, 0]);
            cols.push(d[0] * d[1]);
        }
        for nt in 0..n {
            let d = self.f_dims([mu, xi, lam, ka, 0, nt]);
            rows.push(d[2] * d[3]);
        }
        let offset = |v: &[usize]| {
            let mut o = vec![0; v.len()];
            for i in 1..v.len() {
                o[i] = o[i - 1] + v[i - 1];
            }
            o
        };
        let (co, ro) = (offset(&cols), offset(&rows));
        let mut m = CMat::zeros(rows.iter().sum(), cols.iter().sum());
        for ((bmu, bxi, blam, bka, nu, nt), blk) in self
            .f
            .iter()
            .map(|(k, v)| ((k[0], k[1], k[2], k[3], k[4], k[5]), v))
        {
            if (bmu, bxi, blam, bka) != (mu, xi, lam, ka) {
                continue;
            }
            for r in 0..blk.m.nrows() {
                for c in 0..blk.m.ncols() {
                    m[(ro[nt] + r, co[nu] + c)] = blk.m[(r, c)];
                }
            }
        }
        m
    }

    pub fn twist(&self, l: Label) -> C64 {
        self.d[l]
    }

    /// T(λ): diagonal twists on ⊕_μ Z_{λ,μ,μ†}, one entry per basis vector.
    pub fn torus_summands(&self, lam: Label) -> Vec<(Label, usize)> {
        let ls = &self.labels;
        let mut out = Vec::new();
        for mu in ls.labels() {
            for i in 0..self.dims.get(lam, mu, ls.dual(mu)) {
                out.push((mu, i));
            }
        }
        out
    }

    /// Shape and value checks; relation checks are not run here.
    pub fn validate(&self) -> Result<()> {
        let ls = &self.labels;
        let n = ls.len();
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Shape {
                tensor: "tol".into(),
                expected: "positive finite".into(),
                found: self.tol.to_string(),
            });
        }
        if self.dims.size() != n {
            return Err(Error::Shape {
                tensor: "dims".into(),
                expected: format!("{n} labels"),
                found: self.dims.size().to_string(),
            });
        }
        if self.d.len() != n {
            return Err(Error::Shape {
                tensor: "d".into(),
                expected: n.to_string(),
                found: self.d.len().to_string(),
            });
        }
        for (l, &z) in self.d.iter().enumerate() {
            if !is_finite(z) {
                return Err(Error::NonFinite(format!("d[{}]", ls.name(l))));
            }
            if z.norm() == 0.0 {
                return Err(Error::ZeroTwist(ls.name(l).to_string()));
            }
        }
        for (name, map) in [("R", &self.r), ("B", &self.b)] {
            for (&[a, bb, c], m) in map {
                let dim = self.dims.get(a, bb, c);
                let tname = format!("{name}({},{},{})", ls.name(a), ls.name(bb), ls.name(c));
                if m.shape() != (dim, dim) || dim == 0 {
                    return Err(Error::Shape {
                        tensor: tname,
                        expected: format!("{dim}x{dim}"),
                        found: format!("{}x{}", m.nrows(), m.ncols()),
                    });
                }
                if !m.iter().all(|z| is_finite(*z)) {
                    return Err(Error::NonFinite(tname));
                }
                if checked_inverse(m, 10.0 * self.tol.max(1e-12)).is_none() {
                    return Err(Error::Singular(tname));
                }
            }
            for (a, bb, c, dim) in self.dims.nonzero() {
                if !map.contains_key(&[a, bb, c]) {
                    return Err(Error::Shape {
                        tensor: format!("{name}({},{},{})", ls.name(a), ls.name(bb), ls.name(c)),
                        expected: format!("{dim}x{dim}"),
                        found: "missing".into(),
                    });
                }
            }
        }
        for (&key, blk) in &self.f {
            let want = self.f_dims(key);
            let tname = format!(
                "F[{} {}; {} {}]_{{{},{}}}",
                ls.name(key[0]),
                ls.name(key[1]),
                ls.name(key[2]),
                ls.name(key[3]),
                ls.name(key[4]),
                ls.name(key[5])
            );
            let shape = (want[2] * want[3], want[0] * want[1]);
            if blk.dims != want || blk.m.shape() != shape || want.contains(&0) {
                return Err(Error::Shape {
                    tensor: tname,
                    expected: format!("{}x{}", shape.0, shape.1),
                    found: format!("{}x{}", blk.m.nrows(), blk.m.ncols()),
                });
            }
            if !blk.m.iter().all(|z| is_finite(*z)) {
                return Err(Error::NonFinite(tname));
            }
        }
        if let Some(s) = &self.s {
            if s.shape() != (n, n) {
                return Err(Error::Shape {
                    tensor: "S".into(),
                    expected: format!("{n}x{n}"),
                    found: format!("{}x{}", s.nrows(), s.ncols()),
                });
            }
            if !s.iter().all(|z| is_finite(*z)) {
                return Err(Error::NonFinite("S".into()));
            }
            if checked_inverse(s, 10.0 * self.tol).is_none() {
                return Err(Error::Singular("S".into()));
            }
        }
        Ok(())
    }

    /// Re-express everything in a new basis ζ'_a = Σ_b G_{ab} ζ_b of the
    /// single space Z(t). R, B and every F block touching Z(t) change covariantly.
    pub fn change_basis(&self, t: [Label; 3], g: &CMat) -> Result<BasicData> {
        let dim = self.dims.get(t[0], t[1], t[2]);
        if g.shape() != (dim, dim) {
            return Err(Error::Shape {
                tensor: "basis change".into(),
                expected: format!("{dim}x{dim}"),
                found: format!("{}x{}", g.nrows(), g.ncols()),
            });
        }
        let ginv =
            checked_inverse(g, 1e-8).ok_or_else(|| Error::Singular("basis change".into()))?;
        let on = |s: [Label; 3]| -> (CMat, CMat) {
            let n = self.dims.get(s[0], s[1], s[2]);
            if s == t {
                (g.clone(), ginv.clone())
            } else {
                (CMat::identity(n, n), CMat::identity(n, n))
            }
        };
        let mut out = self.clone();
        for (map, rot) in [(&mut out.r, true), (&mut out.b, false)] {
            for (&[a, b, c], m) in map.iter_mut() {
                let target = if rot { [b, c, a] } else { [a, c, b] };
                let (gs, _) = on([a, b, c]);
                let (_, ht) = on(target);
                *m = gs * &*m * ht;
            }
        }
        let ls = &self.labels;
        for (&[mu, xi, lam, ka, nu, nt], blk) in out.f.iter_mut() {
            let (g1, _) = on([nu, mu, lam]);
            let (g2, _) = on([ls.dual(nu), ka, xi]);
            let (_, h1) = on([nt, lam, ka]);
            let (_, h2) = on([ls.dual(nt), xi, mu]);
            // stored matrix is target × source, the transpose of the source-first array
            let src = g1.kronecker(&g2);
            let tgt = h1.kronecker(&h2);
            blk.m = tgt.transpose() * &blk.m * src.transpose();
        }
        Ok(out)
    }

    pub fn with_s(mut self, s: Option<CMat>) -> Self {
        self.s = s;
        self
    }
}

// ---------------------------------------------------------------------------
// Interchange document

type JsonC = [f64; 2];
type JsonMat = Vec<Vec<JsonC>>;

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct Doc {
    labels: Vec<String>,
    dagger: BTreeMap<String, String>,
    unit: String,
    dims: Vec<(String, String, String, u32)>,
    #[serde(rename = "F")]
    f: Vec<FDoc>,
    #[serde(rename = "R")]
    r: Vec<TripleDoc>,
    #[serde(rename = "B")]
    b: Vec<TripleDoc>,
    d: BTreeMap<String, JsonC>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    s: Option<JsonMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct FDoc {
    quad: [String; 4],
    nu: String,
    nutilde: String,
    matrix: JsonMat,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct TripleDoc {
    triple: [String; 3],
    matrix: JsonMat,
}

fn mat_from_json(tensor: &str, rows: &JsonMat) -> Result<CMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Shape {
            tensor: tensor.into(),
            expected: "rectangular matrix".into(),
            found: "ragged rows".into(),
        });
    }
    Ok(CMat::from_fn(nr, nc, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn mat_to_json(m: &CMat) -> JsonMat {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

pub fn load<R: Read>(source: R) -> Result<BasicData> {
    let doc: Doc = serde_json::from_reader(source).map_err(parse_err)?;
    from_doc(doc)
}

pub fn load_str(s: &str) -> Result<BasicData> {
    let doc: Doc = serde_json::from_str(s).map_err(parse_err)?;
    from_doc(doc)
}

fn from_doc(doc: Doc) -> Result<BasicData> {
    let ls = LabelSet::from_names(doc.labels, &doc.dagger, &doc.unit)?;
    let n = ls.len();
    let mut dims = DimTable::zeros(n);
    let mut seen = HashSet::new();
    for (a, b, c, v) in &doc.dims {
        let t = [ls.index(a)?, ls.index(b)?, ls.index(c)?];
        if !seen.insert(t) {
            return Err(Error::Shape {
                tensor: format!("dims({a},{b},{c})"),
                expected: "one entry".into(),
                found: "duplicate".into(),
            });
        }
        dims.set(t[0], t[1], t[2], *v);
    }
    let mut f = BTreeMap::new();
    for e in &doc.f {
        let key = [
            ls.index(&e.quad[0])?,
            ls.index(&e.quad[1])?,
            ls.index(&e.quad[2])?,
            ls.index(&e.quad[3])?,
            ls.index(&e.nu)?,
            ls.index(&e.nutilde)?,
        ];
        let name = format!("F[{:?}]_{{{},{}}}", e.quad, e.nu, e.nutilde);
        let m = mat_from_json(&name, &e.matrix)?;
        let want = f_dims(&ls, &dims, key);
        if m.shape() != (want[2] * want[3], want[0] * want[1]) {
            return Err(Error::Shape {
                tensor: name,
                expected: format!("{}x{}", want[2] * want[3], want[0] * want[1]),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        if f.insert(key, Block4 { dims: want, m }).is_some() {
            return Err(Error::Shape {
                tensor: name,
                expected: "one block".into(),
                found: "duplicate".into(),
            });
        }
    }
    let triples = |list: &Vec<TripleDoc>, which: &str| -> Result<BTreeMap<[Label; 3], CMat>> {
        let mut out = BTreeMap::new();
        for e in list {
            let t = [
                ls.index(&e.triple[0])?,
                ls.index(&e.triple[1])?,
                ls.index(&e.triple[2])?,
            ];
            let name = format!("{which}({},{},{})", e.triple[0], e.triple[1], e.triple[2]);
            let m = mat_from_json(&name, &e.matrix)?;
            if out.insert(t, m).is_some() {
                return Err(Error::Shape {
                    tensor: name,
                    expected: "one matrix".into(),
                    found: "duplicate".into(),
                });
            }
        }
        Ok(out)
    };
    let r = triples(&doc.r, "R")?;
    let b = triples(&doc.b, "B")?;
    for k in doc.d.keys() {
        ls.index(k)?;
    }
    let mut d = Vec::with_capacity(n);
    for l in ls.labels() {
        let z = doc.d.get(ls.name(l)).ok_or_else(|| Error::Shape {
            tensor: "d".into(),
            expected: format!("entry for {}", ls.name(l)),
            found: "missing".into(),
        })?;
        d.push(C64::new(z[0], z[1]));
    }
    let s = doc.s.as_ref().map(|m| mat_from_json("S", m)).transpose()?;
    let bd = BasicData {
        labels: ls,
        dims,
        f,
        r,
        b,
        d,
        s,
        tol: doc.tol.unwrap_or(DEFAULT_TOL),
        comment: doc.comment,
    };
    bd.validate()?;
    Ok(bd)
}

fn to_doc(bd: &BasicData) -> Doc {
    let ls = &bd.labels;
    let nm = |x: Label| ls.name(x).to_string();
    Doc {
        labels: ls.names().to_vec(),
        dagger: ls.labels().map(|l| (nm(l), nm(ls.dual(l)))).collect(),
        unit: nm(ls.unit()),
        dims: bd
            .dims
            .nonzero()
            .into_iter()
            .map(|(a, b, c, v)| (nm(a), nm(b), nm(c), v))
            .collect(),
        f: bd
            .f
            .iter()
            .map(|(k, blk)| FDoc {
                quad: [nm(k[0]), nm(k[1]), nm(k[2]), nm(k[3])],
                nu: nm(k[4]),
                nutilde: nm(k[5]),
                matrix: mat_to_json(&blk.m),
            })
            .collect(),
        r: triple_docs(ls, &bd.r),
        b: triple_docs(ls, &bd.b),
        d: ls
            .labels()
            .map(|l| (nm(l), [bd.d[l].re, bd.d[l].im]))
            .collect(),
        s: bd.s.as_ref().map(mat_to_json),
        tol: (bd.tol != DEFAULT_TOL).then_some(bd.tol),
        comment: bd.comment.clone(),
    }
}

fn triple_docs(ls: &LabelSet, map: &BTreeMap<[Label; 3], CMat>) -> Vec<TripleDoc> {
    map.iter()
        .map(|(t, m)| TripleDoc {
            triple: [
                ls.name(t[0]).to_string(),
                ls.name(t[1]).to_string(),
                ls.name(t[2]).to_string(),
            ],
            matrix: mat_to_json(m),
        })
        .collect()
}

pub fn to_json_string(bd: &BasicData) -> String {
    serde_json::to_string_pretty(&to_doc(bd)).expect("document serialization cannot fail")
}

/// Matrix in the document encoding, for emitting reconstructed S(λ).
pub fn matrix_to_json_value(m: &CMat) -> serde_json::Value {
    serde_json::to_value(mat_to_json(m)).expect("matrix serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn trivial_doc() -> &'static str {
        r#"{"labels":["0"],"dagger":{"0":"0"},"unit":"0","dims":[["0","0","0",1]],
            "F":[{"quad":["0","0","0","0"],"nu":"0","nutilde":"0","matrix":[[[1,0]]]}],
            "R":[{"triple":["0","0","0"],"matrix":[[[1,0]]]}],
            "B":[{"triple":["0","0","0"],"matrix":[[[1,0]]]}],
            "d":{"0":[1,0]},"S":[[[1,0]]]}"#
    }

    #[test]
    fn trivial_loads() {
        let bd = load_str(trivial_doc()).unwrap();
        assert_eq!(bd.labels.len(), 1);
        assert_eq!(bd.e_scalar(0).unwrap(), ONE);
        assert_eq!(bd.twisted_f_block(0, 0, 0, 0, 0, 0).get(0, 0, 0, 0), ONE);
        assert_eq!(bd.tol, DEFAULT_TOL);
    }

    #[test]
    fn round_trip() {
        let bd = load_str(trivial_doc()).unwrap();
        let again = load_str(&to_json_string(&bd)).unwrap();
        assert_eq!(bd, again);
    }

    #[test]
    fn zero_twist_rejected() {
        let doc = trivial_doc().replace(r#""d":{"0":[1,0]}"#, r#""d":{"0":[0,0]}"#);
        assert!(matches!(load_str(&doc), Err(Error::ZeroTwist(_))));
    }

    #[test]
    fn unknown_key_rejected() {
        let doc = trivial_doc().replace(r#""unit":"0""#, r#""unit":"0","extra":1"#);
        assert!(matches!(load_str(&doc), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_error_has_position() {
        match load_str("{\n  \"labels\": [\"0\",\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_shape_named() {
        let doc = trivial_doc().replace(
            r#""R":[{"triple":["0","0","0"],"matrix":[[[1,0]]]}]"#,
            r#""R":[{"triple":["0","0","0"],"matrix":[[[1,0],[0,0]]]}]"#,
        );
        match load_str(&doc) {
            Err(Error::Shape { tensor, .. }) => assert!(tensor.starts_with("R(")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_dagger_and_unit() {
        let doc = trivial_doc().replace(r#""unit":"0""#, r#""unit":"x""#);
        assert!(matches!(load_str(&doc), Err(Error::LabelSet(_))));
        let doc = trivial_doc()
            .replace(r#""labels":["0"]"#, r#""labels":["0","a","b"]"#)
            .replace(
                r#""dagger":{"0":"0"}"#,
                r#""dagger":{"0":"0","a":"b","b":"b"}"#,
            );
        assert!(matches!(load_str(&doc), Err(Error::LabelSet(_))));
    }
}
