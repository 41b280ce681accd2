//! Label set, fusion dimensions and their purely combinatorial consequences.
//!
//! `DimTable` holds dim Z_{λ,μ,ν}. The fusion coefficient is the derived view
//! N_{λ,μ}^ν = D(λ,μ,ν†); nothing else stores N.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::report::RelationReport;

/// Labels are indices into the declared order.
pub type Label = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSet {
    names: Vec<String>,
    dagger: Vec<Label>,
    unit: Label,
    index: HashMap<String, Label>,
}

impl LabelSet {
    pub fn new(names: Vec<String>, dagger: Vec<Label>, unit: Label) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::LabelSet("empty label set".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, s) in names.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::LabelSet(format!("duplicate label {s:?}")));
            }
        }
        if unit >= n {
            return Err(Error::LabelSet("missing unit label".into()));
        }
        if dagger.len() != n || dagger.iter().any(|&x| x >= n) {
            return Err(Error::LabelSet(
                "dagger must map every label into the set".into(),
            ));
        }
        for (i, &x) in dagger.iter().enumerate() {
            if dagger[x] != i {
                return Err(Error::LabelSet(format!(
                    "non-involutive dagger at {:?}",
                    names[i]
                )));
            }
        }
        if dagger[unit] != unit {
            return Err(Error::LabelSet("unit label is not self-dual".into()));
        }
        Ok(LabelSet {
            names,
            dagger,
            unit,
            index,
        })
    }

    /// Build from names plus a name→name dagger map.
    pub fn from_names(
        names: Vec<String>,
        dagger: &BTreeMap<String, String>,
        unit: &str,
    ) -> Result<Self> {
        let pos: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut dg = Vec::with_capacity(names.len());
        for s in &names {
            let t = dagger
                .get(s)
                .ok_or_else(|| Error::LabelSet(format!("dagger missing for {s:?}")))?;
            dg.push(
                *pos.get(t.as_str())
                    .ok_or_else(|| Error::UnknownLabel(t.clone()))?,
            );
        }
        for k in dagger.keys() {
            if !pos.contains_key(k.as_str()) {
                return Err(Error::UnknownLabel(k.clone()));
            }
        }
        let u = *pos
            .get(unit)
            .ok_or_else(|| Error::LabelSet("missing unit label".into()))?;
        LabelSet::new(names, dg, u)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, x: Label) -> Label {
        self.dagger[x]
    }

    pub fn name(&self, x: Label) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<Label> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn labels(&self) -> std::ops::Range<Label> {
        0..self.names.len()
    }

    pub fn tuple_names(&self, t: &[Label]) -> Vec<String> {
        t.iter().map(|&x| self.names[x].clone()).collect()
    }
}

/// dual by name; errors with "label not in Λ" for unknown names.
pub fn dual(ls: &LabelSet, x: &str) -> Result<String> {
    let i = ls.index(x)?;
    Ok(ls.name(ls.dual(i)).to_string())
}

/// dim Z_{λ,μ,ν} for all triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable {
    n: usize,
    data: Vec<u32>,
}

impl DimTable {
    pub fn zeros(n: usize) -> Self {
        DimTable {
            n,
            data: vec![0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(Label, Label, Label) -> u32) -> Self {
        let mut t = DimTable::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t.data[(a * n + b) * n + c] = f(a, b, c);
                }
            }
        }
        t
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: Label, b: Label, c: Label) -> usize {
        self.data[(a * self.n + b) * self.n + c] as usize
    }

    pub fn set(&mut self, a: Label, b: Label, c: Label, v: u32) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    /// Set a value on the whole orbit under cyclic rotation and swap.
    pub fn set_symmetric(&mut self, a: Label, b: Label, c: Label, v: u32) {
        for (x, y, z) in [
            (a, b, c),
            (b, c, a),
            (c, a, b),
            (a, c, b),
            (c, b, a),
            (b, a, c),
        ] {
            self.set(x, y, z, v);
        }
    }

    /// Nonzero entries in lexicographic order.
    pub fn nonzero(&self) -> Vec<(Label, Label, Label, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.data[(a * n + b) * n + c];
                    if v > 0 {
                        out.push((a, b, c, v));
                    }
                }
            }
        }
        out
    }
}

pub fn dim_triple(dt: &DimTable, l: Label, m: Label, n: Label) -> usize {
    dt.get(l, m, n)
}

/// N^λ with N^λ_{μ,ν} = D(λ,μ,ν†).
pub fn fusion_matrix(ls: &LabelSet, dt: &DimTable, l: Label) -> Vec<Vec<i64>> {
    let n = ls.len();
    (0..n)
        .map(|m| (0..n).map(|v| dt.get(l, m, ls.dual(v)) as i64).collect())
        .collect()
}

pub fn fusion_matrices(ls: &LabelSet, dt: &DimTable) -> Vec<Vec<Vec<i64>>> {
    ls.labels().map(|l| fusion_matrix(ls, dt, l)).collect()
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Both sides of the flip count: Σ_ν D(ν,μ,λ)D(ν†,κ,ξ) and Σ_ν̃ D(ν̃,λ,κ)D(ν̃†,ξ,μ).
pub fn flip_dims(
    ls: &LabelSet,
    dt: &DimTable,
    mu: Label,
    xi: Label,
    lam: Label,
    ka: Label,
) -> (usize, usize) {
    let lhs = ls
        .labels()
        .map(|nu| dt.get(nu, mu, lam) * dt.get(ls.dual(nu), ka, xi))
        .sum();
    let rhs = ls
        .labels()
        .map(|nt| dt.get(nt, lam, ka) * dt.get(ls.dual(nt), xi, mu))
        .sum();
    (lhs, rhs)
}

pub fn check_flip_dim_consistency(
    ls: &LabelSet,
    dt: &DimTable,
    mu: Label,
    xi: Label,
    lam: Label,
    ka: Label,
) -> bool {
    let (a, b) = flip_dims(ls, dt, mu, xi, lam, ka);
    a == b
}

/// Which fixed pants decomposition the dimension count is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PantsTree {
    /// Handles first, then boundary legs, left to right.
    Caterpillar,
    /// Boundary legs first (rotated start), handles hang off as pendant tori.
    Pendant,
}

fn torus_one(ls: &LabelSet, dt: &DimTable, y: Label) -> u64 {
    ls.labels().map(|a| dt.get(y, a, ls.dual(a)) as u64).sum()
}

/// Dimension of Z on a genus-g surface with the given boundary labels.
pub fn verlinde_dim(ls: &LabelSet, dt: &DimTable, genus: usize, boundary: &[Label]) -> u64 {
    verlinde_dim_with(ls, dt, genus, boundary, PantsTree::Caterpillar)
}

pub fn verlinde_dim_with(
    ls: &LabelSet,
    dt: &DimTable,
    genus: usize,
    boundary: &[Label],
    tree: PantsTree,
) -> u64 {
    let u = ls.unit();
    // Unstable surfaces come straight from the small-sphere axioms.
    match (genus, boundary.len()) {
        (0, 0) => return 1,
        (0, 1) => return (boundary[0] == u) as u64,
        (0, 2) => return (boundary[1] == ls.dual(boundary[0])) as u64,
        (1, 0) => return ls.len() as u64,
        _ => {}
    }
    match tree {
        PantsTree::Caterpillar => caterpillar(ls, dt, genus, boundary),
        PantsTree::Pendant => pendant(ls, dt, genus, boundary),
    }
}

// w[y] counts labelings of everything to the left of an open cut labeled y.
fn caterpillar(ls: &LabelSet, dt: &DimTable, genus: usize, boundary: &[Label]) -> u64 {
    let n = ls.len();
    let dl = |x| ls.dual(x);
    let (mut w, legs): (Vec<u64>, &[Label]) = if genus == 0 {
        let w = (0..n)
            .map(|y| dt.get(boundary[0], boundary[1], y) as u64)
            .collect();
        (w, &boundary[2..])
    } else {
        ((0..n).map(|y| torus_one(ls, dt, y)).collect(), boundary)
    };
    let handle = |w: &[u64]| -> Vec<u64> {
        (0..n)
            .map(|y| {
                let mut s = 0u64;
                for (z, &wz) in w.iter().enumerate() {
                    if wz == 0 {
                        continue;
                    }
                    for a in 0..n {
                        for b in 0..n {
                            s += wz * (dt.get(dl(z), a, b) * dt.get(dl(a), dl(b), y)) as u64;
                        }
                    }
                }
                s
            })
            .collect()
    };
    // a closed surface spends its last genus on the capping torus
    let handles = if legs.is_empty() {
        genus.saturating_sub(2)
    } else {
        genus.saturating_sub(1)
    };
    for _ in 0..handles {
        w = handle(&w);
    }
    if legs.is_empty() {
        // close off against a final one-holed torus
        return (0..n).map(|z| w[z] * torus_one(ls, dt, dl(z))).sum();
    }
    let (last, mid) = legs.split_last().unwrap();
    for &l in mid {
        w = (0..n)
            .map(|y| (0..n).map(|z| w[z] * dt.get(dl(z), l, y) as u64).sum())
            .collect();
    }
    w[*last]
}

fn pendant(ls: &LabelSet, dt: &DimTable, genus: usize, boundary: &[Label]) -> u64 {
    let n = ls.len();
    let dl = |x| ls.dual(x);
    if boundary.is_empty() {
        if genus == 2 {
            // theta graph: two pants glued along three curves
            let mut s = 0u64;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        s += (dt.get(a, b, c) * dt.get(dl(a), dl(b), dl(c))) as u64;
                    }
                }
            }
            return s;
        }
        // chain of pendant tori closed at both ends
        let mut w: Vec<u64> = (0..n).map(|y| torus_one(ls, dt, y)).collect();
        for _ in 0..genus - 2 {
            w = pendant_step(ls, dt, &w);
        }
        return (0..n).map(|z| w[z] * torus_one(ls, dt, dl(z))).sum();
    }
    // rotate the boundary so the walk starts at the second leg
    let mut legs: Vec<Label> = boundary.to_vec();
    if legs.len() > 1 {
        legs.rotate_left(1);
    }
    let mut w: Vec<u64> = (0..n).map(|z| (z == dl(legs[0])) as u64).collect();
    for &l in &legs[1..] {
        w = (0..n)
            .map(|y| (0..n).map(|z| w[z] * dt.get(dl(z), l, y) as u64).sum())
            .collect();
    }
    if genus == 0 {
        return w[ls.unit()];
    }
    for _ in 0..genus - 1 {
        w = pendant_step(ls, dt, &w);
    }
    (0..n).map(|z| w[z] * torus_one(ls, dt, dl(z))).sum()
}

fn pendant_step(ls: &LabelSet, dt: &DimTable, w: &[u64]) -> Vec<u64> {
    let n = ls.len();
    (0..n)
        .map(|y| {
            let mut s = 0u64;
            for (z, &wz) in w.iter().enumerate() {
                if wz == 0 {
                    continue;
                }
                for a in 0..n {
                    s += wz * dt.get(ls.dual(z), a, y) as u64 * torus_one(ls, dt, ls.dual(a));
                }
            }
            s
        })
        .collect()
}

/// Exact structural checks on (Λ, D): unit axiom, symmetries, N^0 = Id,
/// commuting fusion matrices, and flip-dimension consistency over Λ⁴.
pub fn structural_checks(ls: &LabelSet, dt: &DimTable) -> Vec<RelationReport> {
    let n = ls.len();
    let u = ls.unit();
    let mut out = Vec::new();
    let nm = |t: &[Label]| ls.tuple_names(t);

    if dt.size() != n {
        out.push(RelationReport::flag("dim-table-size", vec![], false));
        return out;
    }
    let mut ok = true;
    for m in 0..n {
        for v in 0..n {
            let want = (v == ls.dual(m)) as usize;
            if dt.get(u, m, v) != want {
                ok = false;
                out.push(RelationReport::flag("unit-dim", nm(&[u, m, v]), false));
            }
        }
    }
    if ok {
        out.push(RelationReport::flag("unit-dim", vec![], true));
    }
    let mut bad = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = dt.get(a, b, c);
                if v != dt.get(b, c, a) || v != dt.get(a, c, b) {
                    bad.push((a, b, c));
                }
            }
        }
    }
    if bad.is_empty() {
        out.push(RelationReport::flag("dim-symmetry", vec![], true));
    }
    for (a, b, c) in bad {
        out.push(RelationReport::flag("dim-symmetry", nm(&[a, b, c]), false));
    }

    let fm = fusion_matrices(ls, dt);
    let id: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    out.push(RelationReport::flag("fusion-unit", nm(&[u]), fm[u] == id));
    for a in 0..n {
        for b in a + 1..n {
            let comm = int_mul(&fm[a], &fm[b]) == int_mul(&fm[b], &fm[a]);
            if !comm {
                out.push(RelationReport::flag("fusion-commute", nm(&[a, b]), false));
            }
        }
    }
    if out.iter().all(|r| r.relation != "fusion-commute") {
        out.push(RelationReport::flag("fusion-commute", vec![], true));
    }

    let mut flip_ok = true;
    for mu in 0..n {
        for xi in 0..n {
            for lam in 0..n {
                for ka in 0..n {
                    if !check_flip_dim_consistency(ls, dt, mu, xi, lam, ka) {
                        flip_ok = false;
                        out.push(RelationReport::flag(
                            "flip-dims",
                            nm(&[mu, xi, lam, ka]),
                            false,
                        ));
                    }
                }
            }
        }
    }
    if flip_ok {
        out.push(RelationReport::flag("flip-dims", vec![], true));
    }
    out
}
