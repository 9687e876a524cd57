//! Test-side oracles and generators. Everything here recomputes from raw
//! structure constants with its own dense arithmetic, so it can be used to
//! cross-check the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dgla::dgla::{validate_dgla, Combination};
use dgla::examples::{abelian_dgla, obstruction_toy, permutation_toy, split_toy};
use dgla::graded::GradedMap;
use dgla::rational::{int, Rational};
use dgla::{Dgla, DglaBuilder, GradedVectorSpace, Matrix};
use num_traits::{One, Zero};
use rand::Rng;

pub type Q = Rational;

pub fn q(n: i64) -> Q {
    int(n)
}

pub fn pm(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Dense structure constants: `d[i][j]` is the `e_i` coefficient of `d e_j`,
/// `b[i][j][k]` the `e_k` coefficient of `[e_i, e_j]`.
pub struct Dense {
    pub deg: Vec<i64>,
    pub d: Vec<Vec<Q>>,
    pub b: Vec<Vec<Vec<Q>>>,
}

impl Dense {
    pub fn of(g: &Dgla) -> Self {
        let n = g.dim();
        let deg = (0..n).map(|i| i64::from(g.degree_of(i))).collect();
        let mut d = vec![vec![Q::zero(); n]; n];
        for j in 0..n {
            for (i, c) in g.d_basis(j).into_iter().enumerate() {
                d[i][j] = c;
            }
        }
        let mut b = vec![vec![vec![Q::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(c) = g.bracket_basis(i, j) {
                    for (k, x) in c {
                        b[i][j][*k] = x.clone();
                    }
                }
            }
        }
        Dense { deg, d, b }
    }

    pub fn n(&self) -> usize {
        self.deg.len()
    }

    pub fn br(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let n = self.n();
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for k in 0..n {
                    if !self.b[i][j][k].is_zero() {
                        out[k] += &c * &self.b[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn dv(&self, v: &[Q]) -> Vec<Q> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| &self.d[i][j] * &v[j]).sum()).collect()
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.n()];
        v[i] = Q::one();
        v
    }

    /// The conditions of the definition evaluated on all basis tuples; names
    /// match the library's axiom names.
    pub fn failing_axioms(&self) -> BTreeSet<&'static str> {
        let n = self.n();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.b[i][j][k].is_zero() && self.deg[k] != self.deg[i] + self.deg[j] {
                        out.insert("degree");
                    }
                }
            }
            let dd = self.dv(&self.dv(&self.unit(i)));
            if dd.iter().any(|x| !x.is_zero()) {
                out.insert("d^2=0");
            }
        }
        for i in 0..n {
            for j in 0..n {
                let s = pm(self.deg[i] * self.deg[j]);
                if (0..n).any(|k| !(&self.b[i][j][k] + &s * &self.b[j][i][k]).is_zero()) {
                    out.insert("antisymmetry");
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (p, qd, r) = (self.deg[x], self.deg[y], self.deg[z]);
                    let (ex, ey, ez) = (self.unit(x), self.unit(y), self.unit(z));
                    let t1 = self.br(&ex, &self.br(&ey, &ez));
                    let t2 = self.br(&ey, &self.br(&ez, &ex));
                    let t3 = self.br(&ez, &self.br(&ex, &ey));
                    let (s1, s2, s3) = (pm(p * r), pm(p * qd), pm(qd * r));
                    if (0..n).any(|k| !(&s1 * &t1[k] + &s2 * &t2[k] + &s3 * &t3[k]).is_zero()) {
                        out.insert("jacobi");
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (ex, ey) = (self.unit(x), self.unit(y));
                let lhs = self.dv(&self.br(&ex, &ey));
                let a = self.br(&self.dv(&ex), &ey);
                let b = self.br(&ex, &self.dv(&ey));
                let s = pm(self.deg[x]);
                if (0..n).any(|k| lhs[k] != &a[k] + &s * &b[k]) {
                    out.insert("leibniz");
                }
            }
        }
        out
    }
}

/// Rank of a dense rational matrix (rows of equal length).
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether `a x = b` has a solution (`a` given by rows).
pub fn solvable_q(a: &[Vec<Q>], b: &[Q]) -> bool {
    let aug: Vec<Vec<Q>> = a.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    rank_q(a) == rank_q(&aug)
}

/// Dimension of `H^n` from raw ranks: `dim ker d_n − rank d_{n−1}`.
pub fn cohomology_dim(g: &Dgla, n: i32) -> usize {
    let dense = Dense::of(g);
    let idx = |deg: i32| -> Vec<usize> { (0..g.dim()).filter(|&i| g.degree_of(i) == deg).collect() };
    let (src, tgt, prev) = (idx(n), idx(n + 1), idx(n - 1));
    let dn: Vec<Vec<Q>> = tgt.iter().map(|&i| src.iter().map(|&j| dense.d[i][j].clone()).collect()).collect();
    let dp: Vec<Vec<Q>> = src.iter().map(|&i| prev.iter().map(|&j| dense.d[i][j].clone()).collect()).collect();
    let rn = if src.is_empty() || tgt.is_empty() { 0 } else { rank_q(&dn) };
    let rp = if src.is_empty() || prev.is_empty() { 0 } else { rank_q(&dp) };
    src.len() - rn - rp
}

fn block_of(kind: usize, rng: &mut impl Rng) -> Dgla {
    match kind {
        0 => {
            // a → b with d a = b
            let n = rng.gen_range(0..3);
            DglaBuilder::new().basis("a", n).basis("b", n + 1).d("a", "b", q(1)).build().unwrap()
        }
        1 => abelian_dgla(GradedVectorSpace::line("c", rng.gen_range(0..4)), &Matrix::zeros(1, 1)).unwrap(),
        2 => obstruction_toy(),
        3 => split_toy(),
        _ => DglaBuilder::new()
            .basis("z", 0)
            .basis("x", 1)
            .basis("u", 1)
            .basis("y", 2)
            .bracket("z", "x", &[("x", q(1))])
            .bracket("z", "u", &[("u", q(-1))])
            .bracket("x", "u", &[("y", q(1))])
            .build()
            .unwrap(),
    }
}

/// Direct sum; labels of the `p`-th summand get `p` primes.
pub fn direct_sum(parts: &[Dgla]) -> Dgla {
    let mut b = DglaBuilder::new();
    for (p, g) in parts.iter().enumerate() {
        let name = |i: usize| format!("{}{}", g.label(i), "'".repeat(p));
        for i in 0..g.dim() {
            b = b.basis(&name(i), g.degree_of(i));
        }
        for j in 0..g.dim() {
            for (i, c) in g.d_basis(j).iter().enumerate() {
                if !c.is_zero() {
                    b = b.d(&name(j), &name(i), c.clone());
                }
            }
        }
        for ((i, j), combo) in g.bracket_table() {
            let terms: Vec<(String, Q)> = combo.iter().map(|(k, c)| (name(*k), c.clone())).collect();
            let refs: Vec<(&str, Q)> = terms.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
            b = b.bracket_raw(&name(*i), &name(*j), &refs);
        }
    }
    b.build().unwrap()
}

/// Transports the structure along a degree-preserving invertible `p`
/// (global matrix): `d' = p d p⁻¹`, `[u, v]' = p[p⁻¹u, p⁻¹v]`.
pub fn conjugate(g: &Dgla, p: &Matrix) -> Dgla {
    let pinv = p.inverse().expect("invertible");
    let n = g.dim();
    let dense = Dense::of(g);
    let dm = g.differential().global_matrix();
    let d2 = p.mul(&dm).mul(&pinv);
    let cols: Vec<Vec<Q>> = (0..n).map(|i| pinv.column(i)).collect();
    let mut bracket: BTreeMap<(usize, usize), Combination> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let v = p.mul_vec(&dense.br(&cols[i], &cols[j]));
            let c: Combination = v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            if !c.is_empty() {
                bracket.insert((i, j), c);
            }
        }
    }
    let space = g.space().clone();
    let d = GradedMap::from_global(&space, &space, 1, &d2).unwrap();
    Dgla::new(space, d, bracket).unwrap()
}

/// Random invertible matrix that preserves the grading of `space`.
pub fn random_graded_invertible(space: &GradedVectorSpace, rng: &mut impl Rng) -> Matrix {
    let n = space.dim();
    loop {
        let mut m = Matrix::zeros(n, n);
        for deg in space.support() {
            let r = space.range(deg);
            for a in r.clone() {
                for b in r.clone() {
                    m[(a, b)] = q(rng.gen_range(-2..=2));
                }
            }
        }
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random valid dgla concentrated in degrees `0..=3` with every component
/// of dimension at most 4: a direct sum of small known dglas in a random
/// graded basis.
pub fn random_dgla(rng: &mut impl Rng) -> Dgla {
    loop {
        let count = rng.gen_range(1..=3);
        let parts: Vec<Dgla> = (0..count).map(|_| block_of(rng.gen_range(0..5), rng)).collect();
        let g = direct_sum(&parts);
        if g.space().support().iter().any(|&d| !(0..=3).contains(&d) || g.space().dim_in(d) > 4) {
            continue;
        }
        let p = random_graded_invertible(g.space(), rng);
        let h = conjugate(&g, &p);
        assert!(validate_dgla(&h).is_ok());
        return h;
    }
}

/// The small dglas used across the suites.
pub fn small_examples() -> Vec<(&'static str, Dgla)> {
    vec![
        ("e2", obstruction_toy()),
        ("e3", split_toy()),
        ("perm", permutation_toy()),
        ("abelian-line", abelian_dgla(GradedVectorSpace::line("a", 1), &Matrix::zeros(1, 1)).unwrap()),
        ("abelian-iso", dgla::examples::example_by_name("abelian-iso").unwrap().dgla),
    ]
}

/// Classical Lie algebra cohomology `H^p(L, L)` with adjoint coefficients
/// by brute force on alternating cochains (`c[a][b][k]` structure constants).
pub fn lie_cohomology_adjoint(c: &[Vec<Vec<Q>>], p: usize) -> usize {
    let n = c.len();
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|s: Vec<usize>| {
                    let start = s.last().map_or(0, |&l| l + 1);
                    (start..n).map(move |i| {
                        let mut t = s.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out
    };
    // matrix of δ: C^k → C^{k+1}, cochain coordinates (subset, output index)
    let delta = |k: usize| -> Vec<Vec<Q>> {
        let src = subsets(k);
        let tgt = subsets(k + 1);
        let sidx: BTreeMap<Vec<usize>, usize> = src.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rows = vec![vec![Q::zero(); src.len() * n]; tgt.len() * n];
        // value of cochain f on sorted tuple with sign
        let sorted = |t: &[usize]| -> Option<(Vec<usize>, Q)> {
            let mut v = t.to_vec();
            let mut s = q(1);
            for i in 0..v.len() {
                for j in 0..v.len() - 1 - i {
                    if v[j] > v[j + 1] {
                        v.swap(j, j + 1);
                        s = -s;
                    }
                }
            }
            if v.windows(2).any(|w| w[0] == w[1]) {
                None
            } else {
                Some((v, s))
            }
        };
        for (ti, t) in tgt.iter().enumerate() {
            for out in 0..n {
                let row = ti * n + out;
                // Σ_i (−1)^i [x_i, f(..^i..)]
                for i in 0..=k {
                    let rest: Vec<usize> = t.iter().enumerate().filter(|&(m, _)| m != i).map(|(_, &x)| x).collect();
                    let si = sidx[&rest];
                    for a in 0..n {
                        let coef = &c[t[i]][a][out];
                        if !coef.is_zero() {
                            rows[row][si * n + a] += pm(i as i64) * coef;
                        }
                    }
                }
                // Σ_{i<j} (−1)^{i+j} f([x_i, x_j], ..^i..^j..)
                for i in 0..=k {
                    for j in i + 1..=k {
                        let rest: Vec<usize> =
                            t.iter().enumerate().filter(|&(m, _)| m != i && m != j).map(|(_, &x)| x).collect();
                        for (m, coef) in c[t[i]][t[j]].iter().enumerate() {
                            if coef.is_zero() {
                                continue;
                            }
                            let mut tup = vec![m];
                            tup.extend(&rest);
                            if let Some((s, sg)) = sorted(&tup) {
                                let si = sidx[&s];
                                rows[row][si * n + out] += pm((i + j) as i64) * coef * sg;
                            }
                        }
                    }
                }
            }
        }
        rows
    };
    let dim = |k: usize| subsets(k).len() * n;
    let rank = |rows: Vec<Vec<Q>>| if rows.is_empty() || rows[0].is_empty() { 0 } else { rank_q(&rows) };
    let rp = if p + 1 <= n { rank(delta(p)) } else { 0 };
    let rprev = if p >= 1 { rank(delta(p - 1)) } else { 0 };
    dim(p) - rp - rprev
}

/// One solution of `a x = b` (`a` given by rows with `cols` columns), if any.
pub fn solve_q(a: &[Vec<Q>], cols: usize, b: &[Q]) -> Option<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of `a` (rows with `cols` columns).
pub fn nullspace_q(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][free].clone();
            }
            v
        })
        .collect()
}

impl Dense {
    pub fn indices(&self, deg: i64) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.deg[i] == deg).collect()
    }

    /// Cocycles of degree `deg` as global vectors.
    pub fn cocycles(&self, deg: i64) -> Vec<Vec<Q>> {
        let src = self.indices(deg);
        let rows: Vec<Vec<Q>> = (0..self.n()).map(|i| src.iter().map(|&j| self.d[i][j].clone()).collect()).collect();
        nullspace_q(&rows, src.len())
            .into_iter()
            .map(|local| {
                let mut v = vec![Q::zero(); self.n()];
                for (k, &j) in src.iter().enumerate() {
                    v[j] = local[k].clone();
                }
                v
            })
            .collect()
    }

    /// Coboundaries of degree `deg` (spanning set) as global vectors.
    pub fn coboundaries(&self, deg: i64) -> Vec<Vec<Q>> {
        self.indices(deg - 1).into_iter().map(|j| self.dv(&self.unit(j))).collect()
    }
}

/// Rank of a list of vectors (0 for an empty list).
pub fn span_rank(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        rank_q(vs)
    }
}

/// Whether the global matrix `m` (target × source) induces an isomorphism
/// `H^n(source) → H^n(target)`, from ranks alone.
pub fn induces_iso(source: &Dense, target: &Dense, m: &Matrix, n: i64) -> bool {
    let z = source.cocycles(n);
    let bs = span_rank(&source.coboundaries(n));
    let bt_vecs = target.coboundaries(n);
    let bt = span_rank(&bt_vecs);
    let hs = z.len() - bs;
    let ht = target.cocycles(n).len() - bt;
    let mut images: Vec<Vec<Q>> = z.iter().map(|v| m.mul_vec(v)).collect();
    images.extend(bt_vecs);
    hs == ht && span_rank(&images) - bt == hs
}

/// Scalar polynomials in commuting variables, truncated at a total degree.
pub type Poly = BTreeMap<Vec<u32>, Q>;

pub fn poly_mul(a: &Poly, b: &Poly, order: u32) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if m.iter().sum::<u32>() <= order {
                *out.entry(m).or_insert_with(Q::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Vector-valued polynomial `Σ_α c_α ξ^α` with `ξ_j ↦ Σ_i m[j][i] ξ_i`.
pub fn substitute(terms: &BTreeMap<Vec<u32>, Vec<Q>>, m: &Matrix, order: u32) -> BTreeMap<Vec<u32>, Vec<Q>> {
    let nv = m.rows();
    let linear: Vec<Poly> = (0..nv)
        .map(|j| {
            (0..nv)
                .filter(|&i| !m[(j, i)].is_zero())
                .map(|i| {
                    let mut e = vec![0; nv];
                    e[i] = 1;
                    (e, m[(j, i)].clone())
                })
                .collect()
        })
        .collect();
    let mut out: BTreeMap<Vec<u32>, Vec<Q>> = BTreeMap::new();
    for (mono, c) in terms {
        let mut p: Poly = BTreeMap::from([(vec![0; nv], Q::one())]);
        for (j, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                p = poly_mul(&p, &linear[j], order);
            }
        }
        for (mm, s) in p {
            let e = out.entry(mm).or_insert_with(|| vec![Q::zero(); c.len()]);
            for (x, y) in e.iter_mut().zip(c) {
                *x += &s * y;
            }
        }
    }
    out.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    out
}

pub mod checks;
