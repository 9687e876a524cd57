//! Differential graded Lie algebras given by structure constants.
//!
//! Elements are dense coordinate vectors in the global basis order of the
//! underlying [`GradedVectorSpace`]. The bracket is stored for every ordered
//! pair of basis elements that brackets to something nonzero; nothing is
//! filled in implicitly, so a table that breaks antisymmetry is representable
//! and is reported by [`validate_dgla`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::{complement, image_basis, kernel_basis, solve, zero_vector, Matrix, Subspace, Vector};
use crate::rational::{format_term_coeff, int, sign, Rational};

/// Sparse linear combination of basis elements, sorted by index, no zero terms.
pub type Combination = Vec<(usize, Rational)>;

pub fn normalize(terms: impl IntoIterator<Item = (usize, Rational)>) -> Combination {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, c) in terms {
        *acc.entry(i).or_insert_with(Rational::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn to_dense(c: &Combination, n: usize) -> Vector {
    let mut v = zero_vector(n);
    for (i, x) in c {
        v[*i] += x;
    }
    v
}

pub fn to_sparse(v: &[Rational]) -> Combination {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Renders a coordinate vector as `x1 - 2·x2`, or `0`.
pub fn format_vector(space: &GradedVectorSpace, v: &[Rational]) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out.push_str(&format_term_coeff(c, out.is_empty()));
        out.push_str(space.label(i));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Dgla {
    space: GradedVectorSpace,
    differential: GradedMap,
    bracket: BTreeMap<(usize, usize), Combination>,
}

impl fmt::Debug for Dgla {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dgla {{")?;
        for i in 0..self.dim() {
            let dv = self.d_basis(i);
            writeln!(f, "  {} (deg {}): d = {}", self.space.label(i), self.space.degree_of(i), format_vector(&self.space, &dv))?;
        }
        for ((i, j), c) in &self.bracket {
            let v = to_dense(c, self.dim());
            writeln!(f, "  [{}, {}] = {}", self.space.label(*i), self.space.label(*j), format_vector(&self.space, &v))?;
        }
        write!(f, "}}")
    }
}

impl Dgla {
    /// Assembles a dgla without checking the axioms; see [`validate_dgla`].
    pub fn new(
        space: GradedVectorSpace,
        differential: GradedMap,
        bracket: BTreeMap<(usize, usize), Combination>,
    ) -> Result<Self> {
        if differential.source != space || differential.target != space || differential.degree != 1 {
            return Err(Error::DimensionMismatch("differential must be a degree +1 endomorphism".into()));
        }
        let n = space.dim();
        let mut clean = BTreeMap::new();
        for ((i, j), c) in bracket {
            if i >= n || j >= n || c.iter().any(|(k, _)| *k >= n) {
                return Err(Error::DimensionMismatch("bracket index out of range".into()));
            }
            let c = normalize(c);
            if !c.is_empty() {
                clean.insert((i, j), c);
            }
        }
        Ok(Dgla { space, differential, bracket: clean })
    }

    pub fn zero() -> Self {
        let space = GradedVectorSpace::zero();
        Dgla { differential: GradedMap::zero(&space, &space, 1), space, bracket: BTreeMap::new() }
    }

    /// Abelian dgla on a cochain complex given in global coordinates.
    pub fn abelian(space: GradedVectorSpace, d: &Matrix) -> Result<Self> {
        let differential = GradedMap::from_global(&space, &space, 1, d)?;
        Dgla::new(space, differential, BTreeMap::new())
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn bracket_table(&self) -> &BTreeMap<(usize, usize), Combination> {
        &self.bracket
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.space.degree_of(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.space.index_of(label)
    }

    pub fn basis_vector(&self, label: &str) -> Vector {
        let mut v = zero_vector(self.dim());
        v[self.index_of(label).unwrap_or_else(|| panic!("unknown basis label {label}"))] = int(1);
        v
    }

    pub fn d(&self, v: &[Rational]) -> Vector {
        self.differential.apply(v)
    }

    pub fn d_basis(&self, i: usize) -> Vector {
        self.differential.apply_basis(i)
    }

    /// The block `d: g^n -> g^{n+1}`.
    pub fn d_block(&self, n: i32) -> Matrix {
        self.differential.block(n)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Option<&Combination> {
        self.bracket.get(&(i, j))
    }

    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        let na: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
        let nb: Vec<usize> = (0..b.len()).filter(|&j| !b[j].is_zero()).collect();
        if na.len() * nb.len() <= self.bracket.len() {
            for &i in &na {
                for &j in &nb {
                    if let Some(c) = self.bracket.get(&(i, j)) {
                        let xy = &a[i] * &b[j];
                        for (k, ck) in c {
                            out[*k] += &xy * ck;
                        }
                    }
                }
            }
            return out;
        }
        for ((i, j), c) in &self.bracket {
            let (x, y) = (&a[*i], &b[*j]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let xy = x * y;
            for (k, ck) in c {
                out[*k] += &xy * ck;
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_empty()
    }

    /// Matrix of `ad_a` restricted to global coordinates.
    pub fn ad_matrix(&self, a: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for ((i, j), c) in &self.bracket {
            if a[*i].is_zero() {
                continue;
            }
            for (k, ck) in c {
                m[(*k, *j)] += &a[*i] * ck;
            }
        }
        m
    }

    /// Sub-dgla spanned by the given vectors (grouped by degree), with labels,
    /// together with its inclusion. Fails if the span is not closed under
    /// `d` and the bracket.
    pub fn subalgebra(&self, pieces: &[(String, i32, Vector)]) -> Result<(Dgla, DglaMorphism)> {
        let space = GradedVectorSpace::from_basis(&pieces.iter().map(|(l, d, _)| (l.clone(), *d)).collect::<Vec<_>>())?;
        // columns in the new global order
        let mut cols: Vec<Vector> = vec![Vec::new(); space.dim()];
        for (l, d, v) in pieces {
            if self.space.homogeneous_degree(v).flatten().is_some_and(|dv| dv != *d) {
                return Err(Error::DimensionMismatch(format!("vector for {l} is not in degree {d}")));
            }
            cols[space.index_of(l).expect("label just inserted")] = v.clone();
        }
        let incl = Matrix::from_columns(&cols, self.dim());
        let express = |v: &Vector| -> Result<Vector> {
            solve(&incl, v).ok_or_else(|| Error::Validation("span is not closed under the dgla operations".into()))
        };
        let mut dmat = Matrix::zeros(space.dim(), space.dim());
        for (j, c) in cols.iter().enumerate() {
            let img = express(&self.d(c))?;
            for (i, x) in img.into_iter().enumerate() {
                dmat[(i, j)] = x;
            }
        }
        let mut bracket = BTreeMap::new();
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate() {
                let v = self.bracket(a, b);
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                bracket.insert((i, j), to_sparse(&express(&v)?));
            }
        }
        let differential = GradedMap::from_global(&space, &space, 1, &dmat)?;
        let sub = Dgla::new(space.clone(), differential, bracket)?;
        let map = GradedMap::from_global(&space, &self.space, 0, &incl)?;
        let f = DglaMorphism::new(sub.clone(), self.clone(), map)?;
        Ok((sub, f))
    }
}

/// Builds dglas from labels; used by constructors and the file parser.
#[derive(Clone, Debug, Default)]
pub struct DglaBuilder {
    basis: Vec<(String, i32)>,
    differential: Vec<(String, String, Rational)>,
    bracket: Vec<(String, String, Vec<(String, Rational)>)>,
}

impl DglaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(mut self, label: &str, degree: i32) -> Self {
        self.basis.push((label.to_string(), degree));
        self
    }

    /// Adds `coeff · to` to `d(from)`.
    pub fn d(mut self, from: &str, to: &str, coeff: Rational) -> Self {
        self.differential.push((from.to_string(), to.to_string(), coeff));
        self
    }

    /// Sets the ordered bracket `[left, right]` only.
    pub fn bracket_raw(mut self, left: &str, right: &str, terms: &[(&str, Rational)]) -> Self {
        self.bracket.push((
            left.to_string(),
            right.to_string(),
            terms.iter().map(|(l, c)| (l.to_string(), c.clone())).collect(),
        ));
        self
    }

    /// Sets `[left, right]` and the value of `[right, left]` forced by graded antisymmetry.
    pub fn bracket(self, left: &str, right: &str, terms: &[(&str, Rational)]) -> Self {
        let p = self.degree(left);
        let q = self.degree(right);
        let b = self.bracket_raw(left, right, terms);
        if left == right {
            return b;
        }
        let s = -sign(i64::from(p) * i64::from(q));
        let swapped: Vec<(&str, Rational)> = terms.iter().map(|(l, c)| (*l, c * &s)).collect();
        b.bracket_raw(right, left, &swapped)
    }

    fn degree(&self, label: &str) -> i32 {
        self.basis.iter().find(|(l, _)| l == label).map_or(0, |(_, d)| *d)
    }

    pub fn build(self) -> Result<Dgla> {
        let space = GradedVectorSpace::from_basis(&self.basis)?;
        let idx = |l: &str| space.index_of(l).ok_or_else(|| Error::Parse(format!("unknown basis name {l:?}")));
        let n = space.dim();
        let mut dm = Matrix::zeros(n, n);
        for (from, to, c) in &self.differential {
            let (j, i) = (idx(from)?, idx(to)?);
            dm[(i, j)] += c;
        }
        let differential = GradedMap::from_global(&space, &space, 1, &dm)?;
        let mut bracket: BTreeMap<(usize, usize), Combination> = BTreeMap::new();
        for (l, r, terms) in &self.bracket {
            let key = (idx(l)?, idx(r)?);
            let mut combo = bracket.remove(&key).unwrap_or_default();
            for (t, c) in terms {
                combo.push((idx(t)?, c.clone()));
            }
            bracket.insert(key, normalize(combo));
        }
        Dgla::new(space, differential, bracket)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `[x, y]` has a term outside degree `|x| + |y|`.
    DegreeViolation { x: String, y: String },
    DifferentialSquare { x: String },
    Antisymmetry { x: String, y: String },
    Jacobi { x: String, y: String, z: String },
    Leibniz { x: String, y: String },
    ChainMap { x: String },
    BracketViolation { x: String, y: String },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::DegreeViolation { .. } => "degree",
            Violation::DifferentialSquare { .. } => "d^2=0",
            Violation::Antisymmetry { .. } => "antisymmetry",
            Violation::Jacobi { .. } => "jacobi",
            Violation::Leibniz { .. } => "leibniz",
            Violation::ChainMap { .. } => "chain-map",
            Violation::BracketViolation { .. } => "bracket",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeViolation { x, y } => write!(f, "DegreeViolation at ({x},{y})"),
            Violation::DifferentialSquare { x } => write!(f, "DifferentialSquare at ({x})"),
            Violation::Antisymmetry { x, y } => write!(f, "Antisymmetry at ({x},{y})"),
            Violation::Jacobi { x, y, z } => write!(f, "Jacobi at ({x},{y},{z})"),
            Violation::Leibniz { x, y } => write!(f, "Leibniz at ({x},{y})"),
            Violation::ChainMap { x } => write!(f, "ChainMapViolation at ({x})"),
            Violation::BracketViolation { x, y } => write!(f, "BracketViolation at ({x},{y})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn axioms(&self) -> std::collections::BTreeSet<&'static str> {
        self.violations.iter().map(Violation::axiom).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Validation(self.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))
        }
    }
}

/// Checks degree compatibility, `d∘d = 0`, graded antisymmetry, the graded
/// Jacobi identity and the Leibniz rule on all basis tuples.
pub fn validate_dgla(g: &Dgla) -> ValidationReport {
    let n = g.dim();
    let lab = |i: usize| g.label(i).to_string();
    let deg = |i: usize| i64::from(g.degree_of(i));
    let mut out = Vec::new();

    for ((i, j), c) in &g.bracket {
        if c.iter().any(|(k, _)| g.degree_of(*k) != g.degree_of(*i) + g.degree_of(*j)) {
            out.push(Violation::DegreeViolation { x: lab(*i), y: lab(*j) });
        }
    }
    for i in 0..n {
        if g.d(&g.d_basis(i)).iter().any(|x| !x.is_zero()) {
            out.push(Violation::DifferentialSquare { x: lab(i) });
        }
    }
    let basis: Vec<Vector> = (0..n).map(|i| crate::linalg::unit_vector(n, i)).collect();
    let br = |i: usize, j: usize| g.bracket_basis(i, j).map(|c| to_dense(c, n)).unwrap_or_else(|| zero_vector(n));
    for i in 0..n {
        for j in i..n {
            let s = sign(deg(i) * deg(j));
            let lhs = br(i, j);
            let rhs = br(j, i);
            if lhs.iter().zip(&rhs).any(|(a, b)| !(a + &s * b).is_zero()) {
                out.push(Violation::Antisymmetry { x: lab(i), y: lab(j) });
            }
        }
    }
    let brackets: Vec<Vec<Vector>> = (0..n).map(|i| (0..n).map(|j| br(i, j)).collect()).collect();
    let nonzero: Vec<Vec<bool>> =
        brackets.iter().map(|row| row.iter().map(|v| v.iter().any(|x| !x.is_zero())).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !(nonzero[j][k] || nonzero[k][i] || nonzero[i][j]) {
                    continue;
                }
                let (p, q, r) = (deg(i), deg(j), deg(k));
                let mut acc = zero_vector(n);
                if nonzero[j][k] {
                    crate::linalg::add_scaled(&mut acc, &sign(p * r), &g.bracket(&basis[i], &brackets[j][k]));
                }
                if nonzero[k][i] {
                    crate::linalg::add_scaled(&mut acc, &sign(p * q), &g.bracket(&basis[j], &brackets[k][i]));
                }
                if nonzero[i][j] {
                    crate::linalg::add_scaled(&mut acc, &sign(q * r), &g.bracket(&basis[k], &brackets[i][j]));
                }
                if acc.iter().any(|x| !x.is_zero()) {
                    out.push(Violation::Jacobi { x: lab(i), y: lab(j), z: lab(k) });
                }
            }
        }
    }
    let ds: Vec<Vector> = (0..n).map(|i| g.d_basis(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = g.d(&brackets[i][j]);
            let mut rhs = g.bracket(&ds[i], &basis[j]);
            crate::linalg::add_scaled(&mut rhs, &sign(deg(i)), &g.bracket(&basis[i], &ds[j]));
            if lhs != rhs {
                out.push(Violation::Leibniz { x: lab(i), y: lab(j) });
            }
        }
    }
    ValidationReport { violations: out }
}

/// Cohomology of one degree with its canonical splitting `Z^n = B^n ⊕ H`.
/// All subspaces live in the local coordinates of the component `g^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: i32,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub representatives: Subspace,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.representatives.dim()
    }

    /// Coordinates of the class of a cocycle (local coordinates) in the
    /// representative basis.
    pub fn class_of(&self, z: &[Rational]) -> Option<Vector> {
        let mut cols: Vec<Vector> = self.coboundaries.basis().to_vec();
        cols.extend(self.representatives.basis().iter().cloned());
        let m = Matrix::from_columns(&cols, self.cocycles.ambient_dim());
        let c = solve(&m, z)?;
        Some(c[self.coboundaries.dim()..].to_vec())
    }
}

pub fn cocycles(g: &Dgla, n: i32) -> Subspace {
    kernel_basis(&g.d_block(n))
}

pub fn coboundaries(g: &Dgla, n: i32) -> Subspace {
    let m = g.d_block(n - 1);
    if m.cols() == 0 {
        return Subspace::zero(g.space().dim_in(n));
    }
    image_basis(&m)
}

pub fn cohomology(g: &Dgla, n: i32) -> Cohomology {
    cohomology_with(g, n, &mut |_, b, z| complement(b, z))
}

/// Cohomology with a caller-chosen complement of `B^n` in `Z^n`.
pub fn cohomology_with(
    g: &Dgla,
    n: i32,
    choose: &mut dyn FnMut(i32, &Subspace, &Subspace) -> Result<Subspace>,
) -> Cohomology {
    let z = cocycles(g, n);
    let b = coboundaries(g, n);
    let h = choose(n, &b, &z).expect("coboundaries lie in cocycles");
    Cohomology { degree: n, cocycles: z, coboundaries: b, representatives: h }
}

/// Degrees in which cohomology can be nonzero: the support of the space.
pub fn degree_window(g: &Dgla) -> Vec<i32> {
    g.space().support()
}

/// The cone `Cn(g)`: `g ⊕ εg` with `ε` of degree `-1`, so
/// `Cn(g)^n = g^n ⊕ ε·g^{n+1}`, `d(x + εy) = dx + y - ε dy` and
/// `[x + εy, x' + εy'] = [x, x'] + ε([y, x'] + (-1)^{|x|}[x, y'])`.
pub fn cone(g: &Dgla) -> Dgla {
    let n = g.dim();
    let mut basis: Vec<(String, i32)> = Vec::with_capacity(2 * n);
    for i in 0..n {
        basis.push((g.label(i).to_string(), g.degree_of(i)));
        basis.push((format!("ε{}", g.label(i)), g.degree_of(i) - 1));
    }
    let space = GradedVectorSpace::from_basis(&basis).expect("ε-labels are fresh");
    let plain: Vec<usize> = (0..n).map(|i| space.index_of(g.label(i)).unwrap()).collect();
    let eps: Vec<usize> = (0..n).map(|i| space.index_of(&format!("ε{}", g.label(i))).unwrap()).collect();
    let dim = space.dim();
    let mut dm = Matrix::zeros(dim, dim);
    for i in 0..n {
        let dv = g.d_basis(i);
        for (k, c) in dv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            dm[(plain[k], plain[i])] += c;
            dm[(eps[k], eps[i])] -= c;
        }
        dm[(plain[i], eps[i])] += int(1);
    }
    let mut bracket: BTreeMap<(usize, usize), Combination> = BTreeMap::new();
    for ((i, j), c) in &g.bracket {
        bracket.insert((plain[*i], plain[*j]), c.iter().map(|(k, x)| (plain[*k], x.clone())).collect());
        // [εy, x'] = ε[y, x']
        bracket.insert((eps[*i], plain[*j]), c.iter().map(|(k, x)| (eps[*k], x.clone())).collect());
        // [x, εy'] = (-1)^{|x|} ε[x, y']
        let s = sign(i64::from(g.degree_of(*i)));
        bracket.insert((plain[*i], eps[*j]), c.iter().map(|(k, x)| (eps[*k], x * &s)).collect());
    }
    let differential = GradedMap::from_global(&space, &space, 1, &dm).expect("cone differential is homogeneous");
    Dgla::new(space, differential, bracket).expect("cone indices are in range")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglaMorphism {
    pub source: Dgla,
    pub target: Dgla,
    pub map: GradedMap,
}

impl DglaMorphism {
    pub fn new(source: Dgla, target: Dgla, map: GradedMap) -> Result<Self> {
        if map.degree != 0 || &map.source != source.space() || &map.target != target.space() {
            return Err(Error::InvalidMorphism("map must be degree 0 between the underlying spaces".into()));
        }
        Ok(DglaMorphism { source, target, map })
    }

    pub fn identity(g: &Dgla) -> Self {
        DglaMorphism { source: g.clone(), target: g.clone(), map: GradedMap::identity(g.space()) }
    }

    pub fn zero(source: &Dgla, target: &Dgla) -> Self {
        DglaMorphism {
            source: source.clone(),
            target: target.clone(),
            map: GradedMap::zero(source.space(), target.space(), 0),
        }
    }

    pub fn from_global(source: &Dgla, target: &Dgla, m: &Matrix) -> Result<Self> {
        let map = GradedMap::from_global(source.space(), target.space(), 0, m)?;
        Self::new(source.clone(), target.clone(), map)
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        self.map.apply(v)
    }
}

pub fn validate_morphism(f: &DglaMorphism) -> ValidationReport {
    let (s, t) = (&f.source, &f.target);
    let n = s.dim();
    let mut out = Vec::new();
    let images: Vec<Vector> = (0..n).map(|i| f.map.apply_basis(i)).collect();
    for i in 0..n {
        if f.apply(&s.d_basis(i)) != t.d(&images[i]) {
            out.push(Violation::ChainMap { x: s.label(i).to_string() });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = match s.bracket_basis(i, j) {
                Some(c) => f.apply(&to_dense(c, n)),
                None => zero_vector(t.dim()),
            };
            if lhs != t.bracket(&images[i], &images[j]) {
                out.push(Violation::BracketViolation { x: s.label(i).to_string(), y: s.label(j).to_string() });
            }
        }
    }
    ValidationReport { violations: out }
}

fn require_valid(f: &DglaMorphism) -> Result<()> {
    let report = validate_morphism(f);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidMorphism(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ))
    }
}

/// Matrix of `H^n(f)` in the canonical representative bases.
pub fn induced_map_on_h(f: &DglaMorphism, n: i32) -> Result<Matrix> {
    require_valid(f)?;
    Ok(induced_map_unchecked(f, n, &cohomology(&f.source, n), &cohomology(&f.target, n)))
}

pub(crate) fn induced_map_unchecked(f: &DglaMorphism, n: i32, hs: &Cohomology, ht: &Cohomology) -> Matrix {
    let block = f.map.block(n);
    let cols: Vec<Vector> = hs
        .representatives
        .basis()
        .iter()
        .map(|r| ht.class_of(&block.mul_vec(r)).expect("chain maps send cocycles to cocycles"))
        .collect();
    Matrix::from_columns(&cols, ht.dim())
}

/// Per-degree invertibility of `H^n(f)` over the given degrees.
pub fn quasi_iso_check(f: &DglaMorphism, degrees: &[i32]) -> Result<BTreeMap<i32, bool>> {
    require_valid(f)?;
    Ok(degrees
        .iter()
        .map(|&n| {
            let m = induced_map_unchecked(f, n, &cohomology(&f.source, n), &cohomology(&f.target, n));
            (n, m.is_invertible())
        })
        .collect())
}

/// Union of the supports of source and target, widened by one on each side.
pub fn morphism_window(f: &DglaMorphism) -> Vec<i32> {
    let mut ds: Vec<i32> = f.source.space().support();
    ds.extend(f.target.space().support());
    ds.sort_unstable();
    ds.dedup();
    match (ds.first(), ds.last()) {
        (Some(&lo), Some(&hi)) => (lo - 1..=hi + 1).collect(),
        _ => vec![0],
    }
}
