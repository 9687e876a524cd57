//! Integer-graded vector spaces with labelled bases, homogeneous maps and
//! the Koszul sign rule.
//!
//! Grading is cohomological and the shift convention is `(V[n])^i = V^{n+i}`,
//! so `k[n]` is `k` placed in degree `-n`.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::rational::{sign, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    components: BTreeMap<i32, Vec<String>>,
    // derived: global order is degree ascending, then label order inside a degree
    offsets: BTreeMap<i32, usize>,
    degrees: Vec<i32>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GradedVectorSpace {
    pub fn zero() -> Self {
        Self::from_components(BTreeMap::new()).expect("empty space is valid")
    }

    pub fn from_components(components: BTreeMap<i32, Vec<String>>) -> Result<Self> {
        let mut components = components;
        components.retain(|_, v| !v.is_empty());
        let mut offsets = BTreeMap::new();
        let mut degrees = Vec::new();
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for (&d, names) in &components {
            offsets.insert(d, labels.len());
            for name in names {
                if index.insert(name.clone(), labels.len()).is_some() {
                    return Err(Error::Validation(format!("duplicate basis label {name:?}")));
                }
                labels.push(name.clone());
                degrees.push(d);
            }
        }
        Ok(GradedVectorSpace { components, offsets, degrees, labels, index })
    }

    /// Builds a space from `(label, degree)` pairs; order inside a degree is kept.
    pub fn from_basis<S: AsRef<str>>(basis: &[(S, i32)]) -> Result<Self> {
        let mut components: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (name, d) in basis {
            components.entry(*d).or_default().push(name.as_ref().to_string());
        }
        Self::from_components(components)
    }

    /// `k` in a single degree with the given label.
    pub fn line(label: &str, degree: i32) -> Self {
        Self::from_basis(&[(label, degree)]).expect("single label")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn dim_in(&self, degree: i32) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn components(&self) -> &BTreeMap<i32, Vec<String>> {
        &self.components
    }

    /// Degrees with a nonzero component, ascending.
    pub fn support(&self) -> Vec<i32> {
        self.components.keys().copied().collect()
    }

    pub fn window(&self) -> Option<(i32, i32)> {
        Some((*self.components.keys().next()?, *self.components.keys().next_back()?))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Global indices of the component in `degree`.
    pub fn range(&self, degree: i32) -> Range<usize> {
        match self.offsets.get(&degree) {
            Some(&o) => o..o + self.dim_in(degree),
            None => 0..0,
        }
    }

    pub fn basis(&self) -> Vec<(String, i32)> {
        self.labels.iter().cloned().zip(self.degrees.iter().copied()).collect()
    }

    /// Restriction of a global coordinate vector to the component in `degree`.
    pub fn component_of(&self, v: &[Rational], degree: i32) -> Vector {
        v[self.range(degree)].to_vec()
    }

    /// Embeds a component vector into global coordinates.
    pub fn embed(&self, degree: i32, local: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        let r = self.range(degree);
        assert_eq!(local.len(), r.len(), "component vector has wrong length");
        out[r].clone_from_slice(local);
        out
    }

    /// The single degree a nonzero vector is concentrated in, if homogeneous.
    pub fn homogeneous_degree(&self, v: &[Rational]) -> Option<Option<i32>> {
        let mut found = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match found {
                None => found = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => return None,
                _ => {}
            }
        }
        Some(found)
    }

    pub fn same_shape(&self, other: &GradedVectorSpace) -> bool {
        self.components.iter().map(|(d, v)| (*d, v.len())).eq(other.components.iter().map(|(d, v)| (*d, v.len())))
    }
}

pub fn shift(v: &GradedVectorSpace, n: i32) -> GradedVectorSpace {
    let components = v.components.iter().map(|(&d, names)| (d - n, names.clone())).collect();
    GradedVectorSpace::from_components(components).expect("labels unchanged")
}

pub fn dual(v: &GradedVectorSpace) -> GradedVectorSpace {
    let components = v
        .components
        .iter()
        .map(|(&d, names)| (-d, names.iter().map(|n| format!("{n}∨")).collect()))
        .collect();
    GradedVectorSpace::from_components(components).expect("dual labels are unique")
}

/// Pairs `(i, j)` of global indices spanning `(V⊗W)^n`, V-factor major.
fn tensor_pairs(v: &GradedVectorSpace, w: &GradedVectorSpace) -> BTreeMap<i32, Vec<(usize, usize)>> {
    let mut out: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..v.dim() {
        for j in 0..w.dim() {
            out.entry(v.degree_of(i) + w.degree_of(j)).or_default().push((i, j));
        }
    }
    out
}

pub fn tensor(v: &GradedVectorSpace, w: &GradedVectorSpace) -> GradedVectorSpace {
    let components = tensor_pairs(v, w)
        .into_iter()
        .map(|(d, pairs)| (d, pairs.into_iter().map(|(i, j)| format!("{}⊗{}", v.label(i), w.label(j))).collect()))
        .collect();
    GradedVectorSpace::from_components(components).expect("tensor labels are unique")
}

/// A degree-homogeneous linear map; `blocks[n]` sends the degree-`n`
/// component of the source to the degree-`n + degree` component of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedVectorSpace, target: &GradedVectorSpace, degree: i32) -> Self {
        GradedMap { source: source.clone(), target: target.clone(), degree, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.support().into_iter().map(|d| (d, Matrix::identity(space.dim_in(d)))).collect();
        GradedMap { source: space.clone(), target: space.clone(), degree: 0, blocks }
    }

    pub fn from_blocks(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (&n, m) in &blocks {
            if m.cols() != source.dim_in(n) || m.rows() != target.dim_in(n + degree) {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim_in(n + degree),
                    source.dim_in(n)
                )));
            }
        }
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(GradedMap { source: source.clone(), target: target.clone(), degree, blocks })
    }

    /// Builds a map from its matrix in global coordinates; fails if the
    /// matrix is not homogeneous of the given degree.
    pub fn from_global(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i32,
        m: &Matrix,
    ) -> Result<Self> {
        assert_eq!((m.rows(), m.cols()), (target.dim(), source.dim()));
        for j in 0..source.dim() {
            for i in 0..target.dim() {
                if !m[(i, j)].is_zero() && target.degree_of(i) != source.degree_of(j) + degree {
                    return Err(Error::DimensionMismatch(format!(
                        "entry {} -> {} breaks homogeneity of degree {degree}",
                        source.label(j),
                        target.label(i)
                    )));
                }
            }
        }
        let mut blocks = BTreeMap::new();
        for n in source.support() {
            let rs = target.range(n + degree);
            let cs = source.range(n);
            let mut b = Matrix::zeros(rs.len(), cs.len());
            for (bi, i) in rs.clone().enumerate() {
                for (bj, j) in cs.clone().enumerate() {
                    b[(bi, bj)] = m[(i, j)].clone();
                }
            }
            blocks.insert(n, b);
        }
        Self::from_blocks(source, target, degree, blocks)
    }

    pub fn block(&self, n: i32) -> Matrix {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim_in(n + self.degree), self.source.dim_in(n)))
    }

    pub fn global_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.dim(), self.source.dim());
        for (&n, b) in &self.blocks {
            let rs = self.target.range(n + self.degree);
            let cs = self.source.range(n);
            for (bi, i) in rs.enumerate() {
                for (bj, j) in cs.clone().enumerate() {
                    m[(i, j)] = b[(bi, bj)].clone();
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        let mut out = zero_vector(self.target.dim());
        for (&n, b) in &self.blocks {
            let local = self.source.component_of(v, n);
            let img = b.mul_vec(&local);
            for (k, i) in self.target.range(n + self.degree).enumerate() {
                out[i] += &img[k];
            }
        }
        out
    }

    /// Image of a single basis vector, in global target coordinates.
    pub fn apply_basis(&self, j: usize) -> Vector {
        let n = self.source.degree_of(j);
        let mut out = zero_vector(self.target.dim());
        if let Some(b) = self.blocks.get(&n) {
            let col = j - self.source.range(n).start;
            for (k, i) in self.target.range(n + self.degree).enumerate() {
                out[i] = b[(k, col)].clone();
            }
        }
        out
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        let m = self.global_matrix().mul(&other.global_matrix());
        GradedMap::from_global(&other.source, &self.target, self.degree + other.degree, &m)
            .expect("composite of homogeneous maps is homogeneous")
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `v⊗w ↦ (-1)^{|v||w|} w⊗v`
pub fn koszul_swap(v: &GradedVectorSpace, w: &GradedVectorSpace) -> GradedMap {
    let vw = tensor(v, w);
    let wv = tensor(w, v);
    let mut m = Matrix::zeros(wv.dim(), vw.dim());
    for (_, pairs) in tensor_pairs(v, w) {
        for (i, j) in pairs {
            let src = vw.index_of(&format!("{}⊗{}", v.label(i), w.label(j))).expect("label present");
            let dst = wv.index_of(&format!("{}⊗{}", w.label(j), v.label(i))).expect("label present");
            m[(dst, src)] = sign(i64::from(v.degree_of(i)) * i64::from(w.degree_of(j)));
        }
    }
    GradedMap::from_global(&vw, &wv, 0, &m).expect("swap preserves degree")
}
