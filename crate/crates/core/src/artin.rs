//! Finite-dimensional local (dg) algebras with nilpotent maximal ideal,
//! concentrated in non-positive degrees, and small extensions between them.
//!
//! The basis always consists of the unit plus a basis of the maximal ideal;
//! the augmentation sends the unit to 1 and every other basis element to 0.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dgla::{normalize, to_dense, Combination};
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::linalg::{zero_vector, Matrix, Subspace, Vector};
use crate::poly::{format_monomial, monomials, Monomial};
use crate::rational::{int, sign, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinAlgebra {
    space: GradedVectorSpace,
    unit: usize,
    mult: BTreeMap<(usize, usize), Combination>,
    differential: Matrix,
}

impl ArtinAlgebra {
    /// Assembles and validates an algebra; `mult` lists products of
    /// maximal-ideal basis elements (products with the unit are implied).
    pub fn new(
        space: GradedVectorSpace,
        unit_label: &str,
        mult: BTreeMap<(usize, usize), Combination>,
        differential: Matrix,
    ) -> Result<Self> {
        let unit = space.index_of(unit_label).ok_or_else(|| Error::Validation("unit label missing".into()))?;
        if space.degree_of(unit) != 0 {
            return Err(Error::Validation("unit must sit in degree 0".into()));
        }
        let mut full = BTreeMap::new();
        for i in 0..space.dim() {
            full.insert((unit, i), vec![(i, int(1))]);
            full.insert((i, unit), vec![(i, int(1))]);
        }
        for ((i, j), c) in mult {
            if i == unit || j == unit {
                continue;
            }
            let c = normalize(c);
            if !c.is_empty() {
                full.insert((i, j), c);
            }
        }
        let a = ArtinAlgebra { space, unit, mult: full, differential };
        a.validate()?;
        Ok(a)
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.space.degree_of(i)
    }

    /// Basis indices of the maximal ideal.
    pub fn maximal_ideal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Vector {
        match self.mult.get(&(i, j)) {
            Some(c) => to_dense(c, self.dim()),
            None => zero_vector(self.dim()),
        }
    }

    pub fn product(&self, a: &[Rational], b: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        for ((i, j), c) in &self.mult {
            if a[*i].is_zero() || b[*j].is_zero() {
                continue;
            }
            let ab = &a[*i] * &b[*j];
            for (k, x) in c {
                out[*k] += &ab * x;
            }
        }
        out
    }

    pub fn d(&self, a: &[Rational]) -> Vector {
        self.differential.mul_vec(a)
    }

    pub fn d_basis(&self, i: usize) -> Vector {
        self.differential.column(i)
    }

    pub fn differential(&self) -> &Matrix {
        &self.differential
    }

    /// Smallest `N` with `m^N = 0`.
    pub fn nilpotency_index(&self) -> usize {
        let m = self.maximal_ideal();
        let n = self.dim();
        let mut power = Subspace::span(n, &m.iter().map(|&i| crate::linalg::unit_vector(n, i)).collect::<Vec<_>>());
        let mut k = 1;
        while power.dim() > 0 && k <= n + 1 {
            let mut next = Vec::new();
            for b in power.basis() {
                for &i in &m {
                    next.push(self.product(b, &crate::linalg::unit_vector(n, i)));
                }
            }
            power = Subspace::span(n, &next);
            k += 1;
        }
        k
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let fail = |m: String| Err(Error::Validation(m));
        for i in 0..n {
            if self.degree_of(i) > 0 {
                return fail(format!("{} sits in positive degree", self.label(i)));
            }
        }
        if (self.differential.rows(), self.differential.cols()) != (n, n) {
            return fail("differential has wrong shape".into());
        }
        for ((i, j), c) in &self.mult {
            for (k, _) in c {
                if self.degree_of(*k) != self.degree_of(*i) + self.degree_of(*j) {
                    return fail(format!("product {}·{} breaks degrees", self.label(*i), self.label(*j)));
                }
                if *k == self.unit && *i != self.unit && *j != self.unit {
                    return fail("maximal ideal is not closed under products".into());
                }
            }
        }
        let e = |i: usize| crate::linalg::unit_vector(n, i);
        for i in 0..n {
            for j in 0..n {
                let s = sign(i64::from(self.degree_of(i)) * i64::from(self.degree_of(j)));
                let ab = self.product_basis(i, j);
                let ba: Vector = self.product_basis(j, i).iter().map(|x| x * &s).collect();
                if ab != ba {
                    return fail(format!("{}·{} is not graded commutative", self.label(i), self.label(j)));
                }
                for k in 0..n {
                    if self.product(&ab, &e(k)) != self.product(&e(i), &self.product_basis(j, k)) {
                        return fail("multiplication is not associative".into());
                    }
                }
                // Leibniz: d(ab) = (da)b + (-1)^{|a|} a(db)
                let lhs = self.d(&ab);
                let mut rhs = self.product(&self.d_basis(i), &e(j));
                crate::linalg::add_scaled(
                    &mut rhs,
                    &sign(i64::from(self.degree_of(i))),
                    &self.product(&e(i), &self.d_basis(j)),
                );
                if lhs != rhs {
                    return fail("differential is not a derivation".into());
                }
            }
            let di = self.d_basis(i);
            if !di[self.unit].is_zero() {
                return fail("differential does not preserve the augmentation ideal".into());
            }
            if di.iter().enumerate().any(|(k, x)| !x.is_zero() && self.degree_of(k) != self.degree_of(i) + 1) {
                return fail("differential is not of degree +1".into());
            }
        }
        if !self.differential.mul(&self.differential).is_zero() {
            return fail("differential does not square to zero".into());
        }
        if self.nilpotency_index() > n + 1 {
            return fail("maximal ideal is not nilpotent".into());
        }
        Ok(())
    }
}

/// `k ⊕ k·ε` with `ε` in degree `-n` and `ε² = 0`; `n = 0` gives the dual numbers.
pub fn square_zero_extension(n: u32) -> ArtinAlgebra {
    let space = GradedVectorSpace::from_basis(&[("1", 0), ("ε", -(n as i32))]).expect("two labels");
    let dim = space.dim();
    ArtinAlgebra::new(space, "1", BTreeMap::new(), Matrix::zeros(dim, dim)).expect("square-zero extension is valid")
}

fn monomial_label(m: &Monomial) -> String {
    if m.iter().all(|&e| e == 0) {
        return "1".into();
    }
    if m.len() == 1 {
        return format_monomial(m, "t").replace("t1", "t");
    }
    format_monomial(m, "t").replace('·', "*")
}

/// `k[t_1..t_m]/(t)^{N+1}` with its monomial basis.
pub fn truncated_power_series(vars: usize, order: u32) -> ArtinAlgebra {
    assert!(vars >= 1 && order >= 1, "need at least one variable and order at least one");
    let monos = monomials(vars, 0, order);
    let labels: Vec<String> = monos.iter().map(monomial_label).collect();
    let space =
        GradedVectorSpace::from_basis(&labels.iter().map(|l| (l.clone(), 0)).collect::<Vec<_>>()).expect("labels unique");
    let idx: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mult = BTreeMap::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            let prod: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if let Some(&k) = idx.get(&prod) {
                mult.insert((i, j), vec![(k, int(1))]);
            }
        }
    }
    let dim = space.dim();
    ArtinAlgebra::new(space, "1", mult, Matrix::zeros(dim, dim)).expect("truncated polynomial ring is valid")
}

/// A surjection `A → A/I` with `m_A · I = 0`, where `I` is spanned by a
/// subset of the basis of `A`.
#[derive(Clone, Debug)]
pub struct SmallExtension {
    pub big: ArtinAlgebra,
    pub quotient: ArtinAlgebra,
    /// Basis indices of `A` spanning `I`.
    pub kernel: Vec<usize>,
    /// For each basis index of `A`, its index in `A/I` (None on the kernel).
    pub to_quotient: Vec<Option<usize>>,
}

impl SmallExtension {
    pub fn new(big: &ArtinAlgebra, kernel_labels: &[&str]) -> Result<Self> {
        let mut kernel = Vec::new();
        for l in kernel_labels {
            let i = big.space().index_of(l).ok_or_else(|| Error::UnknownName(format!("algebra basis {l:?}")))?;
            if i == big.unit() {
                return Err(Error::NotSmallExtension("kernel contains the unit".into()));
            }
            kernel.push(i);
        }
        kernel.sort_unstable();
        kernel.dedup();
        let n = big.dim();
        let in_kernel = |k: usize| kernel.contains(&k);
        for &i in &big.maximal_ideal() {
            for &j in &kernel {
                if big.product_basis(i, j).iter().any(|x| !x.is_zero()) {
                    return Err(Error::NotSmallExtension(format!(
                        "{}·{} ≠ 0, so the kernel is not annihilated by the maximal ideal",
                        big.label(i),
                        big.label(j)
                    )));
                }
            }
        }
        for &j in &kernel {
            if big.d_basis(j).iter().enumerate().any(|(k, x)| !x.is_zero() && !in_kernel(k)) {
                return Err(Error::NotSmallExtension("kernel is not closed under the differential".into()));
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&k| !in_kernel(k)).collect();
        let basis: Vec<(String, i32)> = keep.iter().map(|&k| (big.label(k).to_string(), big.degree_of(k))).collect();
        let space = GradedVectorSpace::from_basis(&basis)?;
        let to_quotient: Vec<Option<usize>> =
            (0..n).map(|k| if in_kernel(k) { None } else { space.index_of(big.label(k)) }).collect();
        let qidx = |k: usize| to_quotient[k].expect("kept label");
        let project = |v: &Vector| -> Combination {
            normalize(v.iter().enumerate().filter(|(k, x)| !x.is_zero() && !in_kernel(*k)).map(|(k, x)| (qidx(k), x.clone())))
        };
        let mut mult = BTreeMap::new();
        for &i in &keep {
            for &j in &keep {
                mult.insert((qidx(i), qidx(j)), project(&big.product_basis(i, j)));
            }
        }
        let qn = space.dim();
        let mut dq = Matrix::zeros(qn, qn);
        for &j in &keep {
            for (k, x) in project(&big.d_basis(j)) {
                dq[(k, qidx(j))] = x;
            }
        }
        let quotient = ArtinAlgebra::new(space, big.label(big.unit()), mult, dq)?;
        Ok(SmallExtension { big: big.clone(), quotient, kernel, to_quotient })
    }

    /// `k[t]/(t^{N+1}) → k[t]/(t^N)` and its multivariate analogue: the
    /// kernel is spanned by the monomials of top degree.
    pub fn truncation(vars: usize, order: u32) -> Result<Self> {
        let big = truncated_power_series(vars, order);
        let top: Vec<String> = monomials(vars, order, order).iter().map(monomial_label).collect();
        let refs: Vec<&str> = top.iter().map(String::as_str).collect();
        Self::new(&big, &refs)
    }
}
