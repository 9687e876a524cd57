//! Truncated polynomials in commuting degree-0 variables with vector
//! coefficients: the formal power series used by the Kuranishi recursion.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::linalg::{is_zero_vector, zero_vector, Matrix, Vector};
use crate::rational::{format_rational, one, Rational};

pub type Monomial = Vec<u32>;

pub fn total_degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

/// All monomials in `nvars` variables with total degree in `lo..=hi`, ordered
/// by total degree and then lexicographically descending (so `ξ1^2` precedes
/// `ξ1ξ2`).
pub fn monomials(nvars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in lo..=hi {
        let mut of_degree = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            if d == 0 {
                of_degree.push(Vec::new());
            }
        } else {
            rec(0, d, &mut cur, &mut of_degree);
        }
        out.extend(of_degree);
    }
    out
}

/// `Σ_α c_α ξ^α` with `c_α ∈ k^dim`, truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    nvars: usize,
    dim: usize,
    order: u32,
    terms: BTreeMap<Monomial, Vector>,
}

impl PolyVec {
    pub fn zero(nvars: usize, dim: usize, order: u32) -> Self {
        PolyVec { nvars, dim, order, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Vector> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Vector {
        self.terms.get(m).cloned().unwrap_or_else(|| zero_vector(self.dim))
    }

    pub fn add_term(&mut self, m: Monomial, c: &[Rational]) {
        assert_eq!(m.len(), self.nvars);
        assert_eq!(c.len(), self.dim);
        if total_degree(&m) > self.order || is_zero_vector(c) {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(|| zero_vector(self.dim));
        for (a, b) in e.iter_mut().zip(c) {
            *a += b;
        }
        if is_zero_vector(e) {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous part of total degree `d`.
    pub fn part(&self, d: u32) -> PolyVec {
        let terms = self.terms.iter().filter(|(m, _)| total_degree(m) == d).map(|(m, v)| (m.clone(), v.clone())).collect();
        PolyVec { terms, ..*self }
    }

    pub fn add(&self, other: &PolyVec) -> PolyVec {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &PolyVec) -> PolyVec {
        self.add(&other.scale(&-one()))
    }

    pub fn scale(&self, c: &Rational) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, self.dim, self.order);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &v.iter().map(|x| x * c).collect::<Vector>());
        }
        out
    }

    /// Applies a linear map to every coefficient.
    pub fn map(&self, m: &Matrix) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, m.rows(), self.order);
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), &m.mul_vec(v));
        }
        out
    }

    pub fn map_with(&self, dim: usize, f: impl Fn(&Vector) -> Vector) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, dim, self.order);
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), &f(v));
        }
        out
    }

    /// `Σ op(a_α, b_β) ξ^{α+β}`, truncated at `self.order`.
    pub fn convolve(&self, other: &PolyVec, dim: usize, op: impl Fn(&Vector, &Vector) -> Vector) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, dim, self.order.min(other.order));
        for (ma, va) in &self.terms {
            for (mb, vb) in &other.terms {
                if total_degree(ma) + total_degree(mb) > out.order {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, &op(va, vb));
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> PolyVec {
        let terms =
            self.terms.iter().filter(|(m, _)| total_degree(m) <= order).map(|(m, v)| (m.clone(), v.clone())).collect();
        PolyVec { terms, order, ..*self }
    }

    /// The `i`-th coefficient component as a scalar polynomial.
    pub fn component(&self, i: usize) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, 1, self.order);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &[v[i].clone()]);
        }
        out
    }

    /// Linear change of variables `ξ ↦ Mξ`, i.e. `p(ξ) ↦ p(Mξ)`.
    pub fn substitute_linear(&self, m: &Matrix) -> PolyVec {
        assert_eq!((m.rows(), m.cols()), (self.nvars, self.nvars));
        // images of the variables: ξ_i ↦ Σ_k M_ik ξ_k
        let var_images: Vec<PolyVec> = (0..self.nvars)
            .map(|i| {
                let mut p = PolyVec::zero(self.nvars, 1, self.order);
                for k in 0..self.nvars {
                    let mut mono = vec![0; self.nvars];
                    mono[k] = 1;
                    p.add_term(mono, &[m[(i, k)].clone()]);
                }
                p
            })
            .collect();
        let mut out = PolyVec::zero(self.nvars, self.dim, self.order);
        for (mono, v) in &self.terms {
            let mut factor = PolyVec::constant(self.nvars, self.order, &one());
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    factor = factor.convolve(&var_images[i], 1, |a, b| vec![&a[0] * &b[0]]);
                }
            }
            for (fm, fc) in &factor.terms {
                out.add_term(fm.clone(), &v.iter().map(|x| x * &fc[0]).collect::<Vector>());
            }
        }
        out
    }

    pub fn constant(nvars: usize, order: u32, c: &Rational) -> PolyVec {
        let mut p = PolyVec::zero(nvars, 1, order);
        p.add_term(vec![0; nvars], &[c.clone()]);
        p
    }

    /// Coordinates of the scalar components over the monomials of degree
    /// `1..=order`, in [`monomials`] order.
    pub fn scalar_coordinates(&self) -> Vector {
        assert_eq!(self.dim, 1);
        monomials(self.nvars, 1, self.order).iter().map(|m| self.coefficient(m)[0].clone()).collect()
    }
}

pub fn format_monomial(m: &Monomial, var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{var}{}", i + 1)),
            _ => parts.push(format!("{var}{}^{e}", i + 1)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Renders a scalar polynomial like `ξ1^2 - 1/2·ξ1·ξ2`.
pub fn format_scalar(p: &PolyVec, var: &str) -> String {
    let mut out = String::new();
    for m in monomials(p.nvars(), 0, p.order()) {
        let c = p.coefficient(&m)[0].clone();
        if c.is_zero() {
            continue;
        }
        let mono = format_monomial(&m, var);
        if mono == "1" {
            let s = format_rational(&c);
            match (out.is_empty(), s.strip_prefix('-')) {
                (true, _) => out.push_str(&s),
                (false, Some(abs)) => out.push_str(&format!(" - {abs}")),
                (false, None) => out.push_str(&format!(" + {s}")),
            }
            continue;
        }
        out.push_str(&crate::rational::format_term_coeff(&c, out.is_empty()));
        out.push_str(&mono);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Renders a vector-valued polynomial with labelled coefficients, grouping
/// by basis label: `ξ1^2·y`, `(ξ1^2 + ξ2)·y - ξ1·z`.
pub fn format_polyvec(p: &PolyVec, var: &str, labels: &[String]) -> String {
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        let comp = p.component(i);
        if comp.is_zero() {
            continue;
        }
        let s = format_scalar(&comp, var);
        let single = comp.terms().len() == 1;
        if single {
            let (m, c) = comp.terms().iter().next().unwrap();
            let c = &c[0];
            let mono = format_monomial(m, var);
            out.push_str(&crate::rational::format_term_coeff(c, out.is_empty()));
            if mono == "1" {
                out.push_str(label);
            } else {
                out.push_str(&format!("{mono}·{label}"));
            }
        } else {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("({s})·{label}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn format_coefficient(c: &Rational) -> String {
    format_rational(c)
}
