//! Formal Kuranishi recursion: the solution `x(ξ) = ξ − ½h[x(ξ), x(ξ)]`,
//! the obstruction map `Ob(ξ) = ½π[x(ξ), x(ξ)]`, and the base ring
//! `k[[ξ]]/(Ob)` truncated at a finite order.

use std::fmt;

use num_traits::Zero;

use crate::dgla::Dgla;
use crate::error::Result;
use crate::homotopy::{homotopy_data_with, CanonicalSplitter, HomotopyData, Splitter};
use crate::linalg::{add_scaled, zero_vector, Subspace, Vector};
use crate::poly::{format_polyvec, format_scalar, monomials, total_degree, Monomial, PolyVec};
use crate::rational::{frac, int, Rational};

/// `k[[ξ_1..ξ_m]]/(relations)`, truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePresentation {
    pub nvars: usize,
    pub order: u32,
    /// Scalar polynomials (dimension-1 `PolyVec`s), zero ones dropped.
    pub relations: Vec<PolyVec>,
}

impl BasePresentation {
    /// The truncated ideal generated by the relations, as a subspace of the
    /// coordinates over the monomials of degree `1..=order`.
    pub fn ideal(&self) -> Subspace {
        let monos = monomials(self.nvars, 1, self.order);
        let mut gens = Vec::new();
        for r in &self.relations {
            for m in monomials(self.nvars, 0, self.order) {
                let mut mono = PolyVec::zero(self.nvars, 1, self.order);
                mono.add_term(m, &[int(1)]);
                gens.push(r.convolve(&mono, 1, |a, b| vec![&a[0] * &b[0]]).scalar_coordinates());
            }
        }
        Subspace::span(monos.len(), &gens)
    }

    /// Dimension of the truncated base ring as a vector space.
    pub fn dim(&self) -> usize {
        monomials(self.nvars, 0, self.order).len() - self.ideal().dim()
    }

    pub fn contains(&self, p: &PolyVec) -> bool {
        self.ideal().contains(&p.truncate(self.order).scalar_coordinates())
    }

    /// Two presentations with the same variables cut out the same truncated ring.
    pub fn same_ring(&self, other: &BasePresentation) -> bool {
        self.nvars == other.nvars && self.order == other.order && self.ideal() == other.ideal()
    }
}

impl fmt::Display for BasePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nvars == 0 {
            return write!(f, "k");
        }
        let vars: Vec<String> = (1..=self.nvars).map(|i| format!("ξ{i}")).collect();
        if self.relations.is_empty() {
            return write!(f, "k[[{}]]", vars.join(","));
        }
        let rels: Vec<String> = self.relations.iter().map(|r| format_scalar(r, "ξ")).collect();
        write!(f, "k[{}]/({})", vars.join(","), rels.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct KuranishiResult {
    pub order: u32,
    /// Chosen representatives of `H¹` (global vectors); `ξ_i` is dual to the
    /// `i`-th one.
    pub h1_basis: Vec<Vector>,
    /// Chosen representatives of `H²` (global vectors).
    pub h2_basis: Vec<Vector>,
    pub h2_labels: Vec<String>,
    /// `x(ξ)` with coefficients in global coordinates of `g`.
    pub solution: PolyVec,
    /// `Ob(ξ)` with coefficients in the `H²` representative basis.
    pub obstruction: PolyVec,
    pub base: BasePresentation,
}

impl KuranishiResult {
    pub fn nvars(&self) -> usize {
        self.h1_basis.len()
    }

    /// `Ob(ξ)` as a polynomial with coefficients in `g²`.
    pub fn obstruction_in_g(&self, dim: usize) -> PolyVec {
        self.obstruction.map_with(dim, |c| {
            let mut v = zero_vector(dim);
            for (ci, r) in c.iter().zip(&self.h2_basis) {
                add_scaled(&mut v, ci, r);
            }
            v
        })
    }

    /// `dx(ξ) + ½[x(ξ), x(ξ)] − Ob(ξ)` in `g²`, truncated at the order.
    pub fn residual(&self, g: &Dgla) -> PolyVec {
        let x = &self.solution;
        let dx = x.map_with(g.dim(), |v| g.d(v));
        let half = frac(1, 2);
        let sq = x.convolve(x, g.dim(), |a, b| g.bracket(a, b)).scale(&half);
        dx.add(&sq).sub(&self.obstruction_in_g(g.dim()))
    }

    /// Rendering like `ξ1^2·y`, using `H²` labels.
    pub fn format_obstruction(&self) -> String {
        format_polyvec(&self.obstruction, "ξ", &self.h2_labels)
    }
}

fn label_of(g: &Dgla, v: &[Rational]) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == int(1) {
        g.label(nz[0]).to_string()
    } else {
        format!("({})", crate::dgla::format_vector(g.space(), v))
    }
}

pub fn kuranishi(g: &Dgla, order: u32) -> KuranishiResult {
    kuranishi_with(g, order, &CanonicalSplitter).expect("canonical splittings always exist")
}

pub fn kuranishi_with(g: &Dgla, order: u32, splitter: &dyn Splitter) -> Result<KuranishiResult> {
    let hd = homotopy_data_with(g, splitter)?;
    Ok(kuranishi_from(g, order, &hd))
}

pub fn kuranishi_from(g: &Dgla, order: u32, hd: &HomotopyData) -> KuranishiResult {
    let n = g.dim();
    let h1 = hd.representatives(g, 1);
    let h2 = hd.representatives(g, 2);
    let m = h1.len();
    let mut x = PolyVec::zero(m, n, order);
    for (i, r) in h1.iter().enumerate() {
        let mut mono: Monomial = vec![0; m];
        mono[i] = 1;
        x.add_term(mono, r);
    }
    let half = frac(1, 2);
    let minus_half = -half.clone();
    // Degree-k part of x only depends on lower parts of x.
    for k in 2..=order {
        let sq = x.convolve(&x, n, |a, b| g.bracket(a, b)).part(k);
        let step = sq.map_with(n, |v| hd.h.mul_vec(v)).scale(&minus_half);
        x = x.add(&step);
    }
    let sq = x.convolve(&x, n, |a, b| g.bracket(a, b)).scale(&half);
    let obstruction = sq.map_with(h2.len(), |v| hd.harmonic_coordinates(g, 2, v));
    let relations: Vec<PolyVec> =
        (0..h2.len()).map(|j| obstruction.component(j)).filter(|p| !p.is_zero()).map(|p| monic(&p)).collect();
    let h2_labels = h2.iter().map(|r| label_of(g, r)).collect();
    debug_assert!(obstruction.terms().keys().all(|mono| total_degree(mono) >= 2));
    KuranishiResult {
        order,
        h1_basis: h1,
        h2_basis: h2,
        h2_labels,
        solution: x,
        obstruction,
        base: BasePresentation { nvars: m, order, relations },
    }
}

/// Rescales a nonzero scalar polynomial so its first term (in display
/// order) has coefficient 1; the ideal is unchanged.
fn monic(p: &PolyVec) -> PolyVec {
    let lead = monomials(p.nvars(), 0, p.order())
        .into_iter()
        .map(|m| p.coefficient(&m)[0].clone())
        .find(|c| !c.is_zero())
        .expect("relation is nonzero");
    p.scale(&lead.recip())
}

/// Whether every component of the residual lies in the truncated ideal
/// generated by the obstruction components.
pub fn residual_in_obstruction_ideal(g: &Dgla, k: &KuranishiResult) -> bool {
    let r = k.residual(g);
    (0..g.dim()).all(|i| k.base.contains(&r.component(i)))
}
