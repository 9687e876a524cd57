//! Splittings `g^n = H^n ⊕ B^n ⊕ C^n` and the contraction they determine.
//!
//! How complements are chosen is a strategy: the canonical echelon choice,
//! or a group-averaged choice that keeps every piece stable under an action.

use std::collections::BTreeMap;

use crate::dgla::{cohomology_with, Cohomology, Dgla};
use crate::equivariant::{equivariant_complement, GroupAction};
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::linalg::{complement, solve, zero_vector, Matrix, Subspace, Vector};
use crate::rational::{int, Rational};

/// Chooses a complement of `u` inside `v`, both in the local coordinates of
/// the degree-`degree` component.
pub trait Splitter {
    fn name(&self) -> &'static str;
    fn complement(&self, degree: i32, u: &Subspace, v: &Subspace) -> Result<Subspace>;
}

/// Non-pivot coordinates of the echelon form; see [`complement`].
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalSplitter;

impl Splitter for CanonicalSplitter {
    fn name(&self) -> &'static str {
        "canonical"
    }

    fn complement(&self, _degree: i32, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        complement(u, v)
    }
}

/// Complements stable under a group action on the whole space.
#[derive(Clone, Debug)]
pub struct EquivariantSplitter {
    pub action: GroupAction,
    pub space: GradedVectorSpace,
}

impl Splitter for EquivariantSplitter {
    fn name(&self) -> &'static str {
        "equivariant"
    }

    fn complement(&self, degree: i32, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        equivariant_complement(u, v, &self.action, &self.space, degree)
    }
}

pub const SPLITTER_NAMES: &[&str] = &["canonical", "equivariant"];

/// Looks a splitting strategy up by name; `equivariant` needs an action.
pub fn splitter_by_name(name: &str, action: Option<&GroupAction>, space: &GradedVectorSpace) -> Result<Box<dyn Splitter>> {
    match name {
        "canonical" => Ok(Box::new(CanonicalSplitter)),
        "equivariant" => {
            let action = action.ok_or_else(|| Error::InvalidAction("the equivariant splitter needs a group action".into()))?;
            Ok(Box::new(EquivariantSplitter { action: action.clone(), space: space.clone() }))
        }
        other => Err(Error::UnknownName(format!("splitter {other:?}"))),
    }
}

/// Per-degree splittings with harmonic projector `π` and contraction `h`
/// (degree −1) satisfying `dh + hd = id − π`, `h² = 0`, `hπ = πh = 0`.
#[derive(Clone, Debug)]
pub struct HomotopyData {
    pub cohomology: BTreeMap<i32, Cohomology>,
    /// Complement `C^n` of the cocycles, local coordinates.
    pub complements: BTreeMap<i32, Subspace>,
    /// Global matrices.
    pub pi: Matrix,
    pub h: Matrix,
}

impl HomotopyData {
    pub fn cohomology(&self, n: i32) -> Option<&Cohomology> {
        self.cohomology.get(&n)
    }

    /// Representatives of `H^n` as global vectors.
    pub fn representatives(&self, g: &Dgla, n: i32) -> Vec<Vector> {
        match self.cohomology.get(&n) {
            Some(c) => c.representatives.basis().iter().map(|r| g.space().embed(n, r)).collect(),
            None => Vec::new(),
        }
    }

    /// Coordinates of `π(v)` in the representative basis of `H^n`, for `v`
    /// a global vector supported in degree `n`.
    pub fn harmonic_coordinates(&self, g: &Dgla, n: i32, v: &[Rational]) -> Vector {
        let Some(c) = self.cohomology.get(&n) else { return Vec::new() };
        let local = g.space().component_of(&self.pi.mul_vec(v), n);
        c.representatives.coordinates(&local).expect("π lands in the representatives")
    }

    /// Checks the side conditions; returns the first failing identity.
    pub fn verify(&self, g: &Dgla) -> Result<()> {
        let n = g.dim();
        let d = g.differential().global_matrix();
        let lhs = d.mul(&self.h).add(&self.h.mul(&d));
        if lhs != Matrix::identity(n).sub(&self.pi) {
            return Err(Error::Validation("dh + hd ≠ id − π".into()));
        }
        if !self.h.mul(&self.h).is_zero() {
            return Err(Error::Validation("h² ≠ 0".into()));
        }
        if !self.h.mul(&self.pi).is_zero() || !self.pi.mul(&self.h).is_zero() {
            return Err(Error::Validation("h and π do not annihilate each other".into()));
        }
        if self.pi.mul(&self.pi) != self.pi {
            return Err(Error::Validation("π is not idempotent".into()));
        }
        Ok(())
    }
}

pub fn homotopy_data(g: &Dgla) -> HomotopyData {
    homotopy_data_with(g, &CanonicalSplitter).expect("canonical complements always exist")
}

pub fn homotopy_data_with(g: &Dgla, splitter: &dyn Splitter) -> Result<HomotopyData> {
    let space = g.space();
    let dim = g.dim();
    let mut coh = BTreeMap::new();
    let mut comps = BTreeMap::new();
    let mut error = None;
    for n in space.support() {
        let c = cohomology_with(g, n, &mut |deg, b, z| {
            splitter.complement(deg, b, z).or_else(|e| {
                error.get_or_insert(e);
                Ok(Subspace::zero(b.ambient_dim()))
            })
        });
        if let Some(e) = error.take() {
            return Err(e);
        }
        let full = Subspace::full(space.dim_in(n));
        comps.insert(n, splitter.complement(n, &c.cocycles, &full)?);
        coh.insert(n, c);
    }
    let mut pi = Matrix::zeros(dim, dim);
    let mut h = Matrix::zeros(dim, dim);
    for n in space.support() {
        let c = &coh[&n];
        let cn = &comps[&n];
        let local_dim = space.dim_in(n);
        // P = [B | H | C] in local coordinates of g^n
        let mut cols: Vec<Vector> = c.coboundaries.basis().to_vec();
        cols.extend(c.representatives.basis().iter().cloned());
        cols.extend(cn.basis().iter().cloned());
        let p = Matrix::from_columns(&cols, local_dim);
        let p_inv = p.inverse().expect("B ⊕ H ⊕ C spans the component");
        let nb = c.coboundaries.dim();
        let nh = c.representatives.dim();
        // π: keep the H block
        let mut sel = Matrix::zeros(local_dim, local_dim);
        for k in nb..nb + nh {
            sel[(k, k)] = int(1);
        }
        let pi_local = p.mul(&sel).mul(&p_inv);
        // h: B^n → C^{n-1}, inverting d restricted to C^{n-1}
        let mut h_cols: Vec<Vector> = vec![zero_vector(space.dim_in(n - 1)); local_dim];
        if nb > 0 {
            let prev = &comps[&(n - 1)];
            let dprev = g.d_block(n - 1);
            let c_basis = Matrix::from_columns(prev.basis(), space.dim_in(n - 1));
            let dc = dprev.mul(&c_basis);
            for (k, b) in c.coboundaries.basis().iter().enumerate() {
                let y = solve(&dc, b).expect("d maps the complement onto the coboundaries");
                h_cols[k] = c_basis.mul_vec(&y);
            }
        }
        let h_local = Matrix::from_columns(&h_cols, space.dim_in(n - 1)).mul(&p_inv);
        let off = space.range(n).start;
        for i in 0..local_dim {
            for j in 0..local_dim {
                pi[(off + i, off + j)] = pi_local[(i, j)].clone();
            }
        }
        if nb > 0 {
            let off_prev = space.range(n - 1).start;
            for i in 0..h_local.rows() {
                for j in 0..local_dim {
                    h[(off_prev + i, off + j)] = h_local[(i, j)].clone();
                }
            }
        }
    }
    Ok(HomotopyData { cohomology: coh, complements: comps, pi, h })
}
