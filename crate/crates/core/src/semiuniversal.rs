//! The semi-universal sub-dgla `𝔨` (zero in degrees ≤ 0, `E¹ ⊕ H¹` in degree
//! 1, all of `g` above) and the étale / prorepresentability criteria.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dgla::{cohomology, format_vector, quasi_iso_check, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::homotopy::{CanonicalSplitter, Splitter};
use crate::linalg::{Subspace, Vector};
use crate::rational::int;

/// The splittings `g¹ = Z¹ ⊕ E¹` and `Z¹ = B¹ ⊕ H¹` (local coordinates of `g¹`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    pub z1: Subspace,
    pub b1: Subspace,
    pub h1: Subspace,
    pub e1: Subspace,
}

#[derive(Clone, Debug)]
pub struct SemiUniversalModel {
    pub k: Dgla,
    pub inclusion: DglaMorphism,
    pub splitting: SplittingData,
}

fn piece_label(g: &Dgla, v: &[crate::rational::Rational]) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == int(1) {
        g.label(nz[0]).to_string()
    } else {
        format!("({})", format_vector(g.space(), v))
    }
}

pub fn semi_universal_model(g: &Dgla) -> Result<SemiUniversalModel> {
    semi_universal_model_with(g, &CanonicalSplitter)
}

pub fn semi_universal_model_with(g: &Dgla, splitter: &dyn Splitter) -> Result<SemiUniversalModel> {
    let space = g.space();
    for n in space.support() {
        if n < 0 {
            let c = cohomology(g, n);
            if c.dim() > 0 {
                return Err(Error::NotConcentrated { degree: n, dim: c.dim() });
            }
        }
    }
    let c1 = cohomology(g, 1);
    let h1 = splitter.complement(1, &c1.coboundaries, &c1.cocycles)?;
    let e1 = splitter.complement(1, &c1.cocycles, &Subspace::full(space.dim_in(1)))?;
    let mut pieces: Vec<(String, i32, Vector)> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for local in e1.basis().iter().chain(h1.basis()) {
        let v = space.embed(1, local);
        let mut label = piece_label(g, &v);
        // distinct vectors may render alike only if they are scalar multiples
        let count = seen.entry(label.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            label = format!("{label}#{count}");
        }
        pieces.push((label, 1, v));
    }
    for n in space.support().into_iter().filter(|&n| n >= 2) {
        for i in space.range(n) {
            let v = crate::linalg::unit_vector(g.dim(), i);
            pieces.push((g.label(i).to_string(), n, v));
        }
    }
    let (k, inclusion) = g.subalgebra(&pieces)?;
    Ok(SemiUniversalModel { k, inclusion, splitting: SplittingData { z1: c1.cocycles, b1: c1.coboundaries, h1, e1 } })
}

/// `true` iff `H^i(f)` is invertible for every `i ≥ 1` among `degrees`.
pub fn etale_check(f: &DglaMorphism, degrees: &[i32]) -> Result<bool> {
    let positive: Vec<i32> = degrees.iter().copied().filter(|&i| i >= 1).collect();
    Ok(quasi_iso_check(f, &positive)?.values().all(|&b| b))
}

/// The first degree `n ≤ 0` among `degrees` with `H^n ≠ 0`, with its
/// representatives as global vectors.
pub fn prorep_witness(g: &Dgla, degrees: &[i32]) -> Option<(i32, Vec<Vector>)> {
    degrees.iter().copied().filter(|&n| n <= 0).find_map(|n| {
        let c = cohomology(g, n);
        (c.dim() > 0).then(|| (n, c.representatives.basis().iter().map(|r| g.space().embed(n, r)).collect()))
    })
}

/// `true` iff `H^n(g) = 0` for every `n ≤ 0` among `degrees`.
pub fn prorep_check(g: &Dgla, degrees: &[i32]) -> bool {
    prorep_witness(g, degrees).is_none()
}
