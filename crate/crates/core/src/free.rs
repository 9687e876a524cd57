//! Free graded Lie algebras truncated by bracket length, realised inside the
//! tensor algebra through graded commutators, and the step-by-step free
//! approximation of a dgla.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dgla::{cohomology, induced_map_on_h, validate_morphism, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::{kernel_basis, solve, zero_vector, Matrix, Vector};
use crate::rational::{int, sign, Rational};

/// Noncommutative polynomial in the generators: word ↦ coefficient.
pub type Tensor = BTreeMap<Vec<usize>, Rational>;

fn tensor_add(acc: &mut Tensor, t: &Tensor, c: &Rational) {
    for (w, x) in t {
        let e = acc.entry(w.clone()).or_insert_with(Rational::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

/// Generator of a free dgla, with `d` of the generator given as a tensor
/// (a Lie element in the generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGenerator {
    pub label: String,
    pub degree: i32,
    pub d: Tensor,
}

/// `Free(V)` modulo brackets of length greater than `max_length`.
#[derive(Clone, Debug)]
pub struct FreeDgla {
    pub dgla: Dgla,
    pub generators: Vec<FreeGenerator>,
    pub max_length: usize,
    /// For each basis element (global order): the generator sequence whose
    /// right-normed bracket it is, and its tensor.
    pub sequences: Vec<Vec<usize>>,
    pub tensors: Vec<Tensor>,
}

impl FreeDgla {
    /// The tensor of a global vector.
    pub fn tensor_of(&self, v: &[Rational]) -> Tensor {
        let mut t = Tensor::new();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                tensor_add(&mut t, &self.tensors[i], c);
            }
        }
        t
    }

    /// Basis index of a generator.
    pub fn generator_index(&self, i: usize) -> usize {
        self.dgla.index_of(&self.generators[i].label).expect("generators are basis elements")
    }

    /// Length of the bracket word behind a basis element.
    pub fn length_of(&self, i: usize) -> usize {
        self.sequences[i].len()
    }
}

fn commutator(a: &Tensor, b: &Tensor, degree: &dyn Fn(&[usize]) -> i32, max_len: usize) -> Tensor {
    let mut out = Tensor::new();
    for (wa, x) in a {
        for (wb, y) in b {
            if wa.len() + wb.len() > max_len {
                continue;
            }
            let xy = x * y;
            let mut ab = wa.clone();
            ab.extend(wb);
            let mut ba = wb.clone();
            ba.extend(wa);
            tensor_add(&mut out, &Tensor::from([(ab, int(1))]), &xy);
            let s = -sign(i64::from(degree(wa)) * i64::from(degree(wb)));
            tensor_add(&mut out, &Tensor::from([(ba, int(1))]), &(xy * s));
        }
    }
    out
}

/// Incremental sparse echelon form of the chosen basis tensors of one
/// (length, degree) group; each row remembers its combination of members.
#[derive(Default)]
struct Echelon {
    members: Vec<usize>,
    rows: Vec<(Vec<usize>, Tensor, BTreeMap<usize, Rational>)>,
}

impl Echelon {
    /// `t = Σ c_k member_k + residual`, with the residual reduced.
    fn reduce(&self, t: &Tensor) -> (Tensor, BTreeMap<usize, Rational>) {
        let mut res = t.clone();
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (pivot, row, combo) in &self.rows {
            let Some(c) = res.get(pivot).cloned() else { continue };
            tensor_add(&mut res, row, &-c.clone());
            for (k, x) in combo {
                let e = coeffs.entry(*k).or_insert_with(Rational::zero);
                *e += &c * x;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        (res, coeffs)
    }

    /// Adds `t` (stored as tensor number `id`) if independent.
    fn insert(&mut self, id: usize, t: &Tensor) -> bool {
        let (res, coeffs) = self.reduce(t);
        let Some(pivot) = res.keys().next().cloned() else { return false };
        let p = res[&pivot].clone();
        let inv = p.recip();
        let row: Tensor = res.into_iter().map(|(w, c)| (w, c * &inv)).collect();
        let slot = self.members.len();
        let mut combo: BTreeMap<usize, Rational> = coeffs.into_iter().map(|(k, c)| (k, -c * &inv)).collect();
        combo.insert(slot, inv);
        self.members.push(id);
        self.rows.push((pivot, row, combo));
        true
    }
}

/// Free graded Lie algebra on the generators, with the differential
/// extended as a derivation, modulo brackets longer than `max_length`.
pub fn free_dgla_on(generators: &[FreeGenerator], max_length: usize) -> Result<FreeDgla> {
    if max_length == 0 && !generators.is_empty() {
        return Err(Error::WindowTooSmall("word length must be at least 1".into()));
    }
    let ngens = generators.len();
    let gdeg = |w: &[usize]| -> i32 { w.iter().map(|&g| generators[g].degree).sum() };
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    let mut tensors: Vec<Tensor> = Vec::new();
    let mut degrees: Vec<i32> = Vec::new();
    let mut groups: BTreeMap<(usize, i32), Echelon> = BTreeMap::new();
    // right-normed brackets of length l are [g, b] for b of length l - 1
    let mut previous: Vec<(Vec<usize>, Tensor)> = Vec::new();
    for len in 1..=max_length {
        let candidates: Vec<(Vec<usize>, Tensor)> = if len == 1 {
            (0..ngens).map(|g| (vec![g], Tensor::from([(vec![g], int(1))]))).collect()
        } else {
            let mut out = Vec::new();
            for g in 0..ngens {
                let gt = Tensor::from([(vec![g], int(1))]);
                for (seq, t) in &previous {
                    let mut s = vec![g];
                    s.extend(seq);
                    out.push((s, commutator(&gt, t, &gdeg, max_length)));
                }
            }
            out
        };
        let mut kept = Vec::new();
        for (seq, t) in candidates {
            if t.is_empty() {
                continue;
            }
            let deg = gdeg(&seq);
            if groups.entry((len, deg)).or_default().insert(tensors.len(), &t) {
                tensors.push(t.clone());
                sequences.push(seq.clone());
                degrees.push(deg);
                kept.push((seq, t));
            }
        }
        // spans of all right-normed brackets equal the spans of the kept ones
        previous = kept;
    }
    let label = |seq: &[usize]| -> String {
        let mut s = generators[seq[seq.len() - 1]].label.clone();
        for &g in seq[..seq.len() - 1].iter().rev() {
            s = format!("[{},{}]", generators[g].label, s);
        }
        s
    };
    let basis: Vec<(String, i32)> = sequences.iter().zip(&degrees).map(|(s, &d)| (label(s), d)).collect();
    let space = GradedVectorSpace::from_basis(&basis)?;
    // reorder everything to the space's global order
    let mut order = vec![0; basis.len()];
    let mut global = vec![0; basis.len()];
    for (k, (l, _)) in basis.iter().enumerate() {
        let i = space.index_of(l).expect("label inserted");
        order[i] = k;
        global[k] = i;
    }
    let sequences: Vec<Vec<usize>> = order.iter().map(|&k| sequences[k].clone()).collect();
    let tensors: Vec<Tensor> = order.iter().map(|&k| tensors[k].clone()).collect();
    let n = space.dim();
    let not_lie = || Error::Validation("tensor is not a Lie element of the truncated free algebra".into());
    let express = |t: &Tensor| -> Result<Vector> {
        let mut out = zero_vector(n);
        let mut parts: BTreeMap<(usize, i32), Tensor> = BTreeMap::new();
        for (w, c) in t {
            parts.entry((w.len(), gdeg(w))).or_default().insert(w.clone(), c.clone());
        }
        for (key, part) in parts {
            let ech = groups.get(&key).ok_or_else(not_lie)?;
            let (res, coeffs) = ech.reduce(&part);
            if !res.is_empty() {
                return Err(not_lie());
            }
            for (k, c) in coeffs {
                out[global[ech.members[k]]] += c;
            }
        }
        Ok(out)
    };
    let mut bracket = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if sequences[i].len() + sequences[j].len() > max_length {
                continue;
            }
            let t = commutator(&tensors[i], &tensors[j], &gdeg, max_length);
            if t.is_empty() {
                continue;
            }
            let v = express(&t)?;
            let c = crate::dgla::to_sparse(&v);
            if !c.is_empty() {
                bracket.insert((i, j), c);
            }
        }
    }
    // d on words: Σ_i (-1)^{|a_1..a_{i-1}|} a_1 .. d(a_i) .. a_l, truncated
    let d_word = |w: &[usize]| -> Tensor {
        let mut out = Tensor::new();
        let mut prefix_deg = 0i64;
        for (i, &g) in w.iter().enumerate() {
            let s = sign(prefix_deg);
            for (dw, c) in &generators[g].d {
                let mut nw = w[..i].to_vec();
                nw.extend(dw);
                nw.extend(&w[i + 1..]);
                if nw.len() <= max_length {
                    tensor_add(&mut out, &Tensor::from([(nw, int(1))]), &(c * &s));
                }
            }
            prefix_deg += i64::from(generators[g].degree);
        }
        out
    };
    let mut dm = Matrix::zeros(n, n);
    for j in 0..n {
        let mut t = Tensor::new();
        for (w, c) in &tensors[j] {
            tensor_add(&mut t, &d_word(w), c);
        }
        let v = express(&t)?;
        for (i, x) in v.into_iter().enumerate() {
            dm[(i, j)] = x;
        }
    }
    let differential = GradedMap::from_global(&space, &space, 1, &dm)?;
    let dgla = Dgla::new(space, differential, bracket)?;
    Ok(FreeDgla { dgla, generators: generators.to_vec(), max_length, sequences, tensors })
}

/// Free graded Lie algebra on a graded vector space, zero differential.
pub fn free_dgla(v: &GradedVectorSpace, max_length: usize) -> Result<FreeDgla> {
    let gens: Vec<FreeGenerator> =
        v.basis().into_iter().map(|(label, degree)| FreeGenerator { label, degree, d: Tensor::new() }).collect();
    free_dgla_on(&gens, max_length)
}

/// A stage of the free approximation: a free dgla `g(i)` with a morphism
/// `φ(i): g(i) → g` determined by the images of the generators.
#[derive(Clone, Debug)]
pub struct FreeApproximationState {
    pub stage: usize,
    pub free: FreeDgla,
    pub phi: DglaMorphism,
    /// `φ(i)` on each generator (global vectors of the target).
    pub generator_images: Vec<Vector>,
    pub target: Dgla,
    /// Kernels of `θ` below this degree are left alone.
    pub min_degree: i32,
}

fn extend_morphism(free: &FreeDgla, target: &Dgla, images: &[Vector]) -> Result<DglaMorphism> {
    let cols: Vec<Vector> = free
        .sequences
        .iter()
        .map(|seq| {
            let mut v = images[seq[seq.len() - 1]].clone();
            for &g in seq[..seq.len() - 1].iter().rev() {
                v = target.bracket(&images[g], &v);
            }
            v
        })
        .collect();
    let m = Matrix::from_columns(&cols, target.dim());
    let f = DglaMorphism::from_global(&free.dgla, target, &m)?;
    let report = validate_morphism(&f);
    if !report.is_ok() {
        return Err(Error::WindowTooSmall(format!(
            "truncation breaks the comparison map: {}",
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(f)
}

impl FreeApproximationState {
    /// `g(1) = Free(V)` on cocycle representatives of `H(g)`.
    pub fn init(g: &Dgla, max_length: usize) -> Result<Self> {
        let mut gens = Vec::new();
        let mut images = Vec::new();
        for n in g.space().support() {
            let c = cohomology(g, n);
            if n < 0 && c.dim() > 0 {
                return Err(Error::NegativeCohomology { degree: n });
            }
            for r in c.representatives.basis() {
                gens.push(FreeGenerator { label: format!("v{}", gens.len() + 1), degree: n, d: Tensor::new() });
                images.push(g.space().embed(n, r));
            }
        }
        let free = free_dgla_on(&gens, max_length)?;
        let phi = extend_morphism(&free, g, &images)?;
        Ok(FreeApproximationState { stage: 1, free, phi, generator_images: images, target: g.clone(), min_degree: 0 })
    }

    /// Restricts the degrees in which kernels are killed to `n ≥ min_degree`.
    pub fn with_min_degree(mut self, min_degree: i32) -> Self {
        self.min_degree = min_degree;
        self
    }

    /// Lowest degree where `θ = H(φ)` has a kernel, with kernel cocycles
    /// (global vectors of the free dgla).
    pub fn lowest_kernel(&self) -> Result<Option<(i32, Vec<Vector>)>> {
        for n in self.free.dgla.space().support().into_iter().filter(|&n| n >= self.min_degree) {
            let theta = induced_map_on_h(&self.phi, n)?;
            let ker = kernel_basis(&theta);
            if ker.dim() == 0 {
                continue;
            }
            let reps = cohomology(&self.free.dgla, n).representatives;
            let cocycles = ker
                .basis()
                .iter()
                .map(|c| {
                    let mut local = zero_vector(reps.ambient_dim());
                    for (k, r) in reps.basis().iter().enumerate() {
                        crate::linalg::add_scaled(&mut local, &c[k], r);
                    }
                    self.free.dgla.space().embed(n, &local)
                })
                .collect();
            return Ok(Some((n, cocycles)));
        }
        Ok(None)
    }

    /// Kills the kernel of `θ` in its lowest degree by adjoining generators
    /// `Y` with `dY = x_α` and `φ(Y) = y_α`, where `d y_α = φ(x_α)`.
    pub fn step(&self) -> Result<Self> {
        let Some((n, cocycles)) = self.lowest_kernel()? else { return Ok(self.clone()) };
        let mut gens = self.free.generators.clone();
        let mut images = self.generator_images.clone();
        let g = &self.target;
        let dprev = g.d_block(n - 1);
        let ycount = gens.iter().filter(|x| x.label.starts_with('y')).count();
        for (k, x) in cocycles.iter().enumerate() {
            let fx = g.space().component_of(&self.phi.apply(x), n);
            let y_local = if dprev.cols() == 0 {
                if fx.iter().all(Zero::is_zero) {
                    Vec::new()
                } else {
                    return Err(Error::Validation("class in the kernel is not a coboundary".into()));
                }
            } else {
                solve(&dprev, &fx).ok_or_else(|| Error::Validation("class in the kernel is not a coboundary".into()))?
            };
            gens.push(FreeGenerator {
                label: format!("y{}", ycount + k + 1),
                degree: n - 1,
                d: self.free.tensor_of(x),
            });
            images.push(g.space().embed(n - 1, &y_local));
        }
        let free = free_dgla_on(&gens, self.free.max_length)?;
        let phi = extend_morphism(&free, g, &images)?;
        Ok(FreeApproximationState {
            stage: self.stage + 1,
            free,
            phi,
            generator_images: images,
            target: g.clone(),
            min_degree: self.min_degree,
        })
    }
}
