//! Linear group actions on dglas: finite groups given by generator matrices
//! and split tori given by weights. Averaging supplies stable splittings, and
//! with them equivariant semi-universal models and Kuranishi data.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::dgla::{Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::homotopy::EquivariantSplitter;
use crate::kuranishi::{kuranishi_with, KuranishiResult};
use crate::linalg::{complement, projector, solve, unit_vector, Matrix, Subspace, Vector};
use crate::rational::{frac, int, Rational};
use crate::semiuniversal::{semi_universal_model_with, SemiUniversalModel};

/// Finite groups are enumerated by closure; beyond this many elements the
/// group is treated as not averagable.
pub const ELEMENT_CAP: usize = 5040;

/// Common interface of the supported symmetry kinds.
pub trait Symmetry {
    fn kind(&self) -> &'static str;
    fn generator_names(&self) -> Vec<String>;
    /// One global matrix per generator. A torus is represented by a single
    /// generic element whose eigenvalues separate all weights.
    fn generator_matrices(&self) -> Vec<Matrix>;
    /// Projector onto the invariants of the degree-`degree` component.
    fn reynolds(&self, space: &GradedVectorSpace, degree: i32) -> Result<Matrix>;
    /// A stable complement of `u` inside `v` (local coordinates).
    fn stable_complement(&self, u: &Subspace, v: &Subspace, space: &GradedVectorSpace, degree: i32) -> Result<Subspace>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    pub generators: Vec<String>,
    /// Words such as `a^2` or `a*b*a*b` that must act as the identity.
    pub relations: Vec<String>,
    pub matrices: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    pub rank: usize,
    /// Weight of each basis element, indexed like the global basis.
    pub weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAction {
    Finite(FiniteAction),
    Torus(TorusAction),
}

fn block(space: &GradedVectorSpace, m: &Matrix, n: i32) -> Matrix {
    let r = space.range(n);
    let mut out = Matrix::zeros(r.len(), r.len());
    for (i, gi) in r.clone().enumerate() {
        for (j, gj) in r.clone().enumerate() {
            out[(i, j)] = m[(gi, gj)].clone();
        }
    }
    out
}

fn check_stable(mats: &[Matrix], s: &Subspace, what: &str) -> Result<()> {
    if mats.iter().all(|m| s.is_stable_under(m)) {
        Ok(())
    } else {
        Err(Error::NotStable(what.into()))
    }
}

impl FiniteAction {
    pub fn new(generators: &[&str], relations: &[&str], matrices: Vec<Matrix>) -> Self {
        FiniteAction {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
            matrices,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    /// Evaluates a relation word like `a*b^2*a^-1`.
    pub fn evaluate_word(&self, word: &str, dim: usize) -> Result<Matrix> {
        let mut acc = Matrix::identity(dim);
        for factor in word.split('*').map(str::trim).filter(|f| !f.is_empty()) {
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    (n.trim(), p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?)
                }
                None => (factor, 1),
            };
            let k = self
                .generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::UnknownName(format!("generator {name:?} in relation {word:?}")))?;
            let base = if power < 0 {
                self.matrices[k].inverse().ok_or_else(|| Error::InvalidAction(format!("{name} is not invertible")))?
            } else {
                self.matrices[k].clone()
            };
            for _ in 0..power.unsigned_abs() {
                acc = acc.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Every group element, by closure under the generators.
    pub fn elements(&self) -> Result<Vec<Matrix>> {
        let id = Matrix::identity(self.dim());
        let mut seen: BTreeSet<Vec<Vector>> = BTreeSet::from([id.row_vectors()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &self.matrices {
                let next = g.mul(&m);
                if seen.insert(next.row_vectors()) {
                    if out.len() >= ELEMENT_CAP {
                        return Err(Error::NotAveragable(format!("more than {ELEMENT_CAP} elements")));
                    }
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }
}

impl Symmetry for FiniteAction {
    fn kind(&self) -> &'static str {
        "finite"
    }

    fn generator_names(&self) -> Vec<String> {
        self.generators.clone()
    }

    fn generator_matrices(&self) -> Vec<Matrix> {
        self.matrices.clone()
    }

    fn reynolds(&self, space: &GradedVectorSpace, degree: i32) -> Result<Matrix> {
        let n = space.dim_in(degree);
        let elements = self.elements()?;
        let mut acc = Matrix::zeros(n, n);
        for g in &elements {
            acc = acc.add(&block(space, g, degree));
        }
        Ok(acc.scale(&frac(1, elements.len() as i64)))
    }

    fn stable_complement(&self, u: &Subspace, v: &Subspace, space: &GradedVectorSpace, degree: i32) -> Result<Subspace> {
        let gens: Vec<Matrix> = self.matrices.iter().map(|m| block(space, m, degree)).collect();
        check_stable(&gens, u, "inner subspace")?;
        check_stable(&gens, v, "outer subspace")?;
        let n = space.dim_in(degree);
        let w0 = complement(u, v)?;
        let outside = complement(v, &Subspace::full(n))?;
        let p = projector(u, &w0.sum(&outside))?;
        let elements = self.elements()?;
        let mut avg = Matrix::zeros(n, n);
        for g in &elements {
            let gb = block(space, g, degree);
            let inv = gb.inverse().ok_or_else(|| Error::InvalidAction("group element is not invertible".into()))?;
            avg = avg.add(&gb.mul(&p).mul(&inv));
        }
        let avg = avg.scale(&frac(1, elements.len() as i64));
        let q = Matrix::identity(n).sub(&avg);
        let images: Vec<Vector> = v.basis().iter().map(|b| q.mul_vec(b)).collect();
        Ok(Subspace::span(n, &images))
    }
}

const PRIMES: &[i64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

impl TorusAction {
    pub fn new(rank: usize, weights: Vec<Vec<i64>>) -> Self {
        TorusAction { rank, weights }
    }

    /// Eigenvalue `∏ p_i^{w_i}` of the generic element on weight `w`; distinct
    /// weights give distinct eigenvalues by unique factorisation.
    pub fn character(&self, w: &[i64]) -> Rational {
        let mut acc = Rational::one();
        for (i, &e) in w.iter().enumerate() {
            let p = int(PRIMES[i % PRIMES.len()]);
            let f = if e >= 0 { p } else { Rational::one() / p };
            for _ in 0..e.unsigned_abs() {
                acc *= &f;
            }
        }
        acc
    }

    fn weights_in(&self, space: &GradedVectorSpace, degree: i32) -> Vec<&Vec<i64>> {
        space.range(degree).map(|i| &self.weights[i]).collect()
    }

    /// `V` split along the weight decomposition of the component.
    fn weight_parts(&self, v: &Subspace, space: &GradedVectorSpace, degree: i32) -> BTreeMap<Vec<i64>, Subspace> {
        let ws = self.weights_in(space, degree);
        let n = ws.len();
        let distinct: BTreeSet<&Vec<i64>> = ws.iter().copied().collect();
        distinct
            .into_iter()
            .map(|w| {
                let coords: Vec<Vector> = (0..n).filter(|&i| ws[i] == w).map(|i| unit_vector(n, i)).collect();
                (w.clone(), v.intersection(&Subspace::span(n, &coords)))
            })
            .collect()
    }
}

impl Symmetry for TorusAction {
    fn kind(&self) -> &'static str {
        "torus"
    }

    fn generator_names(&self) -> Vec<String> {
        vec!["t".into()]
    }

    fn generator_matrices(&self) -> Vec<Matrix> {
        let n = self.weights.len();
        let mut m = Matrix::zeros(n, n);
        for (i, w) in self.weights.iter().enumerate() {
            m[(i, i)] = self.character(w);
        }
        vec![m]
    }

    fn reynolds(&self, space: &GradedVectorSpace, degree: i32) -> Result<Matrix> {
        let ws = self.weights_in(space, degree);
        let n = ws.len();
        let mut m = Matrix::zeros(n, n);
        for (i, w) in ws.iter().enumerate() {
            if w.iter().all(|&e| e == 0) {
                m[(i, i)] = int(1);
            }
        }
        Ok(m)
    }

    fn stable_complement(&self, u: &Subspace, v: &Subspace, space: &GradedVectorSpace, degree: i32) -> Result<Subspace> {
        let gens: Vec<Matrix> = self.generator_matrices().iter().map(|m| block(space, m, degree)).collect();
        check_stable(&gens, u, "inner subspace")?;
        check_stable(&gens, v, "outer subspace")?;
        let n = space.dim_in(degree);
        let vs = self.weight_parts(v, space, degree);
        let us = self.weight_parts(u, space, degree);
        let mut out = Subspace::zero(n);
        for (w, vw) in &vs {
            out = out.sum(&complement(&us[w], vw)?);
        }
        Ok(out)
    }
}

impl GroupAction {
    pub fn symmetry(&self) -> &dyn Symmetry {
        match self {
            GroupAction::Finite(f) => f,
            GroupAction::Torus(t) => t,
        }
    }

    pub fn kind(&self) -> &'static str {
        self.symmetry().kind()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.symmetry().generator_names()
    }

    pub fn generator_matrices(&self) -> Vec<Matrix> {
        self.symmetry().generator_matrices()
    }

    /// The trivial action: no generators.
    pub fn trivial() -> Self {
        GroupAction::Finite(FiniteAction::new(&[], &[], Vec::new()))
    }

    fn dim(&self) -> Option<usize> {
        match self {
            GroupAction::Finite(f) if f.matrices.is_empty() => None,
            GroupAction::Finite(f) => Some(f.dim()),
            GroupAction::Torus(t) => Some(t.weights.len()),
        }
    }

    /// `Z/2` on E2: `x ↦ -x`, `y ↦ y`.
    pub fn e2_sign() -> Self {
        GroupAction::Finite(FiniteAction::new(&["s"], &["s^2"], vec![Matrix::from_i64(&[&[-1, 0], &[0, 1]])]))
    }

    /// `Z/2` on E3: `w ↦ -w`, `x2 ↦ -x2`, `z` and `x1` fixed.
    pub fn e3_sign() -> Self {
        let m = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]);
        GroupAction::Finite(FiniteAction::new(&["s"], &["s^2"], vec![m]))
    }

    /// `S3` on the permutation toy, generated by the transposition `(1 2)`
    /// and the cycle `(1 2 3)` acting on `z_i` and `x_i` alike; `y` fixed.
    pub fn s3_permutation() -> Self {
        let perm = |sigma: [usize; 3]| {
            let mut m = Matrix::zeros(7, 7);
            for block in [0, 3] {
                for (i, &s) in sigma.iter().enumerate() {
                    m[(block + s, block + i)] = int(1);
                }
            }
            m[(6, 6)] = int(1);
            m
        };
        GroupAction::Finite(FiniteAction::new(
            &["a", "b"],
            &["a^2", "b^3", "a*b*a*b"],
            vec![perm([1, 0, 2]), perm([1, 2, 0])],
        ))
    }

    /// The action induced on a sub-dgla through its inclusion; fails unless
    /// the image is stable.
    pub fn restrict(&self, incl: &DglaMorphism) -> Result<GroupAction> {
        let sub = &incl.source;
        let cols: Vec<Vector> = (0..sub.dim()).map(|j| incl.map.apply_basis(j)).collect();
        let m = Matrix::from_columns(&cols, incl.target.dim());
        match self {
            GroupAction::Finite(f) => {
                let mut mats = Vec::new();
                for g in &f.matrices {
                    let images: Result<Vec<Vector>> = cols
                        .iter()
                        .map(|c| solve(&m, &g.mul_vec(c)).ok_or_else(|| Error::NotStable("sub-dgla".into())))
                        .collect();
                    mats.push(Matrix::from_columns(&images?, sub.dim()));
                }
                Ok(GroupAction::Finite(FiniteAction {
                    generators: f.generators.clone(),
                    relations: f.relations.clone(),
                    matrices: mats,
                }))
            }
            GroupAction::Torus(t) => {
                let mut weights = Vec::new();
                for c in &cols {
                    let ws: BTreeSet<&Vec<i64>> =
                        c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| &t.weights[i]).collect();
                    match ws.len() {
                        1 => weights.push(ws.into_iter().next().unwrap().clone()),
                        0 => weights.push(vec![0; t.rank]),
                        _ => return Err(Error::NotStable("basis vector mixes weights".into())),
                    }
                }
                Ok(GroupAction::Torus(TorusAction { rank: t.rank, weights }))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionViolation {
    Shape { generator: String },
    NotInvertible { generator: String },
    MixesDegrees { generator: String },
    Relation { relation: String },
    ChainMap { generator: String, x: String },
    BracketViolation { generator: String, x: String, y: String },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::Shape { generator } => write!(f, "{generator}: matrix has the wrong shape"),
            ActionViolation::NotInvertible { generator } => write!(f, "{generator}: matrix is not invertible"),
            ActionViolation::MixesDegrees { generator } => write!(f, "{generator}: matrix does not preserve degrees"),
            ActionViolation::Relation { relation } => write!(f, "relation {relation} does not hold"),
            ActionViolation::ChainMap { generator, x } => write!(f, "{generator} does not commute with d at {x}"),
            ActionViolation::BracketViolation { generator, x, y } => {
                write!(f, "{generator} does not preserve the bracket at ({x},{y})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
}

impl ActionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidAction(self.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")))
        }
    }
}

pub fn validate_action(g: &Dgla, act: &GroupAction) -> ActionReport {
    let n = g.dim();
    let mut out = Vec::new();
    if let GroupAction::Torus(t) = act {
        if t.weights.len() != n || t.weights.iter().any(|w| w.len() != t.rank) {
            out.push(ActionViolation::Shape { generator: "t".into() });
            return ActionReport { violations: out };
        }
    }
    let names = act.generator_names();
    let mats = act.generator_matrices();
    for (name, m) in names.iter().zip(&mats) {
        if (m.rows(), m.cols()) != (n, n) {
            out.push(ActionViolation::Shape { generator: name.clone() });
            continue;
        }
        if !m.is_invertible() {
            out.push(ActionViolation::NotInvertible { generator: name.clone() });
        }
        let mixes = (0..n).any(|i| (0..n).any(|j| !m[(i, j)].is_zero() && g.degree_of(i) != g.degree_of(j)));
        if mixes {
            out.push(ActionViolation::MixesDegrees { generator: name.clone() });
        }
    }
    if !out.is_empty() {
        return ActionReport { violations: out };
    }
    if let GroupAction::Finite(f) = act {
        for r in &f.relations {
            match f.evaluate_word(r, n) {
                Ok(m) if m == Matrix::identity(n) => {}
                _ => out.push(ActionViolation::Relation { relation: r.clone() }),
            }
        }
    }
    for (name, m) in names.iter().zip(&mats) {
        let images: Vec<Vector> = (0..n).map(|i| m.column(i)).collect();
        for i in 0..n {
            if m.mul_vec(&g.d_basis(i)) != g.d(&images[i]) {
                out.push(ActionViolation::ChainMap { generator: name.clone(), x: g.label(i).into() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = m.mul_vec(&g.bracket(&unit_vector(n, i), &unit_vector(n, j)));
                if lhs != g.bracket(&images[i], &images[j]) {
                    out.push(ActionViolation::BracketViolation {
                        generator: name.clone(),
                        x: g.label(i).into(),
                        y: g.label(j).into(),
                    });
                }
            }
        }
    }
    ActionReport { violations: out }
}

/// Reynolds projector onto the invariants of the degree-`degree` component.
pub fn reynolds(act: &GroupAction, space: &GradedVectorSpace, degree: i32) -> Result<Matrix> {
    if act.dim().is_none() {
        return Ok(Matrix::identity(space.dim_in(degree)));
    }
    act.symmetry().reynolds(space, degree)
}

/// A complement of `u` in `v` stable under the action (local coordinates of
/// the degree-`degree` component). The trivial action reproduces
/// [`complement`].
pub fn equivariant_complement(
    u: &Subspace,
    v: &Subspace,
    act: &GroupAction,
    space: &GradedVectorSpace,
    degree: i32,
) -> Result<Subspace> {
    if !u.is_subspace_of(v) {
        return Err(Error::NotASubspace);
    }
    if act.dim().is_none() {
        return complement(u, v);
    }
    act.symmetry().stable_complement(u, v, space, degree)
}

/// Semi-universal model built from stable splittings, with the action it
/// inherits.
pub fn equivariant_semi_universal(g: &Dgla, act: &GroupAction) -> Result<(SemiUniversalModel, GroupAction)> {
    validate_action(g, act).into_result()?;
    let splitter = EquivariantSplitter { action: act.clone(), space: g.space().clone() };
    let model = semi_universal_model_with(g, &splitter)?;
    if act.dim().is_none() {
        return Ok((model, act.clone()));
    }
    let induced = act.restrict(&model.inclusion)?;
    for (big, small) in act.generator_matrices().iter().zip(induced.generator_matrices()) {
        for j in 0..model.k.dim() {
            let via_k = model.inclusion.apply(&small.column(j));
            let via_g = big.mul_vec(&model.inclusion.map.apply_basis(j));
            if via_k != via_g {
                return Err(Error::NotStable(format!("inclusion is not equivariant at {}", model.k.label(j))));
            }
        }
    }
    Ok((model, induced))
}

/// Kuranishi data built from stable splittings, with the induced actions on
/// the chosen bases of `H¹` and `H²` (one matrix per generator).
#[derive(Clone, Debug)]
pub struct EquivariantKuranishi {
    pub result: KuranishiResult,
    pub generators: Vec<String>,
    pub on_h1: Vec<Matrix>,
    pub on_h2: Vec<Matrix>,
    /// Global generator matrices on `g`.
    pub on_g: Vec<Matrix>,
}

impl EquivariantKuranishi {
    /// Whether `x(ρξ) = ρx(ξ)` and `Ob(ρξ) = ρOb(ξ)` for every generator,
    /// coefficient by coefficient.
    pub fn is_equivariant(&self) -> bool {
        self.on_g.iter().zip(&self.on_h1).zip(&self.on_h2).all(|((rg, r1), r2)| {
            let x = &self.result.solution;
            let ob = &self.result.obstruction;
            x.substitute_linear(r1) == x.map(rg) && ob.substitute_linear(r1) == ob.map(r2)
        })
    }
}

fn induced_on_representatives(reps: &[Vector], m: &Matrix) -> Result<Matrix> {
    let dim = m.rows();
    let basis = Matrix::from_columns(reps, dim);
    let cols: Result<Vec<Vector>> = reps
        .iter()
        .map(|r| solve(&basis, &m.mul_vec(r)).ok_or_else(|| Error::NotStable("cohomology representatives".into())))
        .collect();
    Ok(Matrix::from_columns(&cols?, reps.len()))
}

pub fn equivariant_kuranishi(g: &Dgla, act: &GroupAction, order: u32) -> Result<EquivariantKuranishi> {
    validate_action(g, act).into_result()?;
    let splitter = EquivariantSplitter { action: act.clone(), space: g.space().clone() };
    let result = kuranishi_with(g, order, &splitter)?;
    let on_g = act.generator_matrices();
    let mut on_h1 = Vec::new();
    let mut on_h2 = Vec::new();
    for m in &on_g {
        on_h1.push(induced_on_representatives(&result.h1_basis, m)?);
        on_h2.push(induced_on_representatives(&result.h2_basis, m)?);
    }
    Ok(EquivariantKuranishi { result, generators: act.generator_names(), on_h1, on_h2, on_g })
}
