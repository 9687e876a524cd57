//! Maurer-Cartan elements and gauge action over artinian algebras, the
//! tangent space, and lifting along small extensions.

use num_traits::Zero;

use crate::artin::{square_zero_extension, ArtinAlgebra, SmallExtension};
use crate::dgla::{cohomology, Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedVectorSpace};
use crate::linalg::{add_scaled, is_zero_vector, solve, zero_vector, Matrix, Vector};
use crate::rational::{factorial, frac, one, sign, Rational};

/// `g ⊗ J` for a subspace `J` of an artinian algebra spanned by basis
/// elements and closed under products and `d` (the maximal ideal, or the
/// kernel of a small extension). Basis `e ⊗ α` in degree `|e| + |α|`,
/// `d(e⊗α) = de⊗α + (-1)^{|e|} e⊗dα`,
/// `[e⊗α, f⊗β] = (-1)^{|α||f|} [e,f]⊗αβ`.
#[derive(Clone, Debug)]
pub struct TensorDgla {
    pub dgla: Dgla,
    /// `(g index, algebra index)` for each basis element, in global order.
    pub pairs: Vec<(usize, usize)>,
    pub algebra: ArtinAlgebra,
}

impl TensorDgla {
    pub fn new(g: &Dgla, a: &ArtinAlgebra, span: &[usize]) -> Result<Self> {
        let mut basis = Vec::new();
        let mut raw_pairs = Vec::new();
        for e in 0..g.dim() {
            for &alpha in span {
                basis.push((format!("{}⊗{}", g.label(e), a.label(alpha)), g.degree_of(e) + a.degree_of(alpha)));
                raw_pairs.push((e, alpha));
            }
        }
        let space = GradedVectorSpace::from_basis(&basis)?;
        let mut pairs = vec![(0, 0); raw_pairs.len()];
        let mut index = std::collections::BTreeMap::new();
        for (k, (label, _)) in basis.iter().enumerate() {
            let gi = space.index_of(label).expect("label inserted");
            pairs[gi] = raw_pairs[k];
            index.insert(raw_pairs[k], gi);
        }
        let n = space.dim();
        let lookup = |e: usize, alpha: usize| -> Result<usize> {
            index.get(&(e, alpha)).copied().ok_or_else(|| {
                Error::Validation(format!("{} lies outside the chosen subspace of the algebra", a.label(alpha)))
            })
        };
        let mut dm = Matrix::zeros(n, n);
        for (j, &(e, alpha)) in pairs.iter().enumerate() {
            for (f, c) in g.d_basis(e).iter().enumerate() {
                if !c.is_zero() {
                    dm[(lookup(f, alpha)?, j)] += c;
                }
            }
            let s = sign(i64::from(g.degree_of(e)));
            for (beta, c) in a.d_basis(alpha).iter().enumerate() {
                if !c.is_zero() {
                    dm[(lookup(e, beta)?, j)] += &s * c;
                }
            }
        }
        let mut bracket = std::collections::BTreeMap::new();
        for (i, &(e, alpha)) in pairs.iter().enumerate() {
            for (j, &(f, beta)) in pairs.iter().enumerate() {
                let Some(ef) = g.bracket_basis(e, f) else { continue };
                let ab = a.product_basis(alpha, beta);
                if is_zero_vector(&ab) {
                    continue;
                }
                let s = sign(i64::from(a.degree_of(alpha)) * i64::from(g.degree_of(f)));
                let mut terms = Vec::new();
                for (k, x) in ef {
                    for (gamma, y) in ab.iter().enumerate() {
                        if !y.is_zero() {
                            terms.push((lookup(*k, gamma)?, &s * x * y));
                        }
                    }
                }
                let terms = crate::dgla::normalize(terms);
                if !terms.is_empty() {
                    bracket.insert((i, j), terms);
                }
            }
        }
        let differential = GradedMap::from_global(&space, &space, 1, &dm)?;
        let dgla = Dgla::new(space, differential, bracket)?;
        Ok(TensorDgla { dgla, pairs, algebra: a.clone() })
    }

    /// `g ⊗ m_A`.
    pub fn over_maximal_ideal(g: &Dgla, a: &ArtinAlgebra) -> Result<Self> {
        Self::new(g, a, &a.maximal_ideal())
    }

    pub fn dim(&self) -> usize {
        self.dgla.dim()
    }

    pub fn index_of(&self, e: usize, alpha: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (e, alpha))
    }

    /// Element from `(g label, algebra label, coefficient)` triples.
    pub fn element(&self, g: &Dgla, terms: &[(&str, &str, Rational)]) -> Result<Vector> {
        let mut v = zero_vector(self.dim());
        for (gl, al, c) in terms {
            let e = g.index_of(gl).ok_or_else(|| Error::UnknownName(format!("basis {gl:?}")))?;
            let alpha =
                self.algebra.space().index_of(al).ok_or_else(|| Error::UnknownName(format!("algebra basis {al:?}")))?;
            let k = self.index_of(e, alpha).ok_or_else(|| Error::UnknownName(format!("{gl}⊗{al}")))?;
            v[k] += c;
        }
        Ok(v)
    }

    /// Elements of the given total degree, as a basis of global unit vectors.
    pub fn degree_basis(&self, n: i32) -> Vec<Vector> {
        self.dgla.space().range(n).map(|i| crate::linalg::unit_vector(self.dim(), i)).collect()
    }

    fn require_degree(&self, v: &[Rational], n: i32, what: &str) -> Result<()> {
        match self.dgla.space().homogeneous_degree(v) {
            Some(None) => Ok(()),
            Some(Some(d)) if d == n => Ok(()),
            _ => Err(Error::DimensionMismatch(format!("{what} must have total degree {n}"))),
        }
    }
}

/// `dx + ½[x, x]`; zero iff `x` is a Maurer-Cartan element.
pub fn mc_check(t: &TensorDgla, x: &[Rational]) -> Result<Vector> {
    t.require_degree(x, 1, "a Maurer-Cartan candidate")?;
    let mut r = t.dgla.d(x);
    add_scaled(&mut r, &frac(1, 2), &t.dgla.bracket(x, x));
    Ok(r)
}

/// `e^a · x = Σ ad_a^n(x)/n! − Σ ad_a^n(da)/(n+1)!`, a finite sum since
/// `m_A` is nilpotent.
pub fn gauge_act(t: &TensorDgla, a: &[Rational], x: &[Rational]) -> Result<Vector> {
    t.require_degree(a, 0, "a gauge parameter")?;
    t.require_degree(x, 1, "a Maurer-Cartan element")?;
    let ad = t.dgla.ad_matrix(a);
    let mut out = zero_vector(t.dim());
    let mut term = x.to_vec();
    let mut n = 0;
    while !is_zero_vector(&term) {
        add_scaled(&mut out, &(one() / factorial(n)), &term);
        term = ad.mul_vec(&term);
        n += 1;
    }
    let mut term = t.dgla.d(a);
    let mut n = 0;
    while !is_zero_vector(&term) {
        add_scaled(&mut out, &(-one() / factorial(n + 1)), &term);
        term = ad.mul_vec(&term);
        n += 1;
    }
    Ok(out)
}

/// First-order deformations modulo gauge: `Z¹/B¹` of `g ⊗ (ε)` over the dual
/// numbers, returned as representatives in `g¹` (global vectors of `g`).
pub fn tangent_space(g: &Dgla) -> Vec<Vector> {
    let dual = square_zero_extension(0);
    let t = TensorDgla::over_maximal_ideal(g, &dual).expect("dual numbers tensor is well formed");
    let c = cohomology(&t.dgla, 1);
    c.representatives
        .basis()
        .iter()
        .map(|local| {
            let v = t.dgla.space().embed(1, local);
            let mut out = zero_vector(g.dim());
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out[t.pairs[k].0] += x;
                }
            }
            out
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    /// A Maurer-Cartan element over the larger algebra (coordinates of `g ⊗ m_A`).
    Lifted(Vector),
    /// Nonzero class in `H²(g ⊗ I)`, in its representative basis, together
    /// with the obstruction cocycle in `g ⊗ I` for the canonical lift.
    Obstructed { class: Vector, cocycle: Vector },
}

/// Everything needed to lift along a small extension.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub g: Dgla,
    pub extension: SmallExtension,
    pub over_big: TensorDgla,
    pub over_quotient: TensorDgla,
    pub over_kernel: TensorDgla,
}

impl LiftingProblem {
    pub fn new(g: &Dgla, extension: &SmallExtension) -> Result<Self> {
        Ok(LiftingProblem {
            g: g.clone(),
            extension: extension.clone(),
            over_big: TensorDgla::over_maximal_ideal(g, &extension.big)?,
            over_quotient: TensorDgla::over_maximal_ideal(g, &extension.quotient)?,
            over_kernel: TensorDgla::new(g, &extension.big, &extension.kernel)?,
        })
    }

    /// The set-theoretic lift copying coefficients along the basis.
    pub fn canonical_lift(&self, x: &[Rational]) -> Vector {
        let mut out = zero_vector(self.over_big.dim());
        for (k, &(e, alpha_q)) in self.over_quotient.pairs.iter().enumerate() {
            if x[k].is_zero() {
                continue;
            }
            let label = self.extension.quotient.label(alpha_q);
            let alpha = self.extension.big.space().index_of(label).expect("quotient labels come from the algebra");
            out[self.over_big.index_of(e, alpha).expect("maximal ideal pair")] += &x[k];
        }
        out
    }

    /// Projection `g ⊗ m_A → g ⊗ m_{A/I}`.
    pub fn project(&self, x: &[Rational]) -> Vector {
        let mut out = zero_vector(self.over_quotient.dim());
        for (k, &(e, alpha)) in self.over_big.pairs.iter().enumerate() {
            if x[k].is_zero() {
                continue;
            }
            if let Some(q) = self.extension.to_quotient[alpha] {
                out[self.over_quotient.index_of(e, q).expect("maximal ideal pair")] += &x[k];
            }
        }
        out
    }

    /// Embedding `g ⊗ I → g ⊗ m_A`.
    pub fn embed_kernel(&self, c: &[Rational]) -> Vector {
        let mut out = zero_vector(self.over_big.dim());
        for (k, &(e, alpha)) in self.over_kernel.pairs.iter().enumerate() {
            if !c[k].is_zero() {
                out[self.over_big.index_of(e, alpha).expect("kernel lies in the maximal ideal")] += &c[k];
            }
        }
        out
    }

    /// Restriction of an element of `g ⊗ m_A` supported on `g ⊗ I`.
    fn restrict_to_kernel(&self, v: &[Rational]) -> Vector {
        let mut out = zero_vector(self.over_kernel.dim());
        for (k, &(e, alpha)) in self.over_big.pairs.iter().enumerate() {
            if v[k].is_zero() {
                continue;
            }
            let i = self.over_kernel.index_of(e, alpha).expect("obstruction lies in g ⊗ I");
            out[i] += &v[k];
        }
        out
    }

    /// Class of `d x̃ + ½[x̃, x̃]` in `H²(g ⊗ I)` for any lift `x̃` of an MC element.
    pub fn obstruction_class(&self, lift: &[Rational]) -> Result<(Vector, Vector)> {
        if !is_zero_vector(&mc_check(&self.over_quotient, &self.project(lift))?) {
            return Err(Error::NotMC);
        }
        let ob = self.restrict_to_kernel(&mc_check(&self.over_big, lift)?);
        let c2 = cohomology(&self.over_kernel.dgla, 2);
        let local = self.over_kernel.dgla.space().component_of(&ob, 2);
        let class = c2.class_of(&local).expect("the obstruction is a cocycle");
        Ok((class, ob))
    }
}

/// Lifts a Maurer-Cartan element over `A/I` to one over `A`, or returns the
/// obstruction class.
pub fn obstruction_lift(g: &Dgla, extension: &SmallExtension, x: &[Rational]) -> Result<LiftOutcome> {
    let p = LiftingProblem::new(g, extension)?;
    if !is_zero_vector(&mc_check(&p.over_quotient, x)?) {
        return Err(Error::NotMC);
    }
    let lift = p.canonical_lift(x);
    let (class, ob) = p.obstruction_class(&lift)?;
    if !is_zero_vector(&class) {
        return Ok(LiftOutcome::Obstructed { class, cocycle: ob });
    }
    let kd = &p.over_kernel.dgla;
    let target: Vector = kd.space().component_of(&ob, 2).iter().map(|v| -v).collect();
    let c_local = solve(&kd.d_block(1), &target).expect("exact obstruction cocycles are coboundaries");
    let c = p.embed_kernel(&kd.space().embed(1, &c_local));
    let mut out = lift;
    add_scaled(&mut out, &one(), &c);
    Ok(LiftOutcome::Lifted(out))
}

/// The map `g ⊗ m_A → g'⊗ m_A` induced by a dgla morphism.
pub fn push_forward(f: &DglaMorphism, source: &TensorDgla, target: &TensorDgla, x: &[Rational]) -> Vector {
    let mut out = zero_vector(target.dim());
    for (k, &(e, alpha)) in source.pairs.iter().enumerate() {
        if x[k].is_zero() {
            continue;
        }
        for (f_idx, c) in f.map.apply_basis(e).iter().enumerate() {
            if !c.is_zero() {
                out[target.index_of(f_idx, alpha).expect("same algebra subspace")] += &x[k] * c;
            }
        }
    }
    out
}
