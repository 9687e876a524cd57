//! Built-in dglas with known deformation-theoretic behaviour, and a
//! registry that exposes them by name.

use std::collections::BTreeMap;

use crate::dgla::{normalize, Combination, Dgla, DglaBuilder};
use crate::equivariant::GroupAction;
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::rational::{int, sign, Rational};
use num_traits::Zero;

/// Abelian dgla on a cochain complex; fails unless `d² = 0`.
pub fn abelian_dgla(space: GradedVectorSpace, d: &Matrix) -> Result<Dgla> {
    if !d.mul(d).is_zero() {
        return Err(Error::Validation("differential does not square to zero".into()));
    }
    Dgla::abelian(space, d)
}

/// `x` in degree 1, `y` in degree 2, `d = 0`, `[x, x] = 2y`.
pub fn obstruction_toy() -> Dgla {
    DglaBuilder::new()
        .basis("x", 1)
        .basis("y", 2)
        .bracket("x", "x", &[("y", int(2))])
        .build()
        .expect("E2 is well formed")
}

/// `g^0 = <z, w>`, `g^1 = <x1, x2>`, `dz = x1`, all brackets zero.
pub fn split_toy() -> Dgla {
    DglaBuilder::new()
        .basis("z", 0)
        .basis("w", 0)
        .basis("x1", 1)
        .basis("x2", 1)
        .d("z", "x1", int(1))
        .build()
        .expect("E3 is well formed")
}

/// Three-dimensional permutation representation in degrees 0 and 1 plus a
/// trivial line in degree 2: `d z_i = 3 x_i - (x1 + x2 + x3)` and
/// `[x_i, x_j] = 2y` for all `i, j`.
pub fn permutation_toy() -> Dgla {
    let mut b = DglaBuilder::new();
    for i in 1..=3 {
        b = b.basis(&format!("z{i}"), 0);
    }
    for i in 1..=3 {
        b = b.basis(&format!("x{i}"), 1);
    }
    b = b.basis("y", 2);
    for i in 1..=3 {
        for j in 1..=3 {
            let c = if i == j { int(2) } else { int(-1) };
            b = b.d(&format!("z{i}"), &format!("x{j}"), c);
        }
    }
    for i in 1..=3 {
        for j in i..=3 {
            b = b.bracket(&format!("x{i}"), &format!("x{j}"), &[("y", int(2))]);
        }
    }
    b.build().expect("permutation toy is well formed")
}

/// Structure constants of an ordinary (degree 0) Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub names: Vec<String>,
    /// `[e_a, e_b]` for `a < b`; the rest follows from antisymmetry.
    pub constants: BTreeMap<(usize, usize), Combination>,
}

impl LieAlgebraData {
    pub fn new(names: &[&str], brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<Self> {
        let mut constants = BTreeMap::new();
        for &(a, b, terms) in brackets {
            let c = normalize(terms.iter().map(|&(k, x)| (k, int(x))));
            let (key, c) = if a < b {
                ((a, b), c)
            } else if a > b {
                ((b, a), c.into_iter().map(|(k, x)| (k, -x)).collect())
            } else {
                return Err(Error::Validation("[e, e] must vanish in a Lie algebra".into()));
            };
            constants.insert(key, c);
        }
        let l = LieAlgebraData { names: names.iter().map(|s| s.to_string()).collect(), constants };
        l.validate()?;
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> Vector {
        let n = self.dim();
        let mut v = zero_vector(n);
        let (key, s) = if a < b {
            ((a, b), int(1))
        } else if a > b {
            ((b, a), int(-1))
        } else {
            return v;
        };
        if let Some(c) = self.constants.get(&key) {
            for (k, x) in c {
                v[*k] += x * &s;
            }
        }
        v
    }

    pub fn bracket(&self, u: &[Rational], w: &[Rational]) -> Vector {
        let n = self.dim();
        let mut out = zero_vector(n);
        for a in 0..n {
            for b in 0..n {
                if u[a].is_zero() || w[b].is_zero() {
                    continue;
                }
                let c = &u[a] * &w[b];
                for (k, x) in self.bracket_basis(a, b).iter().enumerate() {
                    out[k] += &c * x;
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let unit = |i: usize| crate::linalg::unit_vector(n, i);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = self.bracket(&unit(a), &self.bracket_basis(b, c));
                    let t2 = self.bracket(&unit(b), &self.bracket_basis(c, a));
                    let t3 = self.bracket(&unit(c), &self.bracket_basis(a, b));
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Err(Error::Validation(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sl2() -> Self {
        // [h, e] = 2e, [h, f] = -2f, [e, f] = h
        Self::new(&["e", "h", "f"], &[(1, 0, &[(0, 2)]), (1, 2, &[(2, -2)]), (0, 2, &[(1, 1)])]).expect("sl2")
    }

    pub fn abelian(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::new(&refs, &[]).expect("abelian")
    }

    /// The two-dimensional non-abelian Lie algebra `[a, b] = b`.
    pub fn affine_line() -> Self {
        Self::new(&["a", "b"], &[(0, 1, &[(1, 1)])]).expect("aff(1)")
    }

    /// Heisenberg algebra `[p, q] = c`.
    pub fn heisenberg() -> Self {
        Self::new(&["p", "q", "c"], &[(0, 1, &[(2, 1)])]).expect("heisenberg")
    }
}

/// A basis element `e_I ↦ e_j` of `Hom(Λ^{|I|} L, L)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cochain {
    inputs: Vec<usize>,
    output: usize,
}

/// Sorts `t` in place and returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(t: &mut [usize]) -> Option<Rational> {
    let mut swaps = 0i64;
    for i in 0..t.len() {
        for j in 0..t.len() - 1 - i {
            if t[j] > t[j + 1] {
                t.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign(swaps))
}

/// Values of an alternating map on sorted index tuples.
type AltMap = BTreeMap<Vec<usize>, Vector>;

fn eval_alt(f: &AltMap, args: &[usize], n: usize) -> Vector {
    let mut t = args.to_vec();
    match sort_with_sign(&mut t) {
        None => zero_vector(n),
        Some(s) => match f.get(&t) {
            Some(v) => v.iter().map(|x| x * &s).collect(),
            None => zero_vector(n),
        },
    }
}

/// Unshuffles of `0..m` into an increasing block of size `b` and the rest,
/// with the sign of the permutation.
fn unshuffles(m: usize, b: usize) -> Vec<(Vec<usize>, Vec<usize>, Rational)> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(start: usize, m: usize, b: usize, chosen: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>, Rational)>) {
        if chosen.len() == b {
            let rest: Vec<usize> = (0..m).filter(|i| !chosen.contains(i)).collect();
            let mut perm: Vec<usize> = chosen.clone();
            perm.extend(&rest);
            let s = sort_with_sign(&mut perm).expect("permutation");
            out.push((chosen.clone(), rest, s));
            return;
        }
        for i in start..m {
            chosen.push(i);
            rec(i + 1, m, b, chosen, out);
            chosen.pop();
        }
    }
    rec(0, m, b, &mut chosen, &mut out);
    out
}

/// `(f ∘̄ g)(x_0..x_{a+b-2}) = Σ_σ sgn(σ) f(g(x_σ(0..b)), x_σ(b..))`.
fn insertion(f: &AltMap, fa: usize, g: &AltMap, gb: usize, n: usize) -> AltMap {
    let mut out = AltMap::new();
    if fa == 0 {
        return out;
    }
    let m = fa + gb - 1;
    for inputs in subsets(n, m) {
        let mut val = zero_vector(n);
        for (s_idx, rest, sgn) in unshuffles(m, gb) {
            let gin: Vec<usize> = s_idx.iter().map(|&i| inputs[i]).collect();
            let gv = eval_alt(g, &gin, n);
            for (j, c) in gv.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut fin = vec![j];
                fin.extend(rest.iter().map(|&i| inputs[i]));
                let fv = eval_alt(f, &fin, n);
                let coeff = c * &sgn;
                for (k, x) in fv.iter().enumerate() {
                    val[k] += &coeff * x;
                }
            }
        }
        if val.iter().any(|x| !x.is_zero()) {
            out.insert(inputs, val);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// The deformation dgla of a Lie algebra: `g^n = Hom(Λ^{n+1} L, L)` for
/// `0 ≤ n + 1 ≤ min(dim L, max_arity)`, with the Nijenhuis-Richardson
/// bracket `[f, g] = f∘̄g - (-1)^{|f||g|} g∘̄f` and `d = [μ, -]`.
pub fn adjoint_dgla(l: &LieAlgebraData, max_arity: usize) -> Result<Dgla> {
    let n = l.dim();
    let top = n.min(max_arity);
    let name = |i: usize| l.names[i].as_str();
    let mut cochains = Vec::new();
    let mut basis = Vec::new();
    for arity in 0..=top {
        for inputs in subsets(n, arity) {
            for output in 0..n {
                let ins: Vec<&str> = inputs.iter().map(|&i| name(i)).collect();
                basis.push((format!("({})->{}", ins.join(","), name(output)), arity as i32 - 1));
                cochains.push(Cochain { inputs: inputs.clone(), output });
            }
        }
    }
    let space = GradedVectorSpace::from_basis(&basis)?;
    // global index of each cochain
    let index: BTreeMap<Cochain, usize> =
        cochains.iter().zip(&basis).map(|(c, (l, _))| (c.clone(), space.index_of(l).unwrap())).collect();
    let as_map = |c: &Cochain| -> AltMap { BTreeMap::from([(c.inputs.clone(), crate::linalg::unit_vector(n, c.output))]) };
    let to_combo = |m: &AltMap| -> Combination {
        normalize(m.iter().flat_map(|(inputs, v)| {
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).filter_map(|(j, x)| {
                index.get(&Cochain { inputs: inputs.clone(), output: j }).map(|&g| (g, x.clone()))
            })
        }))
    };
    let nr = |f: &AltMap, fa: usize, g: &AltMap, gb: usize| -> AltMap {
        let p = fa as i64 - 1;
        let q = gb as i64 - 1;
        let mut out = insertion(f, fa, g, gb, n);
        let s = sign(p * q);
        for (k, v) in insertion(g, gb, f, fa, n) {
            let e = out.entry(k).or_insert_with(|| zero_vector(n));
            for (a, b) in e.iter_mut().zip(&v) {
                *a -= &s * b;
            }
        }
        out
    };
    let mut bracket: BTreeMap<(usize, usize), Combination> = BTreeMap::new();
    for a in &cochains {
        for b in &cochains {
            let (fa, gb) = (a.inputs.len(), b.inputs.len());
            if fa + gb == 0 || fa + gb - 1 > top {
                continue;
            }
            let c = to_combo(&nr(&as_map(a), fa, &as_map(b), gb));
            if !c.is_empty() {
                bracket.insert((index[a], index[b]), c);
            }
        }
    }
    // μ: the bracket of L as an element of Hom(Λ²L, L)
    let mut mu = zero_vector(space.dim());
    if top >= 2 {
        for (&(a, b), c) in &l.constants {
            for (k, x) in c {
                mu[index[&Cochain { inputs: vec![a, b], output: *k }]] += x;
            }
        }
    }
    let provisional = Dgla::new(
        space.clone(),
        crate::graded::GradedMap::zero(&space, &space, 1),
        bracket.clone(),
    )?;
    let dim = space.dim();
    let mut dm = Matrix::zeros(dim, dim);
    for j in 0..dim {
        let img = provisional.bracket(&mu, &crate::linalg::unit_vector(dim, j));
        for (i, x) in img.into_iter().enumerate() {
            dm[(i, j)] = x;
        }
    }
    let differential = crate::graded::GradedMap::from_global(&space, &space, 1, &dm)?;
    Dgla::new(space, differential, bracket)
}

/// A named example: a dgla and, optionally, a group acting on it.
#[derive(Clone, Debug)]
pub struct Example {
    pub dgla: Dgla,
    pub action: Option<GroupAction>,
}

pub trait ExampleConstructor: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self) -> Example;
}

struct FnExample {
    name: &'static str,
    description: &'static str,
    build: fn() -> Example,
}

impl ExampleConstructor for FnExample {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn build(&self) -> Example {
        (self.build)()
    }
}

fn plain(dgla: Dgla) -> Example {
    Example { dgla, action: None }
}

/// Every built-in example, in a fixed order.
pub fn registry() -> Vec<Box<dyn ExampleConstructor>> {
    let entries: Vec<FnExample> = vec![
        FnExample { name: "e2", description: "obstruction toy: [x,x] = 2y", build: || plain(obstruction_toy()) },
        FnExample { name: "e3", description: "split toy: dz = x1, abelian", build: || plain(split_toy()) },
        FnExample {
            name: "abelian-line",
            description: "abelian k in degree 1",
            build: || plain(abelian_dgla(GradedVectorSpace::line("a", 1), &Matrix::zeros(1, 1)).unwrap()),
        },
        FnExample {
            name: "abelian-iso",
            description: "abelian k -> k, d an isomorphism (degrees 0, 1)",
            build: || {
                let space = GradedVectorSpace::from_basis(&[("a", 0), ("b", 1)]).unwrap();
                plain(abelian_dgla(space, &Matrix::from_i64(&[&[0, 0], &[1, 0]])).unwrap())
            },
        },
        FnExample {
            name: "sl2",
            description: "deformation dgla of sl2 (rigid)",
            build: || plain(adjoint_dgla(&LieAlgebraData::sl2(), 3).unwrap()),
        },
        FnExample {
            name: "abelian-k2",
            description: "deformation dgla of the abelian Lie algebra k^2",
            build: || plain(adjoint_dgla(&LieAlgebraData::abelian(2), 2).unwrap()),
        },
        FnExample {
            name: "e2-z2",
            description: "E2 with Z/2 acting by x -> -x, y -> y",
            build: || Example { dgla: obstruction_toy(), action: Some(GroupAction::e2_sign()) },
        },
        FnExample {
            name: "e3-z2",
            description: "E3 with Z/2 acting by w -> -w, x2 -> -x2",
            build: || Example { dgla: split_toy(), action: Some(GroupAction::e3_sign()) },
        },
        FnExample {
            name: "s3-perm",
            description: "S3 permuting z_i and x_i, fixing y",
            build: || Example { dgla: permutation_toy(), action: Some(GroupAction::s3_permutation()) },
        },
    ];
    entries.into_iter().map(|e| Box::new(e) as Box<dyn ExampleConstructor>).collect()
}

pub fn example_by_name(name: &str) -> Result<Example> {
    registry()
        .into_iter()
        .find(|e| e.name() == name)
        .map(|e| e.build())
        .ok_or_else(|| Error::UnknownName(format!("example {name:?}")))
}
