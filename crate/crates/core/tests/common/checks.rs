//! The acceptance criteria as self-contained checks. Each returns a short
//! description of the first failure it meets.

use std::collections::BTreeMap;

use dgla::artin::{truncated_power_series, ArtinAlgebra, SmallExtension};
use dgla::ce::{ce_cohomology, CEComplex};
use dgla::deformation::{gauge_act, mc_check, obstruction_lift, tangent_space, LiftOutcome, LiftingProblem, TensorDgla};
use dgla::dgla::{cohomology, cone, validate_dgla, validate_morphism, Combination};
use dgla::equivariant::{equivariant_kuranishi, equivariant_semi_universal, reynolds, GroupAction};
use dgla::examples::{adjoint_dgla, example_by_name, permutation_toy, registry, LieAlgebraData};
use dgla::free::free_dgla;
use dgla::graded::GradedMap;
use dgla::kuranishi::kuranishi;
use dgla::semiuniversal::{etale_check, prorep_check, semi_universal_model};
use dgla::{Dgla, GradedVectorSpace, Matrix};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = std::result::Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Every registered example plus the permutation toy.
pub fn all_examples() -> Vec<(String, Dgla)> {
    let mut out: Vec<(String, Dgla)> = registry().iter().map(|e| (e.name().to_string(), e.build().dgla)).collect();
    out.push(("perm".into(), permutation_toy()));
    out
}

fn window(g: &Dgla) -> Vec<i32> {
    match g.space().window() {
        Some((lo, hi)) => (lo - 1..=hi + 1).collect(),
        None => vec![0],
    }
}

fn random_small_dgla(rng: &mut ChaCha8Rng, max_dim: usize) -> Dgla {
    loop {
        let g = random_dgla(rng);
        if g.dim() <= max_dim {
            return g;
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, basis: &[Vec<Q>], n: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for b in basis {
        let c = q(rng.gen_range(-2..=2));
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    v
}

// ---------------------------------------------------------------- AC-1

fn rebuild(space: &GradedVectorSpace, dense: &Dense) -> Dgla {
    let n = dense.n();
    let mut dm = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            dm[(i, j)] = dense.d[i][j].clone();
        }
    }
    let mut bracket: BTreeMap<(usize, usize), Combination> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let c: Combination = (0..n).filter(|&k| !dense.b[i][j][k].is_zero()).map(|k| (k, dense.b[i][j][k].clone())).collect();
            if !c.is_empty() {
                bracket.insert((i, j), c);
            }
        }
    }
    let d = GradedMap::from_global(space, space, 1, &dm).expect("degree +1 differential");
    Dgla::new(space.clone(), d, bracket).expect("indices in range")
}

fn nonzero(rng: &mut ChaCha8Rng) -> Q {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        q(c)
    } else {
        q(-c)
    }
}

/// A random change of the structure constants: an arbitrary bracket entry, a
/// sign-consistent bracket pair, a differential entry, or a global rescaling
/// of the bracket.
pub fn mutate(g: &Dgla, rng: &mut ChaCha8Rng) -> Dgla {
    let mut dense = Dense::of(g);
    let n = dense.n();
    let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..n);
    match rng.gen_range(0..4) {
        0 => {
            let (i, j, k) = (pick(rng), pick(rng), pick(rng));
            dense.b[i][j][k] = if rng.gen_bool(0.3) { Q::zero() } else { nonzero(rng) };
        }
        1 => {
            let (i, j) = (pick(rng), pick(rng));
            let targets: Vec<usize> = (0..n).filter(|&k| dense.deg[k] == dense.deg[i] + dense.deg[j]).collect();
            if let Some(&k) = targets.get(rng.gen_range(0..targets.len().max(1))) {
                let c = nonzero(rng);
                let s = -pm(dense.deg[i] * dense.deg[j]);
                dense.b[j][i][k] = &s * &c;
                dense.b[i][j][k] = c;
            }
        }
        2 => {
            let j = pick(rng);
            let targets: Vec<usize> = (0..n).filter(|&i| dense.deg[i] == dense.deg[j] + 1).collect();
            if let Some(&i) = targets.get(rng.gen_range(0..targets.len().max(1))) {
                dense.d[i][j] = if rng.gen_bool(0.3) { Q::zero() } else { nonzero(rng) };
            }
        }
        _ => {
            let c = nonzero(rng);
            for row in dense.b.iter_mut() {
                for v in row.iter_mut() {
                    for x in v.iter_mut() {
                        *x *= &c;
                    }
                }
            }
        }
    }
    rebuild(g.space(), &dense)
}

pub fn axiom_agreement(g: &Dgla) -> Check {
    let lib = validate_dgla(g).axioms();
    let oracle = Dense::of(g).failing_axioms();
    ensure(lib == oracle, || format!("library {lib:?} vs oracle {oracle:?} on\n{g:?}"))
}

/// Returns how many mutations were rejected and how many were consistent.
pub fn ac1_counts(mutations: usize, seed: u64) -> std::result::Result<(usize, usize), String> {
    for (name, g) in all_examples() {
        axiom_agreement(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(validate_dgla(&g).is_ok(), || format!("{name} should be valid"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Dgla> = small_examples().into_iter().map(|(_, g)| g).collect();
    for _ in 0..10 {
        pool.push(random_small_dgla(&mut rng, 6));
    }
    let (mut rejected, mut consistent) = (0, 0);
    for _ in 0..mutations {
        let base = &pool[rng.gen_range(0..pool.len())];
        let m = mutate(base, &mut rng);
        axiom_agreement(&m)?;
        if validate_dgla(&m).is_ok() {
            consistent += 1;
        } else {
            rejected += 1;
        }
    }
    Ok((rejected, consistent))
}

pub fn ac1() -> Check {
    let (rejected, consistent) = ac1_counts(500, 1)?;
    ensure(rejected > 0 && consistent > 0, || format!("degenerate mutation mix: {rejected} rejected, {consistent} consistent"))
}

// ---------------------------------------------------------------- AC-2

pub fn ac2() -> Check {
    for (name, g) in all_examples() {
        let c = cone(&g);
        for n in window(&c) {
            let lib = cohomology(&c, n).dim();
            let oracle = cohomology_dim(&c, n);
            ensure(lib == 0 && oracle == 0, || format!("{name}: H^{n}(cone) library {lib}, oracle {oracle}"))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-3

pub fn ac3() -> Check {
    for n in 1..=3 {
        let f = free_dgla(&GradedVectorSpace::line("v", n + 1), 4).map_err(|e| e.to_string())?;
        let c = CEComplex::new(&f.dgla, 4);
        let h = ce_cohomology(&c, &c.degrees());
        let got: Vec<(i32, usize)> = h.iter().filter(|h| h.trusted && h.dim > 0).map(|h| (h.degree, h.dim)).collect();
        let want = vec![(-n, 1), (0, 1)];
        ensure(got == want, || format!("n = {n}: trusted cohomology {got:?}, want {want:?}"))?;
        for d in [0, -n] {
            ensure(c.is_trusted(d), || format!("n = {n}: degree {d} not trusted"))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-4

/// `H(C*(Free V))` against `k ⊕ V∨[−1]` for generators of the given degrees.
pub fn free_ce_matches(degrees: &[i32]) -> Check {
    let basis: Vec<(String, i32)> = degrees.iter().enumerate().map(|(i, &d)| (format!("v{}", i + 1), d)).collect();
    let v = GradedVectorSpace::from_basis(&basis).map_err(|e| e.to_string())?;
    let d_min = -4;
    let r_min = *degrees.iter().min().expect("nonempty");
    let length = ((-d_min + 2) as usize).div_ceil(r_min as usize);
    let f = free_dgla(&v, length).map_err(|e| e.to_string())?;
    let c = CEComplex::in_degrees(&f.dgla, 5, d_min - 1, 1);
    let all: Vec<i32> = (d_min - 1..=1).collect();
    let mut checked = 0;
    for h in ce_cohomology(&c, &all) {
        if !h.trusted {
            continue;
        }
        let want = usize::from(h.degree == 0) + degrees.iter().filter(|&&r| 1 - r == h.degree).count();
        ensure(h.dim == want, || format!("V degrees {degrees:?}: H^{} = {}, want {want}", h.degree, h.dim))?;
        checked += 1;
    }
    for r in degrees.iter().map(|r| 1 - r).chain([0]) {
        ensure(c.is_trusted(r), || format!("V degrees {degrees:?}: degree {r} not trusted"))?;
    }
    ensure(checked > 0, || "no trusted degrees".into())
}

pub fn ac4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let dim = rng.gen_range(1..=3);
        let degrees: Vec<i32> = (0..dim).map(|_| rng.gen_range(2..=4)).collect();
        free_ce_matches(&degrees)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-5

pub fn ac5() -> Check {
    for (name, g) in all_examples() {
        let h1 = cohomology_dim(&g, 1);
        let t = tangent_space(&g).len();
        ensure(t == h1, || format!("{name}: tangent {t}, H¹ {h1}"))?;
        let negative = window(&g).into_iter().filter(|&n| n <= 0).any(|n| cohomology_dim(&g, n) > 0 && n < 0);
        match semi_universal_model(&g) {
            Ok(m) => {
                let hk = cohomology_dim(&m.k, 1);
                ensure(hk == h1, || format!("{name}: H¹(k) {hk}, H¹(g) {h1}"))?;
            }
            Err(e) => ensure(negative, || format!("{name}: {e}"))?,
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-6

pub fn semi_universal_ok(g: &Dgla) -> Check {
    let m = semi_universal_model(g).map_err(|e| e.to_string())?;
    let k = &m.k;
    ensure((0..k.dim()).all(|i| k.degree_of(i) >= 1), || "k has elements of degree ≤ 0".into())?;
    ensure(validate_dgla(k).is_ok(), || "k is not a dgla".into())?;
    ensure(validate_morphism(&m.inclusion).is_ok(), || "inclusion is not a morphism".into())?;
    let incl = m.inclusion.map.global_matrix();
    ensure(rank_q(&(0..incl.rows()).map(|i| incl.row(i).to_vec()).collect::<Vec<_>>()) == k.dim(), || {
        "inclusion is not injective".into()
    })?;
    let degrees = window(g);
    ensure(etale_check(&m.inclusion, &degrees).map_err(|e| e.to_string())?, || "not étale".into())?;
    ensure(prorep_check(k, &degrees), || "k not prorepresentable".into())?;
    let (dk, dg) = (Dense::of(k), Dense::of(g));
    for n in degrees.into_iter().filter(|&n| n >= 1) {
        ensure(induces_iso(&dk, &dg, &incl, i64::from(n)), || format!("H^{n}(inclusion) not invertible"))?;
    }
    Ok(())
}

pub fn ac6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..50 {
        let g = random_dgla(&mut rng);
        for n in window(&g).into_iter().filter(|&n| n < 0) {
            ensure(cohomology_dim(&g, n) == 0, || format!("sample {i}: H^{n} ≠ 0"))?;
        }
        semi_universal_ok(&g).map_err(|e| format!("sample {i}: {e}\n{g:?}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-7

/// `dx + ½[x, x] − Ob` recomputed from the raw structure constants.
pub fn kuranishi_residual_vanishes(g: &Dgla, order: u32) -> Check {
    let k = kuranishi(g, order);
    let dense = Dense::of(g);
    let n = g.dim();
    let mut res: BTreeMap<Vec<u32>, Vec<Q>> = BTreeMap::new();
    let mut add = |m: Vec<u32>, v: &[Q], c: &Q| {
        let e = res.entry(m).or_insert_with(|| vec![Q::zero(); n]);
        for (x, y) in e.iter_mut().zip(v) {
            *x += c * y;
        }
    };
    let x = k.solution.terms();
    for (m, v) in x {
        add(m.clone(), &dense.dv(v), &Q::one());
    }
    let half = Q::new(1.into(), 2.into());
    for (ma, a) in x {
        for (mb, b) in x {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(p, r)| p + r).collect();
            if m.iter().sum::<u32>() <= order {
                add(m, &dense.br(a, b), &half);
            }
        }
    }
    for (m, c) in k.obstruction.terms() {
        let mut v = vec![Q::zero(); n];
        for (ci, r) in c.iter().zip(&k.h2_basis) {
            for (x, y) in v.iter_mut().zip(r) {
                *x += ci * y;
            }
        }
        add(m.clone(), &v, &-Q::one());
    }
    let bad: Vec<&Vec<u32>> = res.iter().filter(|(_, v)| v.iter().any(|x| !x.is_zero())).map(|(m, _)| m).collect();
    ensure(bad.is_empty(), || format!("order {order}: residual nonzero at {bad:?}"))
}

pub fn ac7() -> Check {
    for (name, g) in all_examples() {
        for order in 1..=5 {
            kuranishi_residual_vanishes(&g, order).map_err(|e| format!("{name}: {e}"))?;
            let k = kuranishi(&g, order);
            if g.is_abelian() {
                ensure(k.obstruction.is_zero(), || format!("{name}: abelian but Ob ≠ 0"))?;
            }
            if name == "e2" && order >= 2 {
                let b = &k.base;
                ensure(b.nvars == 1 && b.dim() == 2 && b.to_string() == "k[ξ1]/(ξ1^2)", || {
                    format!("E2 base at order {order}: {b}")
                })?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let g = random_dgla(&mut rng);
        kuranishi_residual_vanishes(&g, 4)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-8

/// `g ⊗ A` element as algebra-basis index ↦ vector in `g`.
type Over = BTreeMap<usize, Vec<Q>>;

fn mc_over(dense: &Dense, a: &ArtinAlgebra, x: &Over) -> Over {
    let mut out: Over = BTreeMap::new();
    let n = dense.n();
    let mut add = |gamma: usize, v: &[Q], c: &Q| {
        let e = out.entry(gamma).or_insert_with(|| vec![Q::zero(); n]);
        for (p, r) in e.iter_mut().zip(v) {
            *p += c * r;
        }
    };
    for (&alpha, v) in x {
        add(alpha, &dense.dv(v), &Q::one());
    }
    let half = Q::new(1.into(), 2.into());
    for (&alpha, u) in x {
        for (&beta, v) in x {
            let br = dense.br(u, v);
            for (gamma, c) in a.product_basis(alpha, beta).iter().enumerate() {
                if !c.is_zero() {
                    add(gamma, &br, &(&half * c));
                }
            }
        }
    }
    out.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    out
}

fn to_over(t: &TensorDgla, v: &[Q], n: usize) -> Over {
    let mut out: Over = BTreeMap::new();
    for (k, &(e, alpha)) in t.pairs.iter().enumerate() {
        if !v[k].is_zero() {
            out.entry(alpha).or_insert_with(|| vec![Q::zero(); n])[e] += &v[k];
        }
    }
    out
}

fn from_over(t: &TensorDgla, x: &Over) -> Vec<Q> {
    t.pairs.iter().map(|(e, alpha)| x.get(alpha).map_or_else(Q::zero, |v| v[*e].clone())).collect()
}

fn flatten(x: &Over, dim_a: usize, n: usize) -> Vec<Q> {
    (0..dim_a).flat_map(|a| (0..n).map(move |e| (a, e))).map(|(a, e)| x.get(&a).map_or_else(Q::zero, |v| v[e].clone())).collect()
}

/// Whether some correction in `g¹ ⊗ I` makes the copied lift Maurer-Cartan,
/// found by solving the (affine) equation over all corrections.
fn lift_exists(dense: &Dense, ext: &SmallExtension, lift: &Over) -> bool {
    let a = &ext.big;
    let n = dense.n();
    let m0 = flatten(&mc_over(dense, a, lift), a.dim(), n);
    let unknowns: Vec<(usize, usize)> =
        dense.indices(1).into_iter().flat_map(|e| ext.kernel.iter().map(move |&k| (e, k))).collect();
    if unknowns.is_empty() {
        return m0.iter().all(Q::is_zero);
    }
    let cols: Vec<Vec<Q>> = unknowns
        .iter()
        .map(|&(e, k)| {
            let mut x = lift.clone();
            x.entry(k).or_insert_with(|| vec![Q::zero(); n])[e] += Q::one();
            let m = flatten(&mc_over(dense, a, &x), a.dim(), n);
            m.iter().zip(&m0).map(|(p, r)| p - r).collect()
        })
        .collect();
    let rows: Vec<Vec<Q>> = (0..m0.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let rhs: Vec<Q> = m0.iter().map(|x| -x.clone()).collect();
    solvable_q(&rows, &rhs)
}

/// Compares `obstruction_lift` with the linear search on one instance.
pub fn lift_agrees(g: &Dgla, ext: &SmallExtension, x_quot: &Over) -> std::result::Result<bool, String> {
    let dense = Dense::of(g);
    let n = g.dim();
    let p = LiftingProblem::new(g, ext).map_err(|e| e.to_string())?;
    let x = from_over(&p.over_quotient, x_quot);
    ensure(mc_over(&dense, &ext.quotient, x_quot).is_empty(), || "instance is not MC".into())?;
    let lift: Over = x_quot
        .iter()
        .map(|(&alpha, v)| (ext.big.space().index_of(ext.quotient.label(alpha)).expect("shared label"), v.clone()))
        .collect();
    let exists = lift_exists(&dense, ext, &lift);
    match obstruction_lift(g, ext, &x).map_err(|e| e.to_string())? {
        LiftOutcome::Lifted(v) => {
            ensure(exists, || "library lifted, search found nothing".into())?;
            ensure(mc_check(&p.over_big, &v).map_err(|e| e.to_string())?.iter().all(Q::is_zero), || "lift not MC".into())?;
            ensure(mc_over(&dense, &ext.big, &to_over(&p.over_big, &v, n)).is_empty(), || "lift not MC (oracle)".into())?;
            ensure(p.project(&v) == x, || "lift does not project to x".into())?;
        }
        LiftOutcome::Obstructed { .. } => ensure(!exists, || "library obstructed, search found a lift".into())?,
    }
    Ok(exists)
}

fn label_index(a: &ArtinAlgebra, label: &str) -> usize {
    a.space().index_of(label).unwrap_or_else(|| panic!("algebra label {label}"))
}

/// Random Maurer-Cartan data for the three extension shapes used below.
fn lifting_instances(g: &Dgla, rng: &mut ChaCha8Rng) -> Vec<(SmallExtension, Over)> {
    let dense = Dense::of(g);
    let n = g.dim();
    let z1 = dense.cocycles(1);
    let g1 = dense.indices(1);
    let d_on_g1: Vec<Vec<Q>> = (0..n).map(|i| g1.iter().map(|&j| dense.d[i][j].clone()).collect()).collect();
    // w ∈ g¹ with dw = rhs
    let solve_d = |rhs: &[Q]| -> Option<Vec<Q>> {
        let local = solve_q(&d_on_g1, g1.len(), rhs)?;
        let mut w = vec![Q::zero(); n];
        for (k, &j) in g1.iter().enumerate() {
            w[j] = local[k].clone();
        }
        Some(w)
    };
    let mut out = Vec::new();

    let e = SmallExtension::truncation(1, 2).expect("truncation");
    let v = random_vec(rng, &z1, n);
    out.push((e.clone(), BTreeMap::from([(label_index(&e.quotient, "t"), v)])));

    let e = SmallExtension::truncation(1, 3).expect("truncation");
    for _ in 0..4 {
        let v = random_vec(rng, &z1, n);
        let rhs: Vec<Q> = dense.br(&v, &v).iter().map(|c| -c / q(2)).collect();
        if let Some(w) = solve_d(&rhs) {
            let w = w.iter().zip(random_vec(rng, &z1, n)).map(|(a, b)| a + b).collect();
            out.push((e.clone(), BTreeMap::from([(label_index(&e.quotient, "t"), v), (label_index(&e.quotient, "t^2"), w)])));
            break;
        }
    }

    let big = truncated_power_series(2, 2);
    let squares: Vec<String> = (0..big.dim()).map(|i| big.label(i).to_string()).filter(|l| l.contains("^2")).collect();
    let refs: Vec<&str> = squares.iter().map(String::as_str).collect();
    let e = SmallExtension::new(&big, &refs).expect("squares are killed by the maximal ideal");
    let mixed = (0..e.quotient.dim()).find(|&i| e.quotient.label(i).contains('*')).expect("mixed monomial");
    let linear: Vec<usize> = (0..e.quotient.dim()).filter(|&i| i != mixed && i != e.quotient.unit()).collect();
    for _ in 0..4 {
        let (v1, v2) = (random_vec(rng, &z1, n), random_vec(rng, &z1, n));
        let rhs: Vec<Q> = dense.br(&v1, &v2).iter().map(|c| -c.clone()).collect();
        if let Some(w) = solve_d(&rhs) {
            out.push((e.clone(), BTreeMap::from([(linear[0], v1), (linear[1], v2), (mixed, w)])));
            break;
        }
    }
    out
}

pub fn ac8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pool: Vec<Dgla> = small_examples().into_iter().map(|(_, g)| g).filter(|g| g.dim() <= 6).collect();
    for _ in 0..12 {
        pool.push(random_small_dgla(&mut rng, 6));
    }
    let (mut lifted, mut obstructed) = (0, 0);
    for g in &pool {
        for _ in 0..3 {
            for (ext, x) in lifting_instances(g, &mut rng) {
                ensure(ext.kernel.len() <= 2, || "kernel too large".into())?;
                if lift_agrees(g, &ext, &x).map_err(|e| format!("{e}\n{g:?}"))? {
                    lifted += 1;
                } else {
                    obstructed += 1;
                }
            }
        }
    }
    ensure(lifted > 0 && obstructed > 0, || format!("degenerate: {lifted} lifted, {obstructed} obstructed"))
}

// ---------------------------------------------------------------- AC-9

/// `Σ t^i X_i` over `k[t]/(t⁴)`, `X[i]` for `i = 1..=3` (index 0 unused).
type Series = [Vec<Q>; 4];

fn series_mc(dense: &Dense, x: &Series) -> bool {
    let half = Q::new(1.into(), 2.into());
    (1..=3).all(|m| {
        let mut r = dense.dv(&x[m]);
        for i in 1..m {
            for (p, c) in r.iter_mut().zip(dense.br(&x[i], &x[m - i])) {
                *p += &half * c;
            }
        }
        r.iter().all(Q::is_zero)
    })
}

fn power(label: &str) -> usize {
    match label {
        "t" => 1,
        l => l.trim_start_matches("t^").parse().expect("power of t"),
    }
}

fn series_to_vec(t: &TensorDgla, x: &Series) -> Vec<Q> {
    t.pairs.iter().map(|&(e, alpha)| x[power(t.algebra.label(alpha))][e].clone()).collect()
}

fn vec_to_series(t: &TensorDgla, v: &[Q], n: usize) -> Series {
    let mut x: Series = std::array::from_fn(|_| vec![Q::zero(); n]);
    for (k, &(e, alpha)) in t.pairs.iter().enumerate() {
        x[power(t.algebra.label(alpha))][e] += &v[k];
    }
    x
}

/// A Maurer-Cartan element over `k[t]/(t⁴)` built order by order.
fn random_mc_series(dense: &Dense, rng: &mut ChaCha8Rng) -> Series {
    let n = dense.n();
    let z1 = dense.cocycles(1);
    let g1 = dense.indices(1);
    let d_on_g1: Vec<Vec<Q>> = (0..n).map(|i| g1.iter().map(|&j| dense.d[i][j].clone()).collect()).collect();
    let half = Q::new(1.into(), 2.into());
    'attempt: for attempt in 0.. {
        let mut x: Series = std::array::from_fn(|_| vec![Q::zero(); n]);
        for m in 1..=3 {
            let mut rhs = vec![Q::zero(); n];
            for i in 1..m {
                for (p, c) in rhs.iter_mut().zip(dense.br(&x[i], &x[m - i])) {
                    *p -= &half * c;
                }
            }
            let Some(local) = solve_q(&d_on_g1, g1.len(), &rhs) else {
                if attempt > 20 {
                    // fall back to a single cocycle in the top order
                    let mut x: Series = std::array::from_fn(|_| vec![Q::zero(); n]);
                    x[3] = random_vec(rng, &z1, n);
                    return x;
                }
                continue 'attempt;
            };
            for (k, &j) in g1.iter().enumerate() {
                x[m][j] = local[k].clone();
            }
            for (p, c) in x[m].iter_mut().zip(random_vec(rng, &z1, n)) {
                *p += c;
            }
        }
        return x;
    }
    unreachable!()
}

pub fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pool: Vec<Dgla> = all_examples().into_iter().map(|(_, g)| g).collect();
    for _ in 0..5 {
        pool.push(random_dgla(&mut rng));
    }
    let a = truncated_power_series(1, 3);
    for i in 0..100 {
        let g = &pool[i % pool.len()];
        let dense = Dense::of(g);
        let n = g.dim();
        let t = TensorDgla::over_maximal_ideal(g, &a).map_err(|e| e.to_string())?;
        let x = random_mc_series(&dense, &mut rng);
        ensure(series_mc(&dense, &x), || "generated element is not MC".into())?;
        let g0 = dense.indices(0);
        let basis0: Vec<Vec<Q>> = g0.iter().map(|&j| dense.unit(j)).collect();
        let gauge: Series = std::array::from_fn(|m| if m == 0 { vec![Q::zero(); n] } else { random_vec(&mut rng, &basis0, n) });
        let xv = series_to_vec(&t, &x);
        let y = gauge_act(&t, &series_to_vec(&t, &gauge), &xv).map_err(|e| e.to_string())?;
        ensure(series_mc(&dense, &vec_to_series(&t, &y, n)), || format!("sample {i}: gauge image not MC"))?;
        let zero = vec![Q::zero(); t.dim()];
        ensure(gauge_act(&t, &zero, &xv).map_err(|e| e.to_string())? == xv, || format!("sample {i}: a = 0 moved x"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-10

fn block(m: &Matrix, space: &GradedVectorSpace, n: i32) -> Matrix {
    let r = space.range(n);
    let mut out = Matrix::zeros(r.len(), r.len());
    for (i, gi) in r.clone().enumerate() {
        for (j, gj) in r.clone().enumerate() {
            out[(i, j)] = m[(gi, gj)].clone();
        }
    }
    out
}

fn columns(m: &Matrix) -> Vec<Vec<Q>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

pub fn equivariance_ok(name: &str) -> Check {
    let ex = example_by_name(name).map_err(|e| e.to_string())?;
    equivariance_of(&ex.dgla, &ex.action.ok_or("fixture without action")?)
}

pub fn equivariance_of(g: &Dgla, act: &GroupAction) -> Check {
    let act = act.clone();
    let gens = act.generator_matrices();
    for n in g.space().support() {
        let r = reynolds(&act, g.space(), n).map_err(|e| e.to_string())?;
        ensure(r.mul(&r) == r, || format!("Reynolds not idempotent in degree {n}"))?;
        for m in &gens {
            let b = block(m, g.space(), n);
            ensure(b.mul(&r) == r && r.mul(&b) == r, || format!("Reynolds not equivariant in degree {n}"))?;
        }
    }
    let (model, induced) = equivariant_semi_universal(g, &act).map_err(|e| e.to_string())?;
    let incl = model.inclusion.map.global_matrix();
    let image = columns(&incl);
    let rank = span_rank(&image);
    for (m, small) in gens.iter().zip(induced.generator_matrices()) {
        let mut moved = image.clone();
        moved.extend(columns(&m.mul(&incl)));
        ensure(span_rank(&moved) == rank, || "k is not G-stable".into())?;
        ensure(m.mul(&incl) == incl.mul(&small), || "inclusion is not equivariant".into())?;
    }
    let order = 4;
    let ek = equivariant_kuranishi(g, &act, order).map_err(|e| e.to_string())?;
    let ob = ek.result.obstruction.terms().clone();
    let x = ek.result.solution.terms().clone();
    for ((r1, r2), rg) in ek.on_h1.iter().zip(&ek.on_h2).zip(&ek.on_g) {
        let map_all = |p: &BTreeMap<Vec<u32>, Vec<Q>>, m: &Matrix| -> BTreeMap<Vec<u32>, Vec<Q>> {
            p.iter().map(|(k, v)| (k.clone(), m.mul_vec(v))).filter(|(_, v)| v.iter().any(|c| !c.is_zero())).collect()
        };
        ensure(substitute(&ob, r1, order) == map_all(&ob, r2), || "Ob(ρξ) ≠ ρOb(ξ)".into())?;
        ensure(substitute(&x, r1, order) == map_all(&x, rg), || "x(ρξ) ≠ ρx(ξ)".into())?;
    }
    Ok(())
}

pub fn ac10() -> Check {
    for name in ["e2-z2", "e3-z2", "s3-perm"] {
        equivariance_ok(name).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- AC-11

/// `dim H^p(sl2, sl2)` for `p = 0..=3`, as printed by the brute-force script
/// kept next to the tests.
pub const SL2_SCRIPT_DIMS: [usize; 4] = [0, 0, 0, 0];

pub fn sl2_constants() -> Vec<Vec<Vec<Q>>> {
    let l = LieAlgebraData::sl2();
    (0..3).map(|a| (0..3).map(|b| l.bracket_basis(a, b)).collect()).collect()
}

pub fn ac11() -> Check {
    let c = sl2_constants();
    for p in 0..4 {
        let got = lie_cohomology_adjoint(&c, p);
        ensure(got == SL2_SCRIPT_DIMS[p], || format!("H^{p}(sl2, sl2): port {got}, script {}", SL2_SCRIPT_DIMS[p]))?;
    }
    let g = adjoint_dgla(&LieAlgebraData::sl2(), 3).map_err(|e| e.to_string())?;
    for n in [0, 1] {
        let lib = cohomology(&g, n).dim();
        let raw = cohomology_dim(&g, n);
        let want = SL2_SCRIPT_DIMS[n as usize + 1];
        ensure(lib == want && raw == want, || format!("H^{n}: library {lib}, raw {raw}, expected {want}"))?;
    }
    let k = kuranishi(&g, 3);
    ensure(k.base.nvars == 0 && k.base.dim() == 1, || format!("base {}", k.base))
}

/// All library-side criteria in order.
pub fn all() -> Vec<(&'static str, fn() -> Check)> {
    vec![
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
        ("AC-10", ac10),
        ("AC-11", ac11),
    ]
}
