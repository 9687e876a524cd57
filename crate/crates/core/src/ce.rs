//! Cohomological Chevalley-Eilenberg complex: functionals on graded-symmetric
//! words in the shifted dgla `g[1]`, truncated to words of bounded length.
//!
//! A letter `sx` for `x` of degree `r` has shifted degree `r - 1`; the dual
//! functional on a word `x_1⋯x_p` sits in degree `p − Σ r_i`. Restricting to
//! words of length `≤ W` is a quotient complex, so `d² = 0` holds exactly.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dgla::{Dgla, DglaMorphism};
use crate::error::{Error, Result};
use crate::linalg::{complement, image_basis, kernel_basis, zero_vector, Matrix, Subspace, Vector};
use crate::rational::{int, sign, Rational};

/// A sorted word of letter indices (basis indices of the dgla).
pub type Word = Vec<usize>;

/// Sorts a word with Koszul signs for the shifted degrees. Returns `None`
/// when an odd letter repeats (the word vanishes).
fn normalize_word(mut w: Word, shifted: &[i32]) -> Option<(Word, Rational)> {
    let mut s = int(1);
    // insertion sort: each adjacent swap contributes (-1)^{s_a s_b}
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if (shifted[w[j - 1]] * shifted[w[j]]) % 2 != 0 {
                s = -s;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in w.windows(2) {
        if pair[0] == pair[1] && shifted[pair[0]] % 2 != 0 {
            return None;
        }
    }
    Some((w, s))
}

#[derive(Clone, Debug)]
pub struct CEComplex {
    pub dgla: Dgla,
    pub max_length: usize,
    /// Shifted degree of each letter.
    pub shifted: Vec<i32>,
    /// Words per functional degree, in basis order.
    pub words: BTreeMap<i32, Vec<Word>>,
    index: BTreeMap<Word, (i32, usize)>,
    /// `d: C^D → C^{D+1}` per degree `D`.
    differentials: BTreeMap<i32, Matrix>,
    /// Degrees whose words were enumerated completely (all degrees unless a
    /// degree range was requested).
    complete: Option<(i32, i32)>,
}

/// An element of one degree of a CE complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CECochain {
    pub degree: i32,
    pub coefficients: Vector,
}

/// Functional degree `−Σ s_i` of a word.
fn word_degree(w: &[usize], shifted: &[i32]) -> i32 {
    -w.iter().map(|&i| shifted[i]).sum::<i32>()
}

fn enumerate_words(shifted: &[i32], max_length: usize, range: Option<(i32, i32)>) -> Vec<Word> {
    let all_neg = shifted.iter().all(|&s| s > 0);
    let all_pos = shifted.iter().all(|&s| s < 0);
    let mut out = Vec::new();
    fn rec(
        start: usize,
        cur: &mut Word,
        deg: i32,
        shifted: &[i32],
        max_length: usize,
        range: Option<(i32, i32)>,
        monotone: (bool, bool),
        out: &mut Vec<Word>,
    ) {
        if range.is_none_or(|(lo, hi)| lo <= deg && deg <= hi) {
            out.push(cur.clone());
        }
        if cur.len() == max_length {
            return;
        }
        for i in start..shifted.len() {
            if cur.last() == Some(&i) && shifted[i] % 2 != 0 {
                continue;
            }
            let nd = deg - shifted[i];
            if let Some((lo, hi)) = range {
                // functional degree only decreases (resp. increases) from here
                if (monotone.0 && nd < lo) || (monotone.1 && nd > hi) {
                    continue;
                }
            }
            cur.push(i);
            rec(i, cur, nd, shifted, max_length, range, monotone, out);
            cur.pop();
        }
    }
    rec(0, &mut Vec::new(), 0, shifted, max_length, range, (all_neg, all_pos), &mut out);
    out
}

impl CEComplex {
    /// The complex on all words of length `≤ max_length`.
    pub fn new(g: &Dgla, max_length: usize) -> Self {
        Self::build(g, max_length, None)
    }

    /// Only the words whose functional degree lies in `lo..=hi` (enough to
    /// compute cohomology in `lo+1..=hi-1`).
    pub fn in_degrees(g: &Dgla, max_length: usize, lo: i32, hi: i32) -> Self {
        Self::build(g, max_length, Some((lo, hi)))
    }

    fn build(g: &Dgla, max_length: usize, range: Option<(i32, i32)>) -> Self {
        let shifted: Vec<i32> = (0..g.dim()).map(|i| g.degree_of(i) - 1).collect();
        let mut words: BTreeMap<i32, Vec<Word>> = BTreeMap::new();
        for w in enumerate_words(&shifted, max_length, range) {
            words.entry(word_degree(&w, &shifted)).or_default().push(w);
        }
        for ws in words.values_mut() {
            ws.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        }
        let mut index = BTreeMap::new();
        for (&d, ws) in &words {
            for (k, w) in ws.iter().enumerate() {
                index.insert(w.clone(), (d, k));
            }
        }
        let mut c = CEComplex {
            dgla: g.clone(),
            max_length,
            shifted,
            words,
            index,
            differentials: BTreeMap::new(),
            complete: range,
        };
        let degrees: Vec<i32> = c.words.keys().copied().collect();
        for d in degrees {
            let m = c.differential_matrix(d);
            c.differentials.insert(d, m);
        }
        c
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.words.keys().copied().collect()
    }

    pub fn dim_in(&self, degree: i32) -> usize {
        self.words.get(&degree).map_or(0, Vec::len)
    }

    pub fn words_in(&self, degree: i32) -> &[Word] {
        self.words.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn word_label(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let letters: Vec<&str> = w.iter().map(|&i| self.dgla.label(i)).collect();
        if letters.len() == 1 {
            format!("{}∨", letters[0])
        } else {
            format!("({})∨", letters.join("·"))
        }
    }

    /// The coderivation `δ` on one word: `δ1(sx) = −s(dx)` and
    /// `ℓ2(sx, sy) = (−1)^{|x|} s[x, y]`, with Koszul signs.
    pub fn coderivation(&self, w: &[usize]) -> BTreeMap<Word, Rational> {
        let g = &self.dgla;
        let sh = &self.shifted;
        let mut out: BTreeMap<Word, Rational> = BTreeMap::new();
        let mut push = |word: Word, c: Rational| {
            if c.is_zero() {
                return;
            }
            if let Some((nw, s)) = normalize_word(word, sh) {
                let e = out.entry(nw.clone()).or_insert_with(Rational::zero);
                *e += c * s;
                if e.is_zero() {
                    out.remove(&nw);
                }
            }
        };
        let mut prefix = 0i64;
        for (i, &a) in w.iter().enumerate() {
            let s = sign(prefix);
            for (b, c) in g.d_basis(a).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut nw = w.to_vec();
                nw[i] = b;
                push(nw, -(c * &s));
            }
            prefix += i64::from(sh[a]);
        }
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let (a, b) = (w[i], w[j]);
                let before_i: i64 = w[..i].iter().map(|&k| i64::from(sh[k])).sum();
                let between: i64 = w[i + 1..j].iter().map(|&k| i64::from(sh[k])).sum();
                // move a to the front, then b right after it
                let koszul = sign(i64::from(sh[a]) * before_i + i64::from(sh[b]) * (before_i + between));
                let l2 = sign(i64::from(g.degree_of(a)));
                let Some(br) = g.bracket_basis(a, b) else { continue };
                let rest: Vec<usize> = w.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
                for (c, x) in br {
                    let mut nw = vec![*c];
                    nw.extend(&rest);
                    push(nw, x * &koszul * &l2);
                }
            }
        }
        out
    }

    /// Matrix of `d: C^D → C^{D+1}`, `(dλ)(w) = λ(δw)`.
    fn differential_matrix(&self, d: i32) -> Matrix {
        let src = self.words_in(d);
        let tgt = self.words_in(d + 1);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (row, w) in tgt.iter().enumerate() {
            for (v, c) in self.coderivation(w) {
                if let Some(&(dv, col)) = self.index.get(&v) {
                    debug_assert_eq!(dv, d);
                    m[(row, col)] += &c;
                }
            }
        }
        m
    }

    pub fn differential(&self, degree: i32) -> Matrix {
        self.differentials
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim_in(degree + 1), self.dim_in(degree)))
    }

    pub fn d(&self, a: &CECochain) -> CECochain {
        CECochain { degree: a.degree + 1, coefficients: self.differential(a.degree).mul_vec(&a.coefficients) }
    }

    pub fn zero(&self, degree: i32) -> CECochain {
        CECochain { degree, coefficients: zero_vector(self.dim_in(degree)) }
    }

    pub fn unit(&self) -> CECochain {
        let mut u = self.zero(0);
        if let Some(&(0, k)) = self.index.get(&Vec::new()) {
            u.coefficients[k] = int(1);
        }
        u
    }

    /// The dual basis functional of a word.
    pub fn basis_cochain(&self, w: &[usize]) -> Option<CECochain> {
        let &(d, k) = self.index.get(w)?;
        let mut c = self.zero(d);
        c.coefficients[k] = int(1);
        Some(c)
    }

    /// Functional dual to a word given by letter labels.
    pub fn cochain_of(&self, labels: &[&str]) -> Result<CECochain> {
        let mut w = Vec::new();
        for l in labels {
            w.push(self.dgla.index_of(l).ok_or_else(|| Error::UnknownName(format!("basis {l:?}")))?);
        }
        let (w, _) = normalize_word(w, &self.shifted).ok_or_else(|| Error::Validation("word vanishes".into()))?;
        self.basis_cochain(&w).ok_or_else(|| Error::WindowTooSmall("word outside the truncation".into()))
    }

    /// `(λμ)(x_1⋯x_n) = Σ_S ε(S, S′) λ(x_S) μ(x_{S′})` over position subsets,
    /// `ε(S, S′) = ∏_{i∈S′, j∈S, i<j} (−1)^{s_i s_j}` in shifted degrees.
    pub fn product(&self, a: &CECochain, b: &CECochain) -> Result<CECochain> {
        let degree = a.degree + b.degree;
        let mut out = self.zero(degree);
        let wa = self.words_in(a.degree);
        let wb = self.words_in(b.degree);
        for (i, x) in a.coefficients.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coefficients.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut merged = wa[i].clone();
                merged.extend(&wb[j]);
                let Some((w, _)) = normalize_word(merged, &self.shifted) else { continue };
                if w.len() > self.max_length {
                    return Err(Error::WindowTooSmall(format!(
                        "product needs words of length {} > {}",
                        w.len(),
                        self.max_length
                    )));
                }
                let c = self.split_coefficient(&w, &wa[i], &wb[j]);
                if c.is_zero() {
                    continue;
                }
                let &(_, k) = self
                    .index
                    .get(&w)
                    .ok_or_else(|| Error::WindowTooSmall("product leaves the enumerated degrees".into()))?;
                out.coefficients[k] += x * y * c;
            }
        }
        Ok(out)
    }

    /// `Σ ε(S, S′)` over the position subsets `S` of `w` with `w_S = a`,
    /// `w_{S′} = b`.
    fn split_coefficient(&self, w: &[usize], a: &[usize], b: &[usize]) -> Rational {
        let n = w.len();
        let m = a.len();
        let sh = &self.shifted;
        let mut total = Rational::zero();
        let mut choose: Vec<usize> = (0..m).collect();
        loop {
            let in_s: Vec<bool> = (0..n).map(|p| choose.contains(&p)).collect();
            let sub: Vec<usize> = (0..n).filter(|&p| in_s[p]).map(|p| w[p]).collect();
            let rest: Vec<usize> = (0..n).filter(|&p| !in_s[p]).map(|p| w[p]).collect();
            if sub == a && rest == b {
                let mut e = 0i64;
                for i in (0..n).filter(|&p| !in_s[p]) {
                    for j in (0..n).filter(|&p| in_s[p]) {
                        if i < j {
                            e += i64::from(sh[w[i]]) * i64::from(sh[w[j]]);
                        }
                    }
                }
                total += sign(e);
            }
            // next m-combination of 0..n
            let mut k = m;
            loop {
                if k == 0 {
                    return total;
                }
                k -= 1;
                if choose[k] < n - m + k {
                    break;
                }
            }
            choose[k] += 1;
            for t in k + 1..m {
                choose[t] = choose[t - 1] + 1;
            }
            if m == 0 {
                return total;
            }
        }
    }

    /// Upper bound on the length of words of functional degree `degree`
    /// over the full (untruncated) complex, if finite.
    pub fn max_word_length(&self, degree: i32) -> Option<usize> {
        if self.shifted.is_empty() {
            return Some(0);
        }
        let weights: Vec<i32> = self.shifted.iter().map(|s| -s).collect();
        if weights.iter().all(|&w| w < 0) {
            let min = weights.iter().map(|w| -w).min().unwrap();
            Some(if degree > 0 { 0 } else { (-degree / min) as usize })
        } else if weights.iter().all(|&w| w > 0) {
            let min = *weights.iter().min().unwrap();
            Some(if degree < 0 { 0 } else { (degree / min) as usize })
        } else {
            None
        }
    }

    /// Whether the truncated cohomology in `degree` equals that of the full
    /// complex: every word of degree `D` has length `≤ W − 1` and every word
    /// of degree `D − 1` length `≤ W`.
    pub fn is_trusted(&self, degree: i32) -> bool {
        if let Some((lo, hi)) = self.complete {
            if degree - 1 < lo || degree + 1 > hi {
                return false;
            }
        }
        let w = self.max_length;
        matches!(self.max_word_length(degree), Some(l) if l < w)
            && matches!(self.max_word_length(degree - 1), Some(l) if l <= w)
    }
}

/// Cohomology of one degree of a CE complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CECohomology {
    pub degree: i32,
    pub dim: usize,
    pub representatives: Vec<CECochain>,
    pub trusted: bool,
}

pub fn ce_cohomology(c: &CEComplex, degrees: &[i32]) -> Vec<CECohomology> {
    degrees
        .iter()
        .map(|&d| {
            let z = kernel_basis(&c.differential(d));
            let prev = c.differential(d - 1);
            let b = if prev.cols() == 0 { Subspace::zero(c.dim_in(d)) } else { image_basis(&prev) };
            let h = complement(&b, &z).expect("coboundaries are cocycles");
            CECohomology {
                degree: d,
                dim: h.dim(),
                representatives: h
                    .basis()
                    .iter()
                    .map(|v| CECochain { degree: d, coefficients: v.clone() })
                    .collect(),
                trusted: c.is_trusted(d),
            }
        })
        .collect()
}

/// Precomposition `f*: C*(target) → C*(source)` on each degree present in
/// both complexes (matrices from target cochains to source cochains).
#[derive(Clone, Debug)]
pub struct CEMap {
    pub blocks: BTreeMap<i32, Matrix>,
}

impl CEMap {
    pub fn apply(&self, a: &CECochain, source_dim: usize) -> CECochain {
        match self.blocks.get(&a.degree) {
            Some(m) => CECochain { degree: a.degree, coefficients: m.mul_vec(&a.coefficients) },
            None => CECochain { degree: a.degree, coefficients: zero_vector(source_dim) },
        }
    }
}

/// `(f*λ)(w) = λ(f(w))`, with `f` applied letter by letter.
pub fn ce_of_morphism(f: &DglaMorphism, max_length: usize) -> Result<(CEComplex, CEComplex, CEMap)> {
    let report = crate::dgla::validate_morphism(f);
    if !report.is_ok() {
        return Err(Error::InvalidMorphism(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    let on_target = CEComplex::new(&f.target, max_length);
    let on_source = CEComplex::new(&f.source, max_length);
    let images: Vec<Vector> = (0..f.source.dim()).map(|i| f.map.apply_basis(i)).collect();
    let mut blocks = BTreeMap::new();
    for (&d, src_words) in &on_source.words {
        let tgt_words = on_target.words_in(d);
        let mut m = Matrix::zeros(src_words.len(), tgt_words.len());
        for (row, w) in src_words.iter().enumerate() {
            // expand f(w_1)⋯f(w_p) multilinearly
            let mut terms: Vec<(Word, Rational)> = vec![(Vec::new(), int(1))];
            for &letter in w {
                let mut next = Vec::new();
                for (prefix, c) in &terms {
                    for (t, x) in images[letter].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let mut nw = prefix.clone();
                        nw.push(t);
                        next.push((nw, c * x));
                    }
                }
                terms = next;
            }
            for (tw, c) in terms {
                if let Some((nw, s)) = normalize_word(tw, &on_target.shifted) {
                    if let Some(&(_, col)) = on_target.index.get(&nw) {
                        m[(row, col)] += c * s;
                    }
                }
            }
        }
        blocks.insert(d, m);
    }
    Ok((on_target, on_source, CEMap { blocks }))
}
