//! JSON interchange format for dglas, optional group actions and morphisms.
//!
//! Coefficients are exact rationals written as strings `"p/q"` (plain
//! integers are accepted too). Brackets may list only one of `[a,b]`,
//! `[b,a]`; the other is filled in by graded antisymmetry. Group matrices are
//! given per degree; a missing degree acts as the identity.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dgla::{validate_dgla, validate_morphism, Dgla, DglaMorphism};
use crate::equivariant::{validate_action, FiniteAction, GroupAction, TorusAction};
use crate::error::{Error, Result};
use crate::graded::GradedVectorSpace;
use crate::linalg::Matrix;
use crate::rational::{format_rational, parse_rational, sign, Rational};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Text(String),
    Int(i64),
}

impl Coeff {
    pub fn from_rational(r: &Rational) -> Self {
        Coeff::Text(format_rational(r))
    }

    pub fn value(&self) -> Result<Rational> {
        match self {
            Coeff::Text(s) => parse_rational(s),
            Coeff::Int(n) => Ok(Rational::from_integer((*n).into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub from: String,
    pub to: String,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub basis: String,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    /// Square block per degree, rows and columns in basis order.
    pub matrices: BTreeMap<String, Vec<Vec<Coeff>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub basis: String,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupBlock {
    Finite {
        generators: Vec<GeneratorEntry>,
        #[serde(default)]
        relations: Vec<String>,
    },
    Torus {
        rank: usize,
        weights: Vec<WeightEntry>,
    },
}

/// Images of source basis elements in a target dgla (names on the right
/// refer to the target).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBlock {
    pub images: Vec<ImageEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub basis: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaFile {
    pub format_version: String,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub differential: Vec<DifferentialEntry>,
    #[serde(default)]
    pub bracket: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismBlock>,
}

/// A parsed and validated file.
#[derive(Clone, Debug)]
pub struct ParsedDgla {
    pub dgla: Dgla,
    pub action: Option<GroupAction>,
    pub morphism: Option<MorphismBlock>,
}

fn coeff_at(c: &Coeff, at: &str) -> Result<Rational> {
    c.value().map_err(|e| Error::Parse(format!("{at}: {e}")))
}

fn index_at(space: &GradedVectorSpace, name: &str, at: &str) -> Result<usize> {
    space.index_of(name).ok_or_else(|| Error::Parse(format!("{at}: unknown basis name {name:?}")))
}

impl DglaFile {
    pub fn from_dgla(g: &Dgla, action: Option<&GroupAction>) -> Self {
        let space = g.space();
        let basis = space.basis().into_iter().map(|(name, degree)| BasisEntry { name, degree }).collect();
        let mut differential = Vec::new();
        for j in 0..g.dim() {
            for (i, c) in g.d_basis(j).iter().enumerate() {
                if !c.is_zero() {
                    differential.push(DifferentialEntry {
                        from: g.label(j).into(),
                        to: g.label(i).into(),
                        coeff: Coeff::from_rational(c),
                    });
                }
            }
        }
        let bracket = g
            .bracket_table()
            .iter()
            .filter(|((i, j), _)| i <= j)
            .map(|((i, j), combo)| BracketEntry {
                left: g.label(*i).into(),
                right: g.label(*j).into(),
                terms: combo.iter().map(|(k, c)| Term { basis: g.label(*k).into(), coeff: Coeff::from_rational(c) }).collect(),
            })
            .collect();
        DglaFile {
            format_version: FORMAT_VERSION.into(),
            basis,
            differential,
            bracket,
            group: action.map(|a| group_block(space, a)),
            morphism: None,
        }
    }

    /// Builds the dgla without checking the axioms.
    pub fn to_dgla(&self) -> Result<Dgla> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("format_version: unsupported version {:?}", self.format_version)));
        }
        let mut seen = BTreeMap::new();
        for (k, b) in self.basis.iter().enumerate() {
            if let Some(prev) = seen.insert(b.name.as_str(), k) {
                return Err(Error::Parse(format!("basis[{k}]: name {:?} already used at basis[{prev}]", b.name)));
            }
        }
        let space = GradedVectorSpace::from_basis(
            &self.basis.iter().map(|b| (b.name.as_str(), b.degree)).collect::<Vec<_>>(),
        )?;
        let n = space.dim();
        let mut dm = Matrix::zeros(n, n);
        for (k, e) in self.differential.iter().enumerate() {
            let at = format!("differential[{k}]");
            let j = index_at(&space, &e.from, &format!("{at}.from"))?;
            let i = index_at(&space, &e.to, &format!("{at}.to"))?;
            let c = coeff_at(&e.coeff, &format!("{at}.coeff"))?;
            if space.degree_of(i) != space.degree_of(j) + 1 && !c.is_zero() {
                return Err(Error::Validation(format!(
                    "{at}: d({}) has a term {} in degree {}, expected degree {}",
                    e.from,
                    e.to,
                    space.degree_of(i),
                    space.degree_of(j) + 1
                )));
            }
            dm[(i, j)] += c;
        }
        let mut given: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for (k, e) in self.bracket.iter().enumerate() {
            let at = format!("bracket[{k}]");
            let i = index_at(&space, &e.left, &format!("{at}.left"))?;
            let j = index_at(&space, &e.right, &format!("{at}.right"))?;
            let entry = given.entry((i, j)).or_default();
            for (t, term) in e.terms.iter().enumerate() {
                let tat = format!("{at}.terms[{t}]");
                entry.push((index_at(&space, &term.basis, &format!("{tat}.basis"))?, coeff_at(&term.coeff, &format!("{tat}.coeff"))?));
            }
        }
        let mut table = given.clone();
        for ((i, j), combo) in &given {
            if i != j && !given.contains_key(&(*j, *i)) {
                let s = -sign(i64::from(space.degree_of(*i)) * i64::from(space.degree_of(*j)));
                table.insert((*j, *i), combo.iter().map(|(k, c)| (*k, c * &s)).collect());
            }
        }
        let differential = crate::graded::GradedMap::from_global(&space, &space, 1, &dm)?;
        Dgla::new(space, differential, table)
    }

    pub fn to_action(&self, g: &Dgla) -> Result<Option<GroupAction>> {
        let Some(block) = &self.group else { return Ok(None) };
        let space = g.space();
        match block {
            GroupBlock::Finite { generators, relations } => {
                let mut names = Vec::new();
                let mut mats = Vec::new();
                for (k, gen) in generators.iter().enumerate() {
                    let at = format!("group.generators[{k}]");
                    let mut m = Matrix::identity(g.dim());
                    for (key, rows) in &gen.matrices {
                        let bat = format!("{at}.matrices[{key:?}]");
                        let deg: i32 = key.parse().map_err(|_| Error::Parse(format!("{bat}: degree must be an integer")))?;
                        let r = space.range(deg);
                        if rows.len() != r.len() || rows.iter().any(|row| row.len() != r.len()) {
                            return Err(Error::Parse(format!("{bat}: expected a {0}x{0} block", r.len())));
                        }
                        for (a, row) in rows.iter().enumerate() {
                            for (b, c) in row.iter().enumerate() {
                                m[(r.start + a, r.start + b)] = coeff_at(c, &format!("{bat}[{a}][{b}]"))?;
                            }
                        }
                    }
                    names.push(gen.name.as_str());
                    mats.push(m);
                }
                for (k, rel) in relations.iter().enumerate() {
                    for token in rel.split('*') {
                        let name = token.split('^').next().unwrap_or("").trim();
                        if !names.contains(&name) {
                            return Err(Error::Parse(format!("group.relations[{k}]: unknown generator {name:?}")));
                        }
                    }
                }
                let rels: Vec<&str> = relations.iter().map(String::as_str).collect();
                Ok(Some(GroupAction::Finite(FiniteAction::new(&names, &rels, mats))))
            }
            GroupBlock::Torus { rank, weights } => {
                let mut table = vec![vec![0; *rank]; g.dim()];
                for (k, w) in weights.iter().enumerate() {
                    let at = format!("group.weights[{k}]");
                    let i = index_at(space, &w.basis, &format!("{at}.basis"))?;
                    if w.weight.len() != *rank {
                        return Err(Error::Parse(format!("{at}.weight: expected {rank} entries")));
                    }
                    table[i] = w.weight.clone();
                }
                Ok(Some(GroupAction::Torus(TorusAction::new(*rank, table))))
            }
        }
    }
}

fn group_block(space: &GradedVectorSpace, act: &GroupAction) -> GroupBlock {
    match act {
        GroupAction::Finite(f) => GroupBlock::Finite {
            generators: f
                .generators
                .iter()
                .zip(&f.matrices)
                .map(|(name, m)| GeneratorEntry {
                    name: name.clone(),
                    matrices: space
                        .support()
                        .into_iter()
                        .map(|deg| {
                            let r = space.range(deg);
                            let rows = r
                                .clone()
                                .map(|a| r.clone().map(|b| Coeff::from_rational(&m[(a, b)])).collect())
                                .collect();
                            (deg.to_string(), rows)
                        })
                        .collect(),
                })
                .collect(),
            relations: f.relations.clone(),
        },
        GroupAction::Torus(t) => GroupBlock::Torus {
            rank: t.rank,
            weights: t
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| WeightEntry { basis: space.label(i).into(), weight: w.clone() })
                .collect(),
        },
    }
}

/// Parses JSON text; syntax and name errors are `Parse`, failed axioms are
/// `Validation`.
pub fn parse_dgla_str(text: &str) -> Result<ParsedDgla> {
    let file: DglaFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dgla = file.to_dgla()?;
    validate_dgla(&dgla).into_result()?;
    let action = file.to_action(&dgla)?;
    if let Some(a) = &action {
        validate_action(&dgla, a).into_result()?;
    }
    Ok(ParsedDgla { dgla, action, morphism: file.morphism })
}

pub fn parse_dgla(path: &Path) -> Result<ParsedDgla> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_dgla_str(&text)
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_dgla(g: &Dgla, action: Option<&GroupAction>) -> String {
    let mut s = serde_json::to_string_pretty(&DglaFile::from_dgla(g, action)).expect("dgla files serialize");
    s.push('\n');
    s
}

/// Resolves a morphism block against its source and target, and checks it.
pub fn morphism_from_block(block: &MorphismBlock, source: &Dgla, target: &Dgla) -> Result<DglaMorphism> {
    let mut m = Matrix::zeros(target.dim(), source.dim());
    for (k, e) in block.images.iter().enumerate() {
        let at = format!("morphism.images[{k}]");
        let j = index_at(source.space(), &e.basis, &format!("{at}.basis"))?;
        for (t, term) in e.terms.iter().enumerate() {
            let tat = format!("{at}.terms[{t}]");
            let i = index_at(target.space(), &term.basis, &format!("{tat}.basis"))?;
            m[(i, j)] += coeff_at(&term.coeff, &format!("{tat}.coeff"))?;
        }
    }
    let f = DglaMorphism::from_global(source, target, &m)
        .map_err(|_| Error::InvalidMorphism("morphism does not preserve degrees".into()))?;
    validate_morphism(&f).into_result().map_err(|e| match e {
        Error::Validation(msg) => Error::InvalidMorphism(msg),
        other => other,
    })?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::registry;

    #[test]
    fn examples_round_trip() {
        for e in registry() {
            let ex = e.build();
            let text = serialize_dgla(&ex.dgla, ex.action.as_ref());
            let back = parse_dgla_str(&text).unwrap();
            assert_eq!(back.dgla, ex.dgla, "{}", e.name());
            assert_eq!(back.action, ex.action, "{}", e.name());
            assert_eq!(serialize_dgla(&back.dgla, back.action.as_ref()), text);
        }
    }

    #[test]
    fn unknown_name_is_a_parse_error() {
        let text = r#"{"format_version":"1","basis":[{"name":"x","degree":1}],
            "bracket":[{"left":"x","right":"x","terms":[{"basis":"q","coeff":"2"}]}]}"#;
        match parse_dgla_str(text) {
            Err(Error::Parse(msg)) => assert!(msg.contains("\"q\"") && msg.contains("bracket[0].terms[0].basis")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partner_bracket_is_filled_in() {
        let text = r#"{"format_version":"1",
            "basis":[{"name":"x","degree":1},{"name":"z","degree":0},{"name":"y","degree":1}],
            "bracket":[{"left":"z","right":"x","terms":[{"basis":"y","coeff":1}]}]}"#;
        let g = parse_dgla_str(text).unwrap().dgla;
        let [x, z, y] = ["x", "z", "y"].map(|l| g.index_of(l).unwrap());
        assert_eq!(g.bracket_basis(z, x).unwrap(), &vec![(y, Rational::from_integer(1.into()))]);
        assert_eq!(g.bracket_basis(x, z).unwrap(), &vec![(y, Rational::from_integer((-1).into()))]);
    }

    #[test]
    fn axiom_failure_is_a_validation_error() {
        let text = r#"{"format_version":"1","basis":[{"name":"x","degree":1},{"name":"y","degree":2}],
            "bracket":[{"left":"x","right":"x","terms":[{"basis":"x","coeff":"2"}]}]}"#;
        assert!(matches!(parse_dgla_str(text), Err(Error::Validation(_))));
        let bad_coeff = r#"{"format_version":"1","basis":[{"name":"x","degree":1}],
            "differential":[{"from":"x","to":"x","coeff":"1/0"}]}"#;
        assert!(matches!(parse_dgla_str(bad_coeff), Err(Error::Parse(_))));
    }

    #[test]
    fn action_block_is_checked() {
        let text = r#"{"format_version":"1","basis":[{"name":"x","degree":1},{"name":"y","degree":2}],
            "bracket":[{"left":"x","right":"x","terms":[{"basis":"y","coeff":"2"}]}],
            "group":{"kind":"finite","generators":[{"name":"s","matrices":{"2":[["-1"]]}}],"relations":["s^2"]}}"#;
        // y ↦ −y but [x,x] = 2y with x fixed: not bracket-compatible
        assert!(matches!(parse_dgla_str(text), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn torus_round_trip() {
        let g = crate::examples::obstruction_toy();
        let act = GroupAction::Torus(TorusAction::new(1, vec![vec![1], vec![2]]));
        let back = parse_dgla_str(&serialize_dgla(&g, Some(&act))).unwrap();
        assert_eq!(back.action, Some(act));
    }
}
