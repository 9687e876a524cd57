use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dgla::artin::{truncated_power_series, SmallExtension};
use dgla::ce::{ce_cohomology, CEComplex};
use dgla::deformation::{gauge_act, mc_check, obstruction_lift, tangent_space, LiftOutcome, TensorDgla};
use dgla::dgla::{cohomology, cone, degree_window, format_vector, morphism_window, quasi_iso_check};
use dgla::equivariant::{equivariant_kuranishi, equivariant_semi_universal, GroupAction};
use dgla::examples::{example_by_name, registry};
use dgla::free::FreeApproximationState;
use dgla::io::{morphism_from_block, parse_dgla, serialize_dgla, DglaFile, ParsedDgla};
use dgla::kuranishi::{kuranishi, KuranishiResult};
use dgla::linalg::{is_zero_vector, Matrix};
use dgla::poly::format_polyvec;
use dgla::rational::{format_rational, parse_rational, Rational};
use dgla::semiuniversal::{etale_check, prorep_check, prorep_witness, semi_universal_model, SemiUniversalModel};
use dgla::{Dgla, Error, GradedVectorSpace};

#[derive(Parser)]
#[command(name = "dgla", version, about = "Exact computations with differential graded Lie algebras")]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ElementArgs {
    /// Term `g-basis:algebra-basis[:coeff]` of the element, e.g. `x:t` or `y:t^2:-1/2`.
    #[arg(long = "term")]
    terms: Vec<String>,
    /// Truncation order N of k[t1..tm]/(t)^(N+1).
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Number of variables m.
    #[arg(long, default_value_t = 1)]
    vars: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dgla file and check the axioms (and the group action, if any).
    Validate { file: PathBuf },
    /// Cohomology dimensions and representatives.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        degree: Option<i32>,
    },
    /// The cone of a dgla, as a dgla file.
    Cone { file: PathBuf },
    /// Free approximation of a dgla by adjoining generators.
    Free {
        file: PathBuf,
        /// Maximal bracket length kept in the free dgla.
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Maximal number of approximation steps (each may add many generators).
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// Only kill kernels of H(φ) in degrees at least this.
        #[arg(long = "min-degree", default_value_t = 1, allow_hyphen_values = true)]
        min_degree: i32,
    },
    /// Cohomology of the truncated Chevalley-Eilenberg complex.
    Ce {
        file: PathBuf,
        #[arg(long = "word-length", default_value_t = 3)]
        word_length: usize,
    },
    /// First-order deformations modulo gauge.
    Tangent { file: PathBuf },
    /// Evaluate dx + ½[x,x] for x in g ⊗ m.
    McCheck {
        file: PathBuf,
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Apply the gauge action of a ∈ g⁰ ⊗ m to x.
    Gauge {
        file: PathBuf,
        #[command(flatten)]
        element: ElementArgs,
        /// Term of the gauge element, same syntax as --term.
        #[arg(long = "gauge-term")]
        gauge_terms: Vec<String>,
    },
    /// Lift x over k[t]/(t^N) (given with --order N) to k[t]/(t^(N+1)).
    Lift {
        file: PathBuf,
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Kuranishi map and base of the formal deformation functor.
    Kuranishi {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long)]
        equivariant: bool,
    },
    /// Semi-universal sub-dgla concentrated in positive degrees.
    Semiuniversal {
        file: PathBuf,
        #[arg(long)]
        equivariant: bool,
    },
    /// Whether the morphism block of SOURCE into TARGET is étale.
    Etale { source: PathBuf, target: PathBuf },
    /// Prorepresentability: vanishing of H^n for n ≤ 0.
    Prorep { file: PathBuf },
    /// Print a built-in example as a dgla file (lists examples without a name).
    Example { name: Option<String> },
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }

    fn failed(text: String, json: Value) -> Self {
        Report { text, json, code: 1 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownName(_) => 2,
        _ => 1,
    }
}

fn load(path: &Path) -> dgla::Result<ParsedDgla> {
    parse_dgla(path)
}

fn vector_terms(space: &GradedVectorSpace, v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .enumerate()
            .filter(|(_, c)| !is_zero(c))
            .map(|(i, c)| json!({"basis": space.label(i), "coeff": format_rational(c)}))
            .collect(),
    )
}

fn is_zero(c: &Rational) -> bool {
    *c == Rational::default()
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|c| json!(format_rational(c))).collect())).collect(),
    )
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(format_rational).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn dgla_json(g: &Dgla, act: Option<&GroupAction>) -> Value {
    serde_json::to_value(DglaFile::from_dgla(g, act)).expect("dgla files serialize")
}

fn parse_term(text: &str) -> dgla::Result<(String, String, Rational)> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [g, a] => Ok((g.to_string(), a.to_string(), Rational::from_integer(1.into()))),
        [g, a, c] => Ok((g.to_string(), a.to_string(), parse_rational(c)?)),
        _ => Err(Error::Parse(format!("term {text:?}: expected g-basis:algebra-basis[:coeff]"))),
    }
}

fn element(t: &TensorDgla, g: &Dgla, terms: &[String]) -> dgla::Result<Vec<Rational>> {
    let parsed: Vec<(String, String, Rational)> = terms.iter().map(|s| parse_term(s)).collect::<dgla::Result<_>>()?;
    let refs: Vec<(&str, &str, Rational)> = parsed.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.clone())).collect();
    t.element(g, &refs)
}

fn run(cli: &Cli) -> dgla::Result<Report> {
    match &cli.command {
        Command::Validate { file } => {
            let p = match load(file) {
                Ok(p) => p,
                Err(e @ (Error::Validation(_) | Error::InvalidAction(_))) => {
                    return Ok(Report::failed(format!("invalid: {e}\n"), json!({"valid": false, "error": e.to_string()})));
                }
                Err(e) => return Err(e),
            };
            let g = &p.dgla;
            let mut text = format!("valid: {} basis elements", g.dim());
            if let Some((lo, hi)) = g.space().window() {
                text.push_str(&format!(" in degrees {lo}..{hi}"));
            }
            text.push('\n');
            let mut doc = json!({"valid": true, "dim": g.dim(), "degrees": g.space().support()});
            if let Some(a) = &p.action {
                text.push_str(&format!("action: {} ({}) compatible\n", a.kind(), a.generator_names().join(", ")));
                doc["action"] = json!({"kind": a.kind(), "generators": a.generator_names()});
            }
            Ok(Report::ok(text, doc))
        }
        Command::Cohomology { file, degree } => {
            let g = load(file)?.dgla;
            let degrees = match degree {
                Some(d) => vec![*d],
                None => degree_window(&g),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for n in degrees {
                let c = cohomology(&g, n);
                let reps: Vec<Vec<Rational>> = c.representatives.basis().iter().map(|r| g.space().embed(n, r)).collect();
                let shown: Vec<String> = reps.iter().map(|r| format_vector(g.space(), r)).collect();
                text.push_str(&format!("H^{n}: dim {}", c.dim()));
                if !shown.is_empty() {
                    text.push_str(&format!("  {{{}}}", shown.join(", ")));
                }
                text.push('\n');
                rows.push(json!({
                    "degree": n,
                    "dim": c.dim(),
                    "representatives": reps.iter().map(|r| vector_terms(g.space(), r)).collect::<Vec<_>>(),
                }));
            }
            Ok(Report::ok(text, json!({"cohomology": rows})))
        }
        Command::Cone { file } => {
            let c = cone(&load(file)?.dgla);
            Ok(Report::ok(serialize_dgla(&c, None), dgla_json(&c, None)))
        }
        Command::Free { file, window, steps, min_degree } => {
            let g = load(file)?.dgla;
            let mut s = FreeApproximationState::init(&g, *window)?.with_min_degree(*min_degree);
            while s.stage <= *steps && s.lowest_kernel()?.is_some() {
                s = s.step()?;
            }
            let remaining = s.lowest_kernel()?;
            let mut text = format!("stage: {}\n", s.stage);
            let mut gens = Vec::new();
            for (gen, img) in s.free.generators.iter().zip(&s.generator_images) {
                let d = s.free.dgla.d(&s.free.dgla.basis_vector(&gen.label));
                let dtext = format_vector(s.free.dgla.space(), &d);
                let itext = format_vector(g.space(), img);
                text.push_str(&format!("{} (degree {}): d = {dtext}, image {itext}\n", gen.label, gen.degree));
                gens.push(json!({
                    "name": gen.label,
                    "degree": gen.degree,
                    "d": vector_terms(s.free.dgla.space(), &d),
                    "image": vector_terms(g.space(), img),
                }));
            }
            text.push_str(&format!("free dgla: {} basis elements up to bracket length {window}\n", s.free.dgla.dim()));
            let doc = json!({
                "stage": s.stage,
                "window": window,
                "generators": gens,
                "dim": s.free.dgla.dim(),
                "min_degree": min_degree,
                "kernel_degree": remaining.as_ref().map(|(n, _)| *n),
            });
            match remaining {
                None => {
                    text.push_str(&format!("H(φ) injective in degrees ≥ {min_degree}\n"));
                    Ok(Report::ok(text, doc))
                }
                Some((n, _)) => {
                    text.push_str(&format!("H(φ) still has a kernel in degree {n}\n"));
                    Ok(Report::failed(text, doc))
                }
            }
        }
        Command::Ce { file, word_length } => {
            let g = load(file)?.dgla;
            let c = CEComplex::new(&g, *word_length);
            let hs = ce_cohomology(&c, &c.degrees());
            let mut text = format!("word length ≤ {word_length}\n");
            let mut rows = Vec::new();
            for h in hs.iter().filter(|h| h.dim > 0) {
                let reps: Vec<String> = h
                    .representatives
                    .iter()
                    .map(|r| {
                        let terms: Vec<String> = r
                            .coefficients
                            .iter()
                            .enumerate()
                            .filter(|(_, x)| !is_zero(x))
                            .map(|(k, x)| format!("{}{}", coeff_prefix(x), c.word_label(&c.words_in(h.degree)[k])))
                            .collect();
                        terms.join(" + ")
                    })
                    .collect();
                let flag = if h.trusted { "" } else { " (truncation artifact possible)" };
                text.push_str(&format!("H^{}: dim {}{flag}  {{{}}}\n", h.degree, h.dim, reps.join(", ")));
                rows.push(json!({"degree": h.degree, "dim": h.dim, "trusted": h.trusted, "representatives": reps}));
            }
            Ok(Report::ok(text, json!({"word_length": word_length, "cohomology": rows})))
        }
        Command::Tangent { file } => {
            let g = load(file)?.dgla;
            let t = tangent_space(&g);
            let shown: Vec<String> = t.iter().map(|v| format_vector(g.space(), v)).collect();
            let text = format!("dim {}  {{{}}}\n", t.len(), shown.join(", "));
            Ok(Report::ok(
                text,
                json!({"dim": t.len(), "basis": t.iter().map(|v| vector_terms(g.space(), v)).collect::<Vec<_>>()}),
            ))
        }
        Command::McCheck { file, element: e } => {
            let g = load(file)?.dgla;
            let a = truncated_power_series(e.vars, e.order);
            let t = TensorDgla::over_maximal_ideal(&g, &a)?;
            let x = element(&t, &g, &e.terms)?;
            let r = mc_check(&t, &x)?;
            let mc = is_zero_vector(&r);
            let text = format!(
                "x = {}\ndx + ½[x,x] = {}\nMaurer-Cartan: {}\n",
                format_vector(t.dgla.space(), &x),
                format_vector(t.dgla.space(), &r),
                if mc { "yes" } else { "no" }
            );
            let doc = json!({"element": vector_terms(t.dgla.space(), &x), "curvature": vector_terms(t.dgla.space(), &r), "mc": mc});
            Ok(if mc { Report::ok(text, doc) } else { Report::failed(text, doc) })
        }
        Command::Gauge { file, element: e, gauge_terms } => {
            let g = load(file)?.dgla;
            let a = truncated_power_series(e.vars, e.order);
            let t = TensorDgla::over_maximal_ideal(&g, &a)?;
            let x = element(&t, &g, &e.terms)?;
            let ga = element(&t, &g, gauge_terms)?;
            let y = gauge_act(&t, &ga, &x)?;
            let mc = is_zero_vector(&mc_check(&t, &y)?);
            let sp = t.dgla.space();
            let text = format!("e^a·x = {}\nMaurer-Cartan: {}\n", format_vector(sp, &y), if mc { "yes" } else { "no" });
            Ok(Report::ok(text, json!({"result": vector_terms(sp, &y), "mc": mc})))
        }
        Command::Lift { file, element: e } => {
            let g = load(file)?.dgla;
            let ext = SmallExtension::truncation(e.vars, e.order + 1)?;
            let t = TensorDgla::over_maximal_ideal(&g, &ext.quotient)?;
            let x = element(&t, &g, &e.terms)?;
            let big = TensorDgla::over_maximal_ideal(&g, &ext.big)?;
            match obstruction_lift(&g, &ext, &x)? {
                LiftOutcome::Lifted(v) => {
                    let text = format!("lift: {}\n", format_vector(big.dgla.space(), &v));
                    Ok(Report::ok(text, json!({"lifted": true, "lift": vector_terms(big.dgla.space(), &v)})))
                }
                LiftOutcome::Obstructed { class, cocycle } => {
                    let kernel = TensorDgla::new(&g, &ext.big, &ext.kernel)?;
                    let sp = kernel.dgla.space();
                    let text = format!(
                        "obstructed: class {}, cocycle {}\n",
                        class.iter().map(format_rational).collect::<Vec<_>>().join(" "),
                        format_vector(sp, &cocycle)
                    );
                    let doc = json!({
                        "lifted": false,
                        "class": class.iter().map(format_rational).collect::<Vec<_>>(),
                        "cocycle": vector_terms(sp, &cocycle),
                    });
                    Ok(Report::failed(text, doc))
                }
            }
        }
        Command::Kuranishi { file, order, equivariant } => {
            let p = load(file)?;
            let g = &p.dgla;
            if *equivariant {
                let act = p.action.clone().unwrap_or_else(GroupAction::trivial);
                let ek = equivariant_kuranishi(g, &act, *order)?;
                let (mut text, mut doc) = kuranishi_report(g, &ek.result);
                for (k, name) in ek.generators.iter().enumerate() {
                    text.push_str(&format!(
                        "{name} on H^1: {}, on H^2: {}\n",
                        matrix_text(&ek.on_h1[k]),
                        matrix_text(&ek.on_h2[k])
                    ));
                }
                let eq = ek.is_equivariant();
                text.push_str(&format!("equivariant: {}\n", if eq { "yes" } else { "no" }));
                doc["equivariant"] = json!(eq);
                doc["action"] = Value::Array(
                    ek.generators
                        .iter()
                        .enumerate()
                        .map(|(k, n)| json!({"name": n, "h1": matrix_json(&ek.on_h1[k]), "h2": matrix_json(&ek.on_h2[k])}))
                        .collect(),
                );
                Ok(if eq { Report::ok(text, doc) } else { Report::failed(text, doc) })
            } else {
                let k = kuranishi(g, *order);
                let (text, doc) = kuranishi_report(g, &k);
                Ok(Report::ok(text, doc))
            }
        }
        Command::Semiuniversal { file, equivariant } => {
            let p = load(file)?;
            let g = &p.dgla;
            let (m, act) = if *equivariant {
                let act = p.action.clone().unwrap_or_else(GroupAction::trivial);
                let (m, r) = equivariant_semi_universal(g, &act)?;
                (m, Some(r))
            } else {
                (semi_universal_model(g)?, None)
            };
            let (text, doc) = semiuniversal_report(g, &m, act.as_ref())?;
            let ok = doc["etale"] == json!(true) && doc["prorepresentable"] == json!(true);
            Ok(if ok { Report::ok(text, doc) } else { Report::failed(text, doc) })
        }
        Command::Etale { source, target } => {
            let s = load(source)?;
            let t = load(target)?;
            let block = s
                .morphism
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("{}: no morphism block", source.display())))?;
            let f = morphism_from_block(block, &s.dgla, &t.dgla)?;
            let degrees: Vec<i32> = morphism_window(&f).into_iter().filter(|&n| n >= 1).collect();
            let per = quasi_iso_check(&f, &degrees)?;
            let mut text = String::new();
            for (n, iso) in &per {
                text.push_str(&format!("H^{n}(f): {}\n", if *iso { "isomorphism" } else { "not an isomorphism" }));
            }
            let etale = etale_check(&f, &degrees)?;
            text.push_str(&format!("étale: {}\n", if etale { "yes" } else { "no" }));
            let doc = json!({
                "etale": etale,
                "degrees": per.iter().map(|(n, iso)| json!({"degree": n, "isomorphism": iso})).collect::<Vec<_>>(),
            });
            Ok(if etale { Report::ok(text, doc) } else { Report::failed(text, doc) })
        }
        Command::Prorep { file } => {
            let g = load(file)?.dgla;
            match prorep_witness(&g, &degree_window(&g)) {
                None => Ok(Report::ok("prorepresentable: H^n = 0 for all n ≤ 0\n".into(), json!({"prorepresentable": true}))),
                Some((n, reps)) => {
                    let shown: Vec<String> = reps.iter().map(|r| format_vector(g.space(), r)).collect();
                    Ok(Report::failed(
                        format!("H^{n} nonzero: {{{}}}\n", shown.join(", ")),
                        json!({
                            "prorepresentable": false,
                            "degree": n,
                            "representatives": reps.iter().map(|r| vector_terms(g.space(), r)).collect::<Vec<_>>(),
                        }),
                    ))
                }
            }
        }
        Command::Example { name } => match name {
            Some(name) => {
                let ex = example_by_name(name)?;
                Ok(Report::ok(serialize_dgla(&ex.dgla, ex.action.as_ref()), dgla_json(&ex.dgla, ex.action.as_ref())))
            }
            None => {
                let reg = registry();
                let text: String = reg.iter().map(|e| format!("{:<13} {}\n", e.name(), e.description())).collect();
                let doc = Value::Array(
                    reg.iter().map(|e| json!({"name": e.name(), "description": e.description()})).collect(),
                );
                Ok(Report::ok(text, json!({"examples": doc})))
            }
        },
    }
}

fn coeff_prefix(c: &Rational) -> String {
    let one = Rational::from_integer(1.into());
    if *c == one {
        String::new()
    } else if *c == -one {
        "-".into()
    } else {
        format!("{}·", format_rational(c))
    }
}

fn kuranishi_report(g: &Dgla, k: &KuranishiResult) -> (String, Value) {
    let labels: Vec<String> = g.space().labels().to_vec();
    let mut text = format!("order: {}\n", k.order);
    for (i, v) in k.h1_basis.iter().enumerate() {
        text.push_str(&format!("ξ{} ↔ {}\n", i + 1, format_vector(g.space(), v)));
    }
    let h2: Vec<String> = k.h2_basis.iter().map(|v| format_vector(g.space(), v)).collect();
    text.push_str(&format!("H^2 basis: {{{}}}\n", h2.join(", ")));
    let solution = format_polyvec(&k.solution, "ξ", &labels);
    let obstruction = k.format_obstruction();
    let base = k.base.to_string();
    text.push_str(&format!("x(ξ) = {solution}\nOb(ξ) = {obstruction}\nbase: {base}\n"));
    let doc = json!({
        "order": k.order,
        "h1": k.h1_basis.iter().map(|v| vector_terms(g.space(), v)).collect::<Vec<_>>(),
        "h2": k.h2_basis.iter().map(|v| vector_terms(g.space(), v)).collect::<Vec<_>>(),
        "solution": solution,
        "obstruction": obstruction,
        "base": base,
    });
    (text, doc)
}

fn semiuniversal_report(g: &Dgla, m: &SemiUniversalModel, act: Option<&GroupAction>) -> dgla::Result<(String, Value)> {
    let k = &m.k;
    let sp = k.space();
    let basis: Vec<String> = sp.basis().iter().map(|(l, d)| format!("{l} ({d})")).collect();
    let mut text = format!("k: {}\n", if basis.is_empty() { "0".into() } else { basis.join(", ") });
    let local = |s: &dgla::Subspace| -> Vec<String> {
        s.basis().iter().map(|v| format_vector(g.space(), &g.space().embed(1, v))).collect()
    };
    text.push_str(&format!("E^1: {{{}}}\n", local(&m.splitting.e1).join(", ")));
    text.push_str(&format!("H^1: {{{}}}\n", local(&m.splitting.h1).join(", ")));
    let etale = etale_check(&m.inclusion, &degree_window(g))?;
    let prorep = prorep_check(k, &degree_window(k));
    text.push_str(&format!("étale: {}\nprorepresentable: {}\n", yes(etale), yes(prorep)));
    let mut doc = json!({
        "k": dgla_json(k, act),
        "e1": local(&m.splitting.e1),
        "h1": local(&m.splitting.h1),
        "etale": etale,
        "prorepresentable": prorep,
    });
    if let Some(a) = act {
        let mats: Vec<String> = a.generator_matrices().iter().map(matrix_text).collect();
        text.push_str(&format!("action on k: {}\n", mats.join(", ")));
        doc["stable"] = json!(true);
    }
    Ok((text, doc))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                let mut doc = r.json;
                if let Value::Object(map) = &mut doc {
                    map.insert("exit_code".into(), json!(r.code));
                }
                println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({"error": e.to_string(), "exit_code": code})).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
