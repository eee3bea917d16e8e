use std::fmt::Write as _;

use serde_json::{json, Value};
use skewtaylor_core::dgalgebra::{
    verify_associativity_with, verify_color_comm_with, verify_gamma_axioms_with, verify_leibniz_with, VerifyBudget,
};
use skewtaylor_core::homres::{
    deviations, minimal_resolution_of_k, pi2_multidegrees, poincare_quotient, series_from_deviations, PSeries,
    QuotientAlgebra,
};
use skewtaylor_core::lattice::{
    build_gcd_graph, find_color_iso, predict_equalities, GcdGraph, IsoOptions, LcmLattice, PREDICTION_DEGREE,
};
use skewtaylor_core::taylor::{build_taylor, TaylorComplex};
use skewtaylor_core::{GDegree, Monomial, MonomialIdeal, Scalar, Subset};

use crate::spec::{IdealSpec, ProblemSpec};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Resolve,
    Verify,
    Betti,
    DgVerify,
    Lattice,
    Graph,
    Compare,
    Poincare,
    Deviations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub i_max: Option<usize>,
    pub d_max: Option<u64>,
}

/// Output of one command. `failure` names the first invariant that did not
/// hold.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub failure: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            1
        } else {
            0
        }
    }
}

fn scalar(s: &Scalar) -> Value {
    Value::String(s.canonical())
}

fn mono(m: &Monomial) -> Value {
    json!(m.exps())
}

fn gdeg(g: &GDegree) -> Value {
    Value::Array(g.entries().iter().map(scalar).collect())
}

fn subset(f: Subset) -> Value {
    json!(f.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn taylor(side: &IdealSpec) -> Result<TaylorComplex, CliError> {
    Ok(build_taylor(&side.gens, side.ring.clone())?)
}

fn quotient(side: &IdealSpec) -> Result<QuotientAlgebra, CliError> {
    let ideal = MonomialIdeal::new(side.n(), side.gens.clone())?;
    Ok(QuotientAlgebra::new(side.ring.clone(), ideal)?)
}

fn header(spec: &ProblemSpec, command: &str) -> (String, serde_json::Map<String, Value>) {
    let mut text = String::new();
    for w in &spec.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("field".into(), json!(spec.field.to_string()));
    obj.insert("warnings".into(), json!(spec.warnings));
    (text, obj)
}

pub fn run(command: Command, spec: &ProblemSpec, opts: &RunOptions) -> Result<Report, CliError> {
    match command {
        Command::Resolve => resolve(spec),
        Command::Verify => verify(spec),
        Command::Betti => betti(spec),
        Command::DgVerify => dg_verify(spec, opts),
        Command::Lattice => lattice(spec),
        Command::Graph => graph(spec),
        Command::Compare => compare(spec, opts),
        Command::Poincare => poincare(spec, opts),
        Command::Deviations => deviation_ranks(spec, opts),
    }
}

fn resolve(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "resolve");
    let side = &spec.primary;
    let t = taylor(side)?;
    let ranks: Vec<usize> = (0..=t.s()).map(|i| t.basis(i).len()).collect();
    let _ = writeln!(
        text,
        "Taylor resolution, s = {}, ranks {}",
        t.s(),
        ranks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    );
    text.push_str(&t.describe(&side.names));
    let mut diffs = Vec::new();
    for i in 1..=t.s() {
        for &f in t.basis(i) {
            let entries: Vec<Value> = t
                .diff_of(f)
                .iter()
                .map(|e| json!({"target": subset(e.target), "coeff": scalar(&e.term.coeff), "monomial": mono(&e.term.mono)}))
                .collect();
            diffs.push(json!({"source": subset(f), "multidegree": mono(t.lcm(f)), "entries": entries}));
        }
    }
    obj.insert("s".into(), json!(t.s()));
    obj.insert("ranks".into(), json!(ranks));
    obj.insert("differentials".into(), Value::Array(diffs));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: None,
    })
}

fn verify(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "verify");
    let side = &spec.primary;
    let t = taylor(side)?;
    let d2 = t.verify_d_squared();
    let failure_at = t.first_resolution_failure();
    let _ = writeln!(text, "d^2 = 0: {}", if d2 { "pass" } else { "FAIL" });
    match &failure_at {
        None => {
            let _ = writeln!(text, "resolution of R/I: pass");
        }
        Some(a) => {
            let _ = writeln!(text, "resolution of R/I: FAIL at multidegree {}", a.display_with(&side.names));
        }
    }
    let failure = if !d2 {
        Some("d_squared".to_string())
    } else {
        failure_at.as_ref().map(|a| format!("resolution at multidegree {:?}", a.exps()))
    };
    obj.insert("d_squared".into(), json!(d2));
    obj.insert("resolution".into(), json!(failure_at.is_none()));
    obj.insert("failing_multidegree".into(), failure_at.as_ref().map_or(Value::Null, mono));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure,
    })
}

fn betti(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "betti");
    let side = &spec.primary;
    let t = taylor(side)?;
    let table = t.betti();
    let totals = table.totals();
    let _ = writeln!(
        text,
        "Betti numbers of R/I over R: ({})",
        totals.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    );
    let mut rows = Vec::new();
    for (i, total) in totals.iter().enumerate() {
        let degs: Vec<String> = table
            .entries
            .iter()
            .filter(|((j, _), _)| *j == i)
            .map(|((_, a), b)| {
                let m = a.display_with(&side.names);
                if *b == 1 {
                    m
                } else {
                    format!("{m} (x{b})")
                }
            })
            .collect();
        let _ = writeln!(text, "  beta_{i} = {total}: {}", degs.join(", "));
    }
    for ((i, a), b) in &table.entries {
        rows.push(json!({"i": i, "multidegree": mono(a), "beta": b}));
    }
    obj.insert("totals".into(), json!(totals));
    obj.insert("multigraded".into(), Value::Array(rows));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: None,
    })
}

fn dg_verify(spec: &ProblemSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "dg-verify");
    let t = taylor(&spec.primary)?;
    let budget = VerifyBudget {
        seed: opts.seed,
        ..VerifyBudget::default()
    };
    let checks = [
        ("leibniz", verify_leibniz_with(&t, &budget)?),
        ("associativity", verify_associativity_with(&t, &budget)?),
        ("color_commutativity", verify_color_comm_with(&t, &budget)?),
        ("gamma_axioms", verify_gamma_axioms_with(&t, &budget)?),
    ];
    let mut failure = None;
    for (name, ok) in checks {
        let _ = writeln!(text, "{name}: {}", if ok { "pass" } else { "FAIL" });
        obj.insert(name.into(), json!(ok));
        if !ok && failure.is_none() {
            failure = Some(name.to_string());
        }
    }
    obj.insert("seed".into(), json!(opts.seed));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure,
    })
}

fn lattice_of(side: &IdealSpec) -> Result<(LcmLattice, GcdGraph), CliError> {
    let l = skewtaylor_core::lattice::build_lcm_lattice(&side.gens, side.ring.clone())?;
    let g = build_gcd_graph(&l)?;
    Ok((l, g))
}

fn lattice(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "lattice");
    let side = &spec.primary;
    let (l, _) = lattice_of(side)?;
    let _ = writeln!(text, "LCM lattice with {} nodes", l.len());
    let mut nodes = Vec::new();
    for (k, m) in l.nodes.iter().enumerate() {
        let atom_of: Vec<usize> = (0..l.s()).filter(|&i| l.atoms[i] == k).map(|i| i + 1).collect();
        let tag = if atom_of.is_empty() {
            String::new()
        } else {
            format!("  atom m{}", atom_of[0])
        };
        let _ = writeln!(
            text,
            "  {k}: {}  gdeg {}  degree {}{tag}",
            m.display_with(&side.names),
            l.node_gdeg[k],
            l.node_idegree[k]
        );
        nodes.push(json!({
            "index": k,
            "monomial": mono(m),
            "gdeg": gdeg(&l.node_gdeg[k]),
            "internal_degree": l.node_idegree[k],
            "atom_of": atom_of,
        }));
    }
    let mut covers = Vec::new();
    for a in 0..l.len() {
        for b in 0..l.len() {
            if a != b && l.leq(a, b) && (0..l.len()).all(|c| c == a || c == b || !(l.leq(a, c) && l.leq(c, b))) {
                covers.push(json!([a, b]));
                let _ = writeln!(text, "  {a} < {b}");
            }
        }
    }
    obj.insert("nodes".into(), Value::Array(nodes));
    obj.insert("covers".into(), Value::Array(covers));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: None,
    })
}

fn graph(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (_, mut obj) = header(spec, "graph");
    let side = &spec.primary;
    let (l, g) = lattice_of(side)?;
    let mut text = String::new();
    for w in &spec.warnings {
        let _ = writeln!(text, "# warning: {w}");
    }
    text.push_str(&g.to_edge_list(&l, &side.names));
    let vertices: Vec<Value> = l.nodes.iter().map(mono).collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| json!({"from": e.from, "to": e.to, "weight": scalar(&e.weight)}))
        .collect();
    obj.insert("vertices".into(), Value::Array(vertices));
    obj.insert("edges".into(), Value::Array(edges));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: None,
    })
}

fn compare(spec: &ProblemSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "compare");
    let other = spec
        .compare
        .as_ref()
        .ok_or_else(|| CliError::Input("compare needs a [compare] table".into()))?;
    let (l1, g1) = lattice_of(&spec.primary)?;
    let (l2, g2) = lattice_of(other)?;
    let iso = find_color_iso(
        &l1,
        &g1,
        &l2,
        &g2,
        IsoOptions {
            max_atoms: spec.budget.perm_cap,
        },
    )?;
    let k = opts.i_max.or(spec.budget.i_max).unwrap_or(PREDICTION_DEGREE);
    let t1 = taylor(&spec.primary)?;
    let t2 = taylor(other)?;
    let report = predict_equalities(iso.as_ref(), &t1, &t2, k)?;
    let failure = if report.applicable && !report.passed() {
        Some(if report.betti_equal {
            "poincare_quotient".to_string()
        } else {
            "betti".to_string()
        })
    } else {
        None
    };
    match &iso {
        Some(iso) => {
            let _ = writeln!(
                text,
                "iso found; Betti {}; Poincaré quotient {} through t^{k}",
                if report.betti_equal { "equal" } else { "DIFFER" },
                if report.poincare_equal { "equal" } else { "DIFFER" },
            );
            let map: Vec<String> = iso.atom_map.iter().enumerate().map(|(i, j)| format!("m{}->m'{}", i + 1, j + 1)).collect();
            let _ = writeln!(text, "atom map: {}", map.join(", "));
            if !iso.preserves_internal_degree {
                let _ = writeln!(text, "note: the isomorphism does not preserve internal degrees");
            }
        }
        None => {
            let _ = writeln!(text, "no color-preserving isomorphism; prediction inapplicable");
        }
    }
    obj.insert("iso_found".into(), json!(iso.is_some()));
    obj.insert("atom_map".into(), iso.as_ref().map_or(Value::Null, |i| json!(i.atom_map.iter().map(|j| j + 1).collect::<Vec<_>>())));
    obj.insert("internal_degree_preserved".into(), json!(report.internal_degree_preserved));
    obj.insert("betti".into(), json!([report.betti.0, report.betti.1]));
    obj.insert("betti_equal".into(), json!(report.betti_equal));
    let quot = |v: &[i128]| -> Vec<String> { v.iter().map(ToString::to_string).collect() };
    obj.insert("poincare_quotients".into(), json!([quot(&report.quotients.0), quot(&report.quotients.1)]));
    obj.insert("poincare_equal".into(), json!(report.poincare_equal));
    obj.insert("truncation".into(), json!(k));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure,
    })
}

fn series(spec: &ProblemSpec, opts: &RunOptions) -> Result<(QuotientAlgebra, PSeries, u64), CliError> {
    let s = quotient(&spec.primary)?;
    let i_max = opts.i_max.or(spec.budget.i_max).unwrap_or(PREDICTION_DEGREE);
    let d_max = opts
        .d_max
        .or(spec.budget.d_max)
        .unwrap_or_else(|| s.required_d_max(i_max).max(i_max as u64));
    let p = minimal_resolution_of_k(&s, i_max, d_max)?;
    Ok((s, p, d_max))
}

fn poincare(spec: &ProblemSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "poincare");
    let (s, p, d_max) = series(spec, opts)?;
    let _ = writeln!(text, "Poincaré series of k over R/I (internal degrees <= {d_max})");
    for (i, (b, exact)) in p.coeffs.iter().zip(&p.exact).enumerate() {
        let _ = writeln!(text, "  beta_{i} = {b}{}", if *exact { "" } else { "  (truncated)" });
    }
    let quotient = match p.exact_through {
        Some(k) => Some(poincare_quotient(&p, s.n(), k)?),
        None => None,
    };
    if let Some(q) = &quotient {
        let _ = writeln!(
            text,
            "P(t)/(1+t)^{}: {}",
            s.n(),
            q.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        );
    }
    let bigraded: Vec<Value> = p
        .bigraded
        .iter()
        .map(|((i, a), b)| json!({"i": i, "multidegree": mono(a), "beta": b}))
        .collect();
    obj.insert("d_max".into(), json!(d_max));
    obj.insert("coefficients".into(), json!(p.coeffs));
    obj.insert("exact".into(), json!(p.exact));
    obj.insert("exact_through".into(), json!(p.exact_through));
    obj.insert(
        "quotient".into(),
        quotient.map_or(Value::Null, |q| json!(q.iter().map(ToString::to_string).collect::<Vec<_>>())),
    );
    obj.insert("bigraded".into(), Value::Array(bigraded));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: None,
    })
}

fn deviation_ranks(spec: &ProblemSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let (mut text, mut obj) = header(spec, "deviations");
    let (s, p, _) = series(spec, opts)?;
    let d = deviations(&p)?;
    let rebuilt = series_from_deviations(&d.ranks, d.exact_through)?;
    let round_trip = rebuilt == p.exact_coeffs();
    let _ = writeln!(text, "deviations through degree {}:", d.exact_through);
    for (j, e) in d.ranks.iter().enumerate() {
        let _ = writeln!(text, "  eps_{} = {e}", j + 1);
    }
    let _ = writeln!(text, "round trip: {}", if round_trip { "pass" } else { "FAIL" });
    let pi2 = pi2_multidegrees(&s, s.required_d_max(2).max(2))?;
    let _ = writeln!(text, "pi^2 classes:");
    let names = &spec.primary.names;
    let mut classes = Vec::new();
    for c in &pi2 {
        let _ = writeln!(
            text,
            "  {}  gdeg {}  dual gdeg {}",
            c.multidegree.display_with(names),
            c.gdeg,
            c.dual_gdeg
        );
        classes.push(json!({"multidegree": mono(&c.multidegree), "gdeg": gdeg(&c.gdeg), "dual_gdeg": gdeg(&c.dual_gdeg)}));
    }
    obj.insert("ranks".into(), json!(d.ranks));
    obj.insert("exact_through".into(), json!(d.exact_through));
    obj.insert("round_trip".into(), json!(round_trip));
    obj.insert("pi2".into(), Value::Array(classes));
    Ok(Report {
        text,
        json: Value::Object(obj),
        failure: (!round_trip).then(|| "deviation_round_trip".to_string()),
    })
}
