//! The TOML problem description.
//!
//! ```toml
//! field = "prime"          # or "rational"; default from SKEWTAYLOR_FIELD
//! prime = 101
//! variables = ["x", "y"]   # optional
//! degrees = [1, 1]         # optional internal degrees
//! generators = [[2, 0], [1, 1]]
//!
//! [commute]                # q_ij with x_i x_j = q_ij x_j x_i, one-based
//! "1,2" = "3"
//!
//! [compare]                # optional second ideal, same field
//! generators = [[2, 0], [0, 2]]
//!
//! [budget]
//! i_max = 8
//! d_max = 16
//! perm_cap = 9
//! ```
//!
//! Instead of `[commute]` a full matrix `q = [["1", "3"], ["1/3", "1"]]` may
//! be given. Scalars are strings `"a"` or `"a/b"`, or plain integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use skewtaylor_core::qcommute::DEFAULT_EXPONENT_CAP;
use skewtaylor_core::skewpoly::minimal_generators;
use skewtaylor_core::{Field, Monomial, QMatrix, Scalar};

use crate::CliError;

/// Environment variable naming the default field: `rational` or
/// `prime:<p>`.
pub const FIELD_ENV: &str = "SKEWTAYLOR_FIELD";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    fn parse(&self, field: Field) -> Result<Scalar, CliError> {
        match self {
            Literal::Int(v) => Ok(field.from_i64(*v)),
            Literal::Text(t) => field.parse_scalar(t).map_err(CliError::from),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSide {
    variables: Option<Vec<String>>,
    degrees: Option<Vec<u32>>,
    q: Option<Vec<Vec<Literal>>>,
    commute: Option<BTreeMap<String, Literal>>,
    generators: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBudget {
    i_max: Option<usize>,
    d_max: Option<u64>,
    perm_cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    field: Option<String>,
    prime: Option<u64>,
    variables: Option<Vec<String>>,
    degrees: Option<Vec<u32>>,
    q: Option<Vec<Vec<Literal>>>,
    commute: Option<BTreeMap<String, Literal>>,
    generators: Vec<Vec<i64>>,
    compare: Option<RawSide>,
    budget: Option<RawBudget>,
}

/// One ring together with a monomial ideal in it.
#[derive(Debug, Clone)]
pub struct IdealSpec {
    pub names: Vec<String>,
    pub ring: Arc<QMatrix>,
    /// Minimal generators, in input order.
    pub gens: Vec<Monomial>,
    pub input_gens: Vec<Monomial>,
}

impl IdealSpec {
    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn was_minimal(&self) -> bool {
        self.gens.len() == self.input_gens.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub i_max: Option<usize>,
    pub d_max: Option<u64>,
    pub perm_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            i_max: None,
            d_max: None,
            perm_cap: skewtaylor_core::lattice::DEFAULT_MAX_ATOMS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub field: Field,
    pub primary: IdealSpec,
    pub compare: Option<IdealSpec>,
    pub budget: Budget,
    pub warnings: Vec<String>,
}

/// Reads a field descriptor in the environment-variable form.
pub fn parse_field_descriptor(text: &str) -> Result<Field, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("rational") || t == "Q" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("prime:")
        .ok_or_else(|| CliError::Input(format!("unknown field descriptor {t:?}")))?;
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("bad prime in field descriptor {t:?}")))?;
    Ok(Field::prime(p)?)
}

fn resolve_field(raw: &RawSpec, default: Option<Field>) -> Result<Field, CliError> {
    match (raw.field.as_deref(), raw.prime) {
        (Some("rational"), None) => Ok(Field::Rational),
        (Some("rational"), Some(_)) => Err(CliError::Input("`prime` given with field = \"rational\"".into())),
        (Some("prime"), Some(p)) => Ok(Field::prime(p)?),
        (Some("prime"), None) => Err(CliError::Input("field = \"prime\" needs `prime = <p>`".into())),
        (Some(other), _) => Err(CliError::Input(format!("unknown field {other:?}; use \"rational\" or \"prime\""))),
        (None, Some(p)) => Ok(Field::prime(p)?),
        (None, None) => Ok(default.unwrap_or(Field::Rational)),
    }
}

fn parse_pair(key: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("commute key {key:?} must look like \"i,j\" with 1-based indices"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

fn build_side(
    field: Field,
    label: &str,
    variables: Option<Vec<String>>,
    degrees: Option<Vec<u32>>,
    q: Option<Vec<Vec<Literal>>>,
    commute: Option<BTreeMap<String, Literal>>,
    generators: Vec<Vec<i64>>,
    warnings: &mut Vec<String>,
) -> Result<IdealSpec, CliError> {
    if generators.is_empty() {
        return Err(CliError::Input(format!("{label}: the generator list is empty")));
    }
    let n = generators[0].len();
    if n == 0 {
        return Err(CliError::Input(format!("{label}: generators need at least one variable")));
    }
    let mut input_gens = Vec::with_capacity(generators.len());
    for (k, g) in generators.iter().enumerate() {
        if g.len() != n {
            return Err(CliError::Input(format!(
                "{label}: generator {} has {} exponents, expected {n}",
                k + 1,
                g.len()
            )));
        }
        let mut exps = Vec::with_capacity(n);
        for &e in g {
            if e < 0 {
                return Err(CliError::Input(format!("{label}: generator {} has a negative exponent", k + 1)));
            }
            let e = u32::try_from(e).map_err(|_| skewtaylor_core::Error::ExponentOverflow { cap: DEFAULT_EXPONENT_CAP })?;
            exps.push(e);
        }
        input_gens.push(Monomial::with_cap(exps, DEFAULT_EXPONENT_CAP)?);
    }
    if let Some(v) = &variables {
        if v.len() != n {
            return Err(CliError::Input(format!("{label}: {} variable names for {n} variables", v.len())));
        }
    }
    let names = variables.unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
    let degrees = degrees.unwrap_or_else(|| vec![1; n]);
    if degrees.len() != n {
        return Err(CliError::Input(format!("{label}: {} degrees for {n} variables", degrees.len())));
    }
    let ring = match (q, commute) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(format!("{label}: give either `q` or `[commute]`, not both")))
        }
        (Some(rows), None) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::Input(format!("{label}: q must be a {n} x {n} matrix")));
            }
            let entries = rows
                .iter()
                .map(|r| r.iter().map(|l| l.parse(field)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            QMatrix::new(field, entries, degrees)?
        }
        (None, commute) => {
            let mut given: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (key, lit) in commute.unwrap_or_default() {
                let (i, j) = parse_pair(&key)?;
                if i >= n || j >= n {
                    return Err(CliError::Input(format!("{label}: commute key {key:?} is out of range")));
                }
                if i == j {
                    if !lit.parse(field)?.is_one() {
                        return Err(skewtaylor_core::Error::InvalidQMatrix {
                            i: i + 1,
                            j: j + 1,
                            reason: "diagonal entries must be 1".into(),
                        }
                        .into());
                    }
                    continue;
                }
                let value = lit.parse(field)?;
                if value.is_zero() {
                    return Err(skewtaylor_core::Error::InvalidQMatrix {
                        i: i + 1,
                        j: j + 1,
                        reason: "entries must be nonzero".into(),
                    }
                    .into());
                }
                let (key, value) = if i < j { ((i, j), value) } else { ((j, i), value.inv()?) };
                if let Some(prev) = given.get(&key) {
                    if *prev != value {
                        return Err(skewtaylor_core::Error::InvalidQMatrix {
                            i: key.0 + 1,
                            j: key.1 + 1,
                            reason: "q_ij * q_ji != 1".into(),
                        }
                        .into());
                    }
                }
                given.insert(key, value);
            }
            let upper: Vec<_> = given.into_iter().collect();
            QMatrix::from_upper(field, n, &upper)?.with_degrees(degrees)?
        }
    };
    let minimal = minimal_generators(&input_gens);
    let mut gens: Vec<Monomial> = Vec::new();
    for g in &input_gens {
        if minimal.contains(g) && !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    if gens.len() != input_gens.len() {
        let shown: Vec<String> = gens.iter().map(|g| format!("{:?}", g.exps())).collect();
        warnings.push(format!(
            "{label}: generators were not minimal; minimalized to [{}]",
            shown.join(", ")
        ));
    }
    Ok(IdealSpec {
        names,
        ring: Arc::new(ring),
        gens,
        input_gens,
    })
}

/// Parses and validates a spec. `default_field` applies when the document
/// names no field.
pub fn parse_spec(text: &str, default_field: Option<Field>) -> Result<ProblemSpec, CliError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| CliError::Input(format!("schema: {}", e.message())))?;
    let field = resolve_field(&raw, default_field)?;
    let mut warnings = Vec::new();
    let primary = build_side(
        field,
        "ideal",
        raw.variables,
        raw.degrees,
        raw.q,
        raw.commute,
        raw.generators,
        &mut warnings,
    )?;
    let compare = raw
        .compare
        .map(|c| {
            build_side(
                field,
                "compare",
                c.variables,
                c.degrees,
                c.q,
                c.commute,
                c.generators,
                &mut warnings,
            )
        })
        .transpose()?;
    let budget = match raw.budget {
        None => Budget::default(),
        Some(b) => Budget {
            i_max: b.i_max,
            d_max: b.d_max,
            perm_cap: b.perm_cap.unwrap_or(Budget::default().perm_cap),
        },
    };
    Ok(ProblemSpec {
        field,
        primary,
        compare,
        budget,
        warnings,
    })
}
