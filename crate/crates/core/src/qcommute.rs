//! Exponent vectors, the commutation matrix `q`, and the bicharacters built
//! from it.
//!
//! For monomials `x^a`, `x^b` the constant `C(a, b)` is defined by
//! `x^a x^b = C(a, b) x^{a+b}` in normal form and equals
//! `prod_{i > j} q_ij^{a_i b_j}`. The commutation character is
//! `chi(a, b) = C(a, b) / C(b, a)`, and the G-degree of `x^a` is recorded as
//! the vector `(chi(a, x_j))_j`, i.e. the scalar by which the normalizing
//! automorphism of `x^a` acts on each variable.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Default cap on a single exponent (`2^31 - 1`).
pub const DEFAULT_EXPONENT_CAP: u32 = i32::MAX as u32;

/// An exponent vector `a` standing for `x_1^{a_1} ... x_n^{a_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    /// Validates every entry against `cap`.
    pub fn with_cap(exps: Vec<u32>, cap: u32) -> Result<Self> {
        if exps.iter().any(|&e| e > cap) {
            return Err(Error::ExponentOverflow { cap });
        }
        Ok(Monomial(exps))
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree `sum a_i`.
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    /// Internal degree `sum a_i d_i`.
    pub fn weighted_degree(&self, degrees: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(degrees)
            .map(|(&e, &d)| u64::from(e) * u64::from(d))
            .sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    fn check_dim(&self, other: &Monomial) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// `self | other`, i.e. `self_i <= other_i` for all `i`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.n() == other.n() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / divisor`; the divisor must divide `self`.
    pub fn quotient(&self, divisor: &Monomial) -> Result<Monomial> {
        self.check_dim(divisor)?;
        if !divisor.divides(self) {
            return Err(Error::NotADivisor);
        }
        Ok(Monomial(
            self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// The exponent-vector sum `x^a * x^b`, rejecting exponents above `cap`.
    pub fn checked_product(&self, other: &Monomial, cap: u32) -> Result<Monomial> {
        self.check_dim(other)?;
        let exps = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| match a.checked_add(*b) {
                Some(v) if v <= cap => Ok(v),
                _ => Err(Error::ExponentOverflow { cap }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial(exps))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Componentwise `min(self_i, bound_i)`.
    pub fn clamp_to(&self, bound: &Monomial) -> Monomial {
        self.gcd(bound)
    }

    pub fn to_laurent(&self) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().map(|&e| i64::from(e)).collect())
    }

    /// Renders with variable names `x1, x2, ...`.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            String::from("1")
        } else {
            parts.join("*")
        }
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    /// Exponent-vector sum.
    ///
    /// # Panics
    /// On a dimension mismatch or when an exponent exceeds
    /// [`DEFAULT_EXPONENT_CAP`]; use [`Monomial::checked_product`] to get an
    /// error instead.
    fn mul(self, rhs: &Monomial) -> Monomial {
        self.checked_product(rhs, DEFAULT_EXPONENT_CAP)
            .expect("monomial product")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// Least common multiple of a list; `None` for an empty list.
pub fn lcm(ms: &[Monomial]) -> Option<Monomial> {
    let (first, rest) = ms.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, m| acc.lcm(m)))
}

/// Greatest common divisor of a list; `None` for an empty list.
pub fn gcd(ms: &[Monomial]) -> Option<Monomial> {
    let (first, rest) = ms.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, m| acc.gcd(m)))
}

/// An element of the group of Laurent monomials `x^u`, `u in Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentMonomial(Vec<i64>);

impl LaurentMonomial {
    pub fn new(exps: Vec<i64>) -> Self {
        LaurentMonomial(exps)
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// The canonical split `u = pos - neg` into monomials with disjoint support.
    pub fn split(&self) -> (Monomial, Monomial) {
        let pos = self.0.iter().map(|&e| e.max(0) as u32).collect();
        let neg = self.0.iter().map(|&e| (-e).max(0) as u32).collect();
        (Monomial(pos), Monomial(neg))
    }

    pub fn from_difference(a: &Monomial, b: &Monomial) -> Self {
        LaurentMonomial(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| i64::from(x) - i64::from(y))
                .collect(),
        )
    }
}

/// Commutation data of `k_q[x_1..x_n]`: `x_i x_j = q_ij x_j x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    field: Field,
    n: usize,
    entries: Vec<Scalar>,
    degrees: Vec<u32>,
}

impl QMatrix {
    /// Builds and validates a q-matrix given row-major `entries` and the
    /// internal degrees `d_i` of the variables.
    pub fn new(field: Field, entries: Vec<Vec<Scalar>>, degrees: Vec<u32>) -> Result<Self> {
        let n = entries.len();
        if degrees.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: degrees.len(),
            });
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, q) in row.iter().enumerate() {
                if q.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if q.is_zero() {
                    return Err(invalid(i, j, "entry is zero"));
                }
            }
        }
        for i in 0..n {
            if degrees[i] == 0 {
                return Err(invalid(i, i, "variable degree must be positive"));
            }
            if !entries[i][i].is_one() {
                return Err(invalid(i, i, "diagonal entry must be 1"));
            }
            for j in (i + 1)..n {
                if !(&entries[i][j] * &entries[j][i]).is_one() {
                    return Err(invalid(i, j, "q_ij * q_ji must be 1"));
                }
            }
        }
        Ok(QMatrix {
            field,
            n,
            entries: entries.into_iter().flatten().collect(),
            degrees,
        })
    }

    /// The commutative polynomial ring in `n` variables of degree 1.
    pub fn commutative(field: Field, n: usize) -> Self {
        QMatrix {
            field,
            n,
            entries: vec![field.one(); n * n],
            degrees: vec![1; n],
        }
    }

    /// Builds the matrix from the entries `q_ij`, `i < j`; the rest is forced.
    /// Missing pairs default to 1.
    pub fn from_upper(field: Field, n: usize, upper: &[((usize, usize), Scalar)]) -> Result<Self> {
        let mut rows = vec![vec![field.one(); n]; n];
        for ((i, j), q) in upper {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: i.max(j) + 1,
                });
            }
            if i == j {
                return Err(invalid(i, j, "diagonal entries are fixed to 1"));
            }
            if q.is_zero() {
                return Err(invalid(i, j, "entry is zero"));
            }
            rows[i][j] = q.clone();
            rows[j][i] = q.inv()?;
        }
        QMatrix::new(field, rows, vec![1; n])
    }

    pub fn with_degrees(mut self, degrees: Vec<u32>) -> Result<Self> {
        if degrees.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: degrees.len(),
            });
        }
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(invalid(i, i, "variable degree must be positive"));
        }
        self.degrees = degrees;
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `q_ij` (zero-based).
    pub fn q(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn is_commutative(&self) -> bool {
        self.entries.iter().all(Scalar::is_one)
    }

    fn check(&self, m: &Monomial) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        Ok(())
    }

    /// `C(a, b) = prod_{i > j} q_ij^{a_i b_j}`.
    pub fn c_constant(&self, a: &Monomial, b: &Monomial) -> Result<Scalar> {
        self.check(a)?;
        self.check(b)?;
        let mut acc = self.field.one();
        for i in 0..self.n {
            let ai = a.0[i];
            if ai == 0 {
                continue;
            }
            for j in 0..i {
                let bj = b.0[j];
                if bj == 0 {
                    continue;
                }
                let q = self.q(i, j);
                if q.is_one() {
                    continue;
                }
                let e = i64::from(ai) * i64::from(bj);
                acc *= &q.pow(e)?;
            }
        }
        Ok(acc)
    }

    /// `chi(a, b) = C(a, b) / C(b, a)`.
    pub fn chi(&self, a: &Monomial, b: &Monomial) -> Result<Scalar> {
        self.c_constant(a, b)?
            .checked_div(&self.c_constant(b, a)?)
    }

    /// `C` extended to Laurent monomials through
    /// `C(a - b, c - d) = C(a,c) C(a,d)^-1 C(b,c)^-1 C(b,d)`.
    pub fn c_extended(&self, u: &LaurentMonomial, v: &LaurentMonomial) -> Result<Scalar> {
        for w in [u, v] {
            if w.n() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: w.n(),
                });
            }
        }
        let (alpha, beta) = u.split();
        let (gamma, delta) = v.split();
        let num = &self.c_constant(&alpha, &gamma)? * &self.c_constant(&beta, &delta)?;
        let den = &self.c_constant(&alpha, &delta)? * &self.c_constant(&beta, &gamma)?;
        num.checked_div(&den)
    }

    /// G-degree of `x^a`: the vector `(chi(a, x_j))_j`.
    pub fn gdegree(&self, a: &Monomial) -> Result<GDegree> {
        self.check(a)?;
        (0..self.n)
            .map(|j| self.chi(a, &Monomial::var(self.n, j)))
            .collect::<Result<Vec<_>>>()
            .map(GDegree)
    }

    /// Internal degree `sum a_i d_i`.
    pub fn internal_degree(&self, a: &Monomial) -> u64 {
        a.weighted_degree(&self.degrees)
    }
}

fn invalid(i: usize, j: usize, reason: &str) -> Error {
    Error::InvalidQMatrix {
        i: i + 1,
        j: j + 1,
        reason: String::from(reason),
    }
}

/// A color, represented by its action on the variables: entry `j` is
/// `chi(x^a, x_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GDegree(pub Vec<Scalar>);

impl GDegree {
    pub fn identity(field: Field, n: usize) -> Self {
        GDegree(vec![field.one(); n])
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    /// Group operation (componentwise product).
    pub fn compose(&self, other: &GDegree) -> GDegree {
        GDegree(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn inverse(&self) -> Result<GDegree> {
        self.0
            .iter()
            .map(Scalar::inv)
            .collect::<Result<Vec<_>>>()
            .map(GDegree)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Scalar::is_one)
    }
}

impl fmt::Display for GDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}
