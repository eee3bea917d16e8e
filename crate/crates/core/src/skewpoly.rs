//! Normal-form arithmetic in `R = k_q[x_1..x_n]` and monomial ideals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::qcommute::{Monomial, QMatrix};
use crate::scalar::Scalar;

/// An element of `R` written in the normal form `sum c_a x_1^{a_1}...x_n^{a_n}`.
#[derive(Debug, Clone)]
pub struct SkewPoly {
    ring: Arc<QMatrix>,
    terms: BTreeMap<Monomial, Scalar>,
}

fn same_ring(a: &Arc<QMatrix>, b: &Arc<QMatrix>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Degree-lexicographic comparison, larger degree first.
pub fn deglex(a: &Monomial, b: &Monomial) -> Ordering {
    b.total_degree()
        .cmp(&a.total_degree())
        .then_with(|| b.exps().cmp(a.exps()))
}

impl SkewPoly {
    pub fn zero(ring: Arc<QMatrix>) -> Self {
        SkewPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Arc<QMatrix>) -> Self {
        let n = ring.n();
        let one = ring.field().one();
        SkewPoly::term(ring, one, Monomial::one(n))
    }

    pub fn term(ring: Arc<QMatrix>, coeff: Scalar, mono: Monomial) -> Self {
        let mut p = SkewPoly::zero(ring);
        p.add_term(mono, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(ring: Arc<QMatrix>, terms: I) -> Self {
        let mut p = SkewPoly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<QMatrix> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// The single term of a monomial multiple, if `self` is one.
    pub fn as_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> SkewPoly {
        SkewPoly::from_terms(
            self.ring.clone(),
            self.terms.iter().map(|(m, c)| (m.clone(), c * s)),
        )
    }

    pub fn checked_add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Bilinear extension of `x^a x^b = C(a, b) x^{a+b}`.
    pub fn checked_mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::RingMismatch);
        }
        let mut out = SkewPoly::zero(self.ring.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = self.ring.c_constant(a, b)?;
                out.add_term(a * b, &(ca * cb) * &c);
            }
        }
        Ok(out)
    }

    /// Terms sorted degree-lexicographically, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|x, y| deglex(x.0, y.0));
        t
    }

    pub fn display_with(&self, names: &[String]) -> String {
        use alloc::format;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            if m.is_one() {
                out.push_str(&format!("{c}"));
            } else if c.is_one() {
                out.push_str(&m.display_with(names));
            } else {
                out.push_str(&format!("({c})*{}", m.display_with(names)));
            }
        }
        out
    }
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for SkewPoly {}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl<'a> Add<&'a SkewPoly> for &'a SkewPoly {
    type Output = SkewPoly;
    /// # Panics
    /// If the operands belong to different rings.
    fn add(self, rhs: &'a SkewPoly) -> SkewPoly {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Neg for &SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        SkewPoly::from_terms(
            self.ring.clone(),
            self.terms.iter().map(|(m, c)| (m.clone(), -c)),
        )
    }
}

impl<'a> Sub<&'a SkewPoly> for &'a SkewPoly {
    type Output = SkewPoly;
    fn sub(self, rhs: &'a SkewPoly) -> SkewPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a SkewPoly> for &'a SkewPoly {
    type Output = SkewPoly;
    /// # Panics
    /// If the operands belong to different rings.
    fn mul(self, rhs: &'a SkewPoly) -> SkewPoly {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

/// The unique divisibility-minimal subset of `gens` generating the same
/// monomial ideal, deduplicated and sorted lexicographically.
pub fn minimal_generators(gens: &[Monomial]) -> Vec<Monomial> {
    let mut sorted: Vec<Monomial> = gens.to_vec();
    sorted.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
    sorted.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for m in sorted {
        if !kept.iter().any(|k| k.divides(&m)) {
            kept.push(m);
        }
    }
    kept.sort();
    kept
}

/// A monomial ideal of `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
    mingens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(n: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.n(),
            });
        }
        let mingens = minimal_generators(&gens);
        Ok(MonomialIdeal { n, gens, mingens })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The generators as given.
    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn mingens(&self) -> &[Monomial] {
        &self.mingens
    }

    /// True when the given generators were already minimal (up to order).
    pub fn was_minimal(&self) -> bool {
        self.gens.len() == self.mingens.len()
    }

    /// A monomial lies in `I` iff some minimal generator divides it.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.mingens.iter().any(|g| g.divides(m))
    }

    /// Dimension of `(R/I)_alpha`: 1 if `x^alpha` is not in `I`, else 0.
    pub fn quotient_dim(&self, alpha: &Monomial) -> usize {
        usize::from(!self.contains(alpha))
    }

    /// Componentwise maximum of the generators, i.e. `m_{[s]}`.
    pub fn lcm_of_gens(&self) -> Monomial {
        crate::qcommute::lcm(&self.mingens).unwrap_or_else(|| Monomial::one(self.n))
    }
}
