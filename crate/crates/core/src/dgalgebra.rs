//! The color DG algebra structure on the Taylor complex.
//!
//! For disjoint `V`, `W`
//!
//! ```text
//! e_V e_W = e_{V∪W} (-1)^{sigma(V,W)} C(m_V, m_W) C(m_{V∪W}, g)^{-1} g,
//! g = m_V * m_W / m_{V∪W}
//! ```
//!
//! and `e_V e_W = 0` otherwise. Elements keep their coefficients on the
//! right; a coefficient `f` crosses a basis element by `f e_W = chi(f, m_W)
//! e_W f`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;
use crate::qcommute::Monomial;
use crate::scalar::Scalar;
use crate::skewpoly::SkewPoly;
use crate::subset::Subset;
use crate::taylor::{sigma_pair, TaylorComplex, TaylorElement};

/// One entry of the multiplication table on basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEntry {
    /// `(-1)^{sigma(V,W)}`.
    pub sign: Scalar,
    /// `C(m_V, m_W) C(m_{V∪W}, g)^{-1}`.
    pub coeff: Scalar,
    /// `g = m_V * m_W / m_{V∪W}`.
    pub carrier: Monomial,
    pub target: Subset,
}

impl ProductEntry {
    pub fn to_poly(&self, t: &TaylorComplex) -> SkewPoly {
        SkewPoly::term(t.ring().clone(), &self.sign * &self.coeff, self.carrier.clone())
    }
}

pub type ProductTable = BTreeMap<(Subset, Subset), ProductEntry>;

/// Table entry for `e_V e_W`, or `None` when `V ∩ W ≠ ∅`.
pub fn product_entry(t: &TaylorComplex, v: Subset, w: Subset) -> Result<Option<ProductEntry>> {
    check_subset(t, v)?;
    check_subset(t, w)?;
    if !v.is_disjoint(w) {
        return Ok(None);
    }
    let ring = t.ring();
    let (mv, mw) = (t.lcm(v), t.lcm(w));
    let target = v.union(w);
    let mu = t.lcm(target);
    let carrier = (mv * mw).quotient(mu)?;
    let coeff = &ring.c_constant(mv, mw)? * &ring.c_constant(mu, &carrier)?.inv()?;
    Ok(Some(ProductEntry {
        sign: Scalar::sign(t.field(), sigma_pair(v, w)),
        coeff,
        carrier,
        target,
    }))
}

/// The full table on disjoint pairs.
pub fn product_table(t: &TaylorComplex, budget: &VerifyBudget) -> Result<ProductTable> {
    budget.check_pairs(t)?;
    let mut table = ProductTable::new();
    let full = 1u64 << t.s();
    for v in 0..full {
        for w in 0..full {
            if let Some(e) = product_entry(t, Subset(v), Subset(w))? {
                table.insert((Subset(v), Subset(w)), e);
            }
        }
    }
    Ok(table)
}

/// `e_V e_W` as an element.
pub fn basis_product(t: &TaylorComplex, v: Subset, w: Subset) -> Result<TaylorElement> {
    Ok(match product_entry(t, v, w)? {
        Some(e) => TaylorElement::from_term(e.target, e.to_poly(t)),
        None => TaylorElement::zero(),
    })
}

fn check_subset(t: &TaylorComplex, f: Subset) -> Result<()> {
    if f.bits() & !Subset::full(t.s()).bits() != 0 {
        return Err(Error::ComplexMismatch);
    }
    Ok(())
}

fn check_element(t: &TaylorComplex, a: &TaylorElement) -> Result<()> {
    for (f, c) in &a.coords {
        check_subset(t, *f)?;
        if **c.ring() != **t.ring() {
            return Err(Error::ComplexMismatch);
        }
    }
    Ok(())
}

/// `f` moved to the right of a basis element of multidegree `m`:
/// `f e = e (chi(f, m) f)` termwise.
fn move_across(t: &TaylorComplex, f: &SkewPoly, m: &Monomial) -> Result<SkewPoly> {
    let mut out = SkewPoly::zero(t.ring().clone());
    for (mono, c) in f.terms() {
        out.add_term(mono.clone(), c * &t.ring().chi(mono, m)?);
    }
    Ok(out)
}

/// Bilinear product of two elements.
pub fn element_product(t: &TaylorComplex, a: &TaylorElement, b: &TaylorElement) -> Result<TaylorElement> {
    check_element(t, a)?;
    check_element(t, b)?;
    let mut out = TaylorElement::zero();
    for (v, f) in &a.coords {
        for (w, g) in &b.coords {
            let Some(entry) = product_entry(t, *v, *w)? else {
                continue;
            };
            let moved = move_across(t, f, t.lcm(*w))?;
            out.add_term(entry.target, &(&entry.to_poly(t) * &moved) * g);
        }
    }
    Ok(out)
}

/// Left multiplication by a ring element.
pub fn left_mul(t: &TaylorComplex, r: &SkewPoly, a: &TaylorElement) -> Result<TaylorElement> {
    check_element(t, a)?;
    let mut out = TaylorElement::zero();
    for (w, g) in &a.coords {
        out.add_term(*w, &move_across(t, r, t.lcm(*w))? * g);
    }
    Ok(out)
}

/// The differential, checked against the complex.
pub fn differential(t: &TaylorComplex, a: &TaylorElement) -> Result<TaylorElement> {
    check_element(t, a)?;
    Ok(t.apply_diff(a))
}

/// Limits for the exhaustive verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyBudget {
    /// Largest `s` for which all pairs of basis elements are checked.
    pub max_pair_s: usize,
    /// Largest `s` for which all triples are checked; above it triples are
    /// sampled.
    pub max_exhaustive_triple_s: usize,
    pub triple_samples: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            max_pair_s: 10,
            max_exhaustive_triple_s: 6,
            triple_samples: 20_000,
            seed: 0,
        }
    }
}

impl VerifyBudget {
    fn check_pairs(&self, t: &TaylorComplex) -> Result<()> {
        if t.s() > self.max_pair_s {
            return Err(Error::BudgetExceeded(alloc::format!(
                "pair checks need s <= {}, got {}",
                self.max_pair_s,
                t.s()
            )));
        }
        Ok(())
    }

    fn triples(&self, t: &TaylorComplex) -> Result<Vec<(Subset, Subset, Subset)>> {
        self.check_pairs(t)?;
        let full = 1u64 << t.s();
        if t.s() <= self.max_exhaustive_triple_s {
            let mut out = Vec::with_capacity((full * full * full) as usize);
            for u in 0..full {
                for v in 0..full {
                    for w in 0..full {
                        out.push((Subset(u), Subset(v), Subset(w)));
                    }
                }
            }
            return Ok(out);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..self.triple_samples)
            .map(|_| {
                (
                    Subset(rng.gen_range(0..full)),
                    Subset(rng.gen_range(0..full)),
                    Subset(rng.gen_range(0..full)),
                )
            })
            .collect())
    }
}

fn all_subsets(t: &TaylorComplex) -> Vec<Subset> {
    (0..1u64 << t.s()).map(Subset).collect()
}

fn basis(t: &TaylorComplex, f: Subset) -> TaylorElement {
    TaylorElement::basis(t.ring(), f)
}

/// `d(ab) = d(a) b + (-1)^{|a|} a d(b)` on all pairs of basis elements.
pub fn verify_leibniz(t: &TaylorComplex) -> Result<bool> {
    verify_leibniz_with(t, &VerifyBudget::default())
}

pub fn verify_leibniz_with(t: &TaylorComplex, budget: &VerifyBudget) -> Result<bool> {
    budget.check_pairs(t)?;
    let subsets = all_subsets(t);
    let sign = |k: usize| Scalar::sign(t.field(), k);
    Ok(par::all(&subsets, |&v| {
        let a = basis(t, v);
        let da = t.apply_diff(&a);
        subsets.iter().all(|&w| {
            let b = basis(t, w);
            let check = || -> Result<bool> {
                let lhs = t.apply_diff(&basis_product(t, v, w)?);
                let rhs = element_product(t, &da, &b)?
                    .add(&element_product(t, &a, &t.apply_diff(&b))?.scale_scalar(&sign(v.len())));
                Ok(lhs == rhs)
            };
            check().unwrap_or(false)
        })
    }))
}

/// `(ab)c = a(bc)` on basis triples.
pub fn verify_associativity(t: &TaylorComplex) -> Result<bool> {
    verify_associativity_with(t, &VerifyBudget::default())
}

pub fn verify_associativity_with(t: &TaylorComplex, budget: &VerifyBudget) -> Result<bool> {
    let triples = budget.triples(t)?;
    Ok(par::all(&triples, |&(u, v, w)| {
        let check = || -> Result<bool> {
            let left = element_product(t, &basis_product(t, u, v)?, &basis(t, w))?;
            let right = element_product(t, &basis(t, u), &basis_product(t, v, w)?)?;
            Ok(left == right)
        };
        check().unwrap_or(false)
    }))
}

/// `e_V e_W = (-1)^{|V||W|} chi(m_V, m_W) e_W e_V`, `e_V^2 = 0` for odd
/// `|V|`, the unit law, and `g = gcd(m_V, m_W)` for the carrier.
pub fn verify_color_comm(t: &TaylorComplex) -> Result<bool> {
    verify_color_comm_with(t, &VerifyBudget::default())
}

pub fn verify_color_comm_with(t: &TaylorComplex, budget: &VerifyBudget) -> Result<bool> {
    budget.check_pairs(t)?;
    let subsets = all_subsets(t);
    Ok(par::all(&subsets, |&v| {
        let check = || -> Result<bool> {
            let ev = basis(t, v);
            if basis_product(t, Subset::EMPTY, v)? != ev || basis_product(t, v, Subset::EMPTY)? != ev {
                return Ok(false);
            }
            if v.len() % 2 == 1 && !basis_product(t, v, v)?.is_zero() {
                return Ok(false);
            }
            for &w in &subsets {
                let vw = basis_product(t, v, w)?;
                let chi = t.ring().chi(t.lcm(v), t.lcm(w))?;
                let swapped = basis_product(t, w, v)?
                    .scale_scalar(&(&Scalar::sign(t.field(), v.len() * w.len()) * &chi));
                if vw != swapped {
                    return Ok(false);
                }
                if let Some(e) = product_entry(t, v, w)? {
                    if e.carrier != t.lcm(v).gcd(t.lcm(w)) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        };
        check().unwrap_or(false)
    }))
}

/// Common data of a homogeneous element of even positive degree.
struct Homogeneous {
    summands: Vec<TaylorElement>,
}

fn homogeneous(t: &TaylorComplex, a: &TaylorElement) -> Result<Homogeneous> {
    check_element(t, a)?;
    let mut degree = None;
    let mut multidegree: Option<Monomial> = None;
    let mut summands = Vec::new();
    for (f, c) in &a.coords {
        match degree {
            None => degree = Some(f.len()),
            Some(d) if d != f.len() => {
                return Err(Error::Inhomogeneous("summands of different homological degree"))
            }
            _ => {}
        }
        for (mono, _) in c.terms() {
            let md = t.lcm(*f) * mono;
            match &multidegree {
                None => multidegree = Some(md),
                Some(m) if *m != md => {
                    return Err(Error::Inhomogeneous("summands of different multidegree"))
                }
                _ => {}
            }
        }
        summands.push(TaylorElement::from_term(*f, c.clone()));
    }
    let degree = degree.unwrap_or(0);
    if degree == 0 || degree % 2 == 1 {
        return Err(Error::NotEvenPositive { degree });
    }
    Ok(Homogeneous { summands })
}

fn unit(t: &TaylorComplex) -> TaylorElement {
    basis(t, Subset::EMPTY)
}

/// `a^{(r)}` as the literal sum over ordered `r`-tuples of summands
/// `(a_{P_1} e_{P_1}) ... (a_{P_r} e_{P_r})`, which equals `a^r`.
pub fn divided_power(t: &TaylorComplex, a: &TaylorElement, r: usize) -> Result<TaylorElement> {
    let h = homogeneous(t, a)?;
    let mut acc = unit(t);
    for _ in 0..r {
        let mut next = TaylorElement::zero();
        for s in &h.summands {
            next = next.add(&element_product(t, &acc, s)?);
        }
        acc = next;
    }
    Ok(acc)
}

/// `a^{(r)}` as the sum over strictly increasing `r`-tuples of summands,
/// the normalization satisfying `r! a^{(r)} = a^r`.
pub fn divided_power_distinct(t: &TaylorComplex, a: &TaylorElement, r: usize) -> Result<TaylorElement> {
    let h = homogeneous(t, a)?;
    // elementary symmetric functions of the (mutually commuting) summands
    let mut e: Vec<TaylorElement> = alloc::vec![TaylorElement::zero(); r + 1];
    e[0] = unit(t);
    for s in &h.summands {
        for k in (1..=r).rev() {
            let term = element_product(t, &e[k - 1], s)?;
            e[k] = e[k].add(&term);
        }
    }
    Ok(e.swap_remove(r))
}

/// `d_P = prod_{l=1}^{m-1} gcd(m_{i_1..i_l}, m_{i_{l+1}})` for the sorted
/// members of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPConstant {
    pub p: Subset,
    pub dp: Monomial,
}

pub fn d_p(t: &TaylorComplex, p: Subset) -> Result<DPConstant> {
    check_subset(t, p)?;
    let mut dp = Monomial::one(t.n());
    let mut prefix = Subset::EMPTY;
    for i in p.iter() {
        if !prefix.is_empty() {
            dp = &dp * &t.lcm(prefix).gcd(&t.gens()[i]);
        }
        prefix = prefix.insert(i);
    }
    Ok(DPConstant { p, dp })
}

fn binom2(r: usize) -> i64 {
    (r * r.saturating_sub(1) / 2) as i64
}

fn mono_poly(t: &TaylorComplex, c: Scalar, m: Monomial) -> SkewPoly {
    SkewPoly::term(t.ring().clone(), c, m)
}

/// Largest `r` used by [`verify_gamma_axioms`].
pub const GAMMA_MAX_R: usize = 4;

/// Checks the divided power identities:
///
/// * `(a e_P)^{(r)} = chi(e_P, a)^{binom(r,2)} a^r e_P^{(r)}` for monomial
///   scalars `a`;
/// * `(x + y)^{(r)} = sum_{i+j=r} x^{(i)} y^{(j)}`, with `r! a^{(r)}` equal
///   to the literal ordered expansion;
/// * `e_P^{(r)} = 0` for `r >= 2`;
/// * `d_P^r e_P^{(r)} = chi(d_P, e_P)^{binom(r,2)} (d_P e_P)^{(r)}` where
///   `prod_{i in P} e_i = ± c e_P d_P` with `c ≠ 0`.
pub fn verify_gamma_axioms(t: &TaylorComplex) -> Result<bool> {
    verify_gamma_axioms_with(t, &VerifyBudget::default())
}

pub fn verify_gamma_axioms_with(t: &TaylorComplex, budget: &VerifyBudget) -> Result<bool> {
    budget.check_pairs(t)?;
    let field = t.field();
    let even: Vec<Subset> = all_subsets(t)
        .into_iter()
        .filter(|p| !p.is_empty() && p.len() % 2 == 0)
        .collect();
    let mut scalars: Vec<Monomial> = alloc::vec![Monomial::one(t.n())];
    scalars.extend((0..t.n()).map(|i| Monomial::var(t.n(), i)));
    let two = field.from_i64(2);

    let scalar_law = |p: Subset| -> Result<bool> {
        let ep = basis(t, p);
        let mut candidates = scalars.clone();
        candidates.push(t.lcm(p).clone());
        for m in &candidates {
            let coeff = if two.is_zero() { field.one() } else { two.clone() };
            let a = mono_poly(t, coeff.clone(), m.clone());
            let chi = t.ring().chi(t.lcm(p), m)?;
            let aep = left_mul(t, &a, &ep)?;
            for r in 0..=GAMMA_MAX_R {
                let lhs = divided_power_distinct(t, &aep, r)?;
                let ar = mono_poly(t, coeff.pow(r as i64)?, pow_mono(m, r));
                let rhs = left_mul(t, &ar, &divided_power_distinct(t, &ep, r)?)?
                    .scale_scalar(&chi.pow(binom2(r))?);
                if lhs != rhs {
                    return Ok(false);
                }
                if r >= 2 && !divided_power(t, &ep, r)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };

    let dp_law = |p: Subset| -> Result<bool> {
        let DPConstant { dp, .. } = d_p(t, p)?;
        let mut prod = unit(t);
        for i in p.iter() {
            prod = element_product(t, &prod, &basis(t, Subset::singleton(i)))?;
        }
        // prod = e_P * (c d_P)
        match prod.coords.get(&p).and_then(|c| c.as_term()) {
            Some((m, c)) if prod.coords.len() == 1 && *m == dp && !c.is_zero() => {}
            _ => return Ok(false),
        }
        let ep = basis(t, p);
        let dpoly = mono_poly(t, field.one(), dp.clone());
        let dep = left_mul(t, &dpoly, &ep)?;
        let chi = t.ring().chi(&dp, t.lcm(p))?;
        for r in 0..=GAMMA_MAX_R {
            let lhs = left_mul(t, &mono_poly(t, field.one(), pow_mono(&dp, r)), &divided_power_distinct(t, &ep, r)?)?;
            let rhs = divided_power_distinct(t, &dep, r)?.scale_scalar(&chi.pow(binom2(r))?);
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    };

    if !par::all(&even, |&p| scalar_law(p).unwrap_or(false) && dp_law(p).unwrap_or(false)) {
        return Ok(false);
    }

    // additivity on sums brought to a common multidegree
    for size in (2..=t.s()).step_by(2) {
        let ps: Vec<Subset> = t.basis(size).to_vec();
        let top = ps.iter().fold(Monomial::one(t.n()), |acc, p| acc.lcm(t.lcm(*p)));
        let summands: Vec<TaylorElement> = ps
            .iter()
            .map(|p| {
                let f = top.quotient(t.lcm(*p))?;
                Ok(TaylorElement::from_term(*p, mono_poly(t, field.one(), f)))
            })
            .collect::<Result<_>>()?;
        for split in 1..summands.len() {
            let x = summands[..split]
                .iter()
                .fold(TaylorElement::zero(), |acc, s| acc.add(s));
            let y = summands[split..]
                .iter()
                .fold(TaylorElement::zero(), |acc, s| acc.add(s));
            let sum = x.add(&y);
            for r in 0..=GAMMA_MAX_R {
                let lhs = divided_power_distinct(t, &sum, r)?;
                let mut rhs = TaylorElement::zero();
                for i in 0..=r {
                    let term = element_product(
                        t,
                        &divided_power_distinct(t, &x, i)?,
                        &divided_power_distinct(t, &y, r - i)?,
                    )?;
                    rhs = rhs.add(&term);
                }
                if lhs != rhs {
                    return Ok(false);
                }
                let factorial = (1..=r as i64).fold(field.one(), |acc, k| &acc * &field.from_i64(k));
                if divided_power(t, &sum, r)? != lhs.scale_scalar(&factorial) {
                    return Ok(false);
                }
            }
            if split > 1 {
                break;
            }
        }
    }
    Ok(true)
}

fn pow_mono(m: &Monomial, r: usize) -> Monomial {
    Monomial::new(m.exps().iter().map(|e| e * r as u32).collect())
}
