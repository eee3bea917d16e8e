//! Minimal multigraded free resolution of `k` over `S = R/I`, its Poincaré
//! series, and the deviations `eps_i = rank pi^i(S)` read off from
//!
//! ```text
//! P(t) = prod_i (1 + t^{2i-1})^{eps_{2i-1}} / prod_i (1 - t^{2i})^{eps_{2i}}.
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::qcommute::{GDegree, Monomial, QMatrix};
use crate::scalar::Scalar;
use crate::skewpoly::MonomialIdeal;
use crate::subset::Subset;

/// `S = R/I` with its monomial basis.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    ring: Arc<QMatrix>,
    ideal: MonomialIdeal,
}

impl QuotientAlgebra {
    pub fn new(ring: Arc<QMatrix>, ideal: MonomialIdeal) -> Result<Self> {
        if ideal.n() != ring.n() {
            return Err(Error::DimensionMismatch {
                expected: ring.n(),
                found: ideal.n(),
            });
        }
        Ok(QuotientAlgebra { ring, ideal })
    }

    /// The polynomial ring itself (`I = 0`).
    pub fn free(ring: Arc<QMatrix>) -> Self {
        let n = ring.n();
        QuotientAlgebra {
            ring,
            ideal: MonomialIdeal::new(n, Vec::new()).expect("empty ideal"),
        }
    }

    pub fn ring(&self) -> &Arc<QMatrix> {
        &self.ring
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn is_basis(&self, m: &Monomial) -> bool {
        !self.ideal.contains(m)
    }

    /// Monomials of total degree `d` outside `I`, in lexicographic order.
    pub fn basis_in_degree(&self, d: u32) -> Vec<Monomial> {
        monomials_of_degree(self.n(), d)
            .into_iter()
            .filter(|m| self.is_basis(m))
            .collect()
    }

    /// `x^a x^b` in `S`: `Some(C(a, b))` when `x^{a+b}` survives.
    pub fn mul_coeff(&self, a: &Monomial, b: &Monomial) -> Result<Option<Scalar>> {
        if self.ideal.contains(&(a * b)) {
            return Ok(None);
        }
        self.ring.c_constant(a, b).map(Some)
    }

    /// `max_{F ≠ ∅} deg(m_F) / (|F| + 1)` over the minimal generators, or
    /// `None` for `I = 0`. Above 20 generators the largest generator degree
    /// is used instead, which is never smaller.
    pub fn slope(&self) -> Option<(u64, u64)> {
        let gens = self.ideal.mingens();
        if gens.is_empty() {
            return None;
        }
        if gens.len() > 20 {
            let top = gens.iter().map(Monomial::total_degree).max().unwrap_or(0);
            return Some((top, 1));
        }
        let s = gens.len();
        let mut lcms = vec![Monomial::one(self.n())];
        let mut best = (0u64, 1u64);
        for mask in 1usize..(1 << s) {
            let low = mask.trailing_zeros() as usize;
            let m = lcms[mask & (mask - 1)].lcm(&gens[low]);
            let cand = (m.total_degree(), mask.count_ones() as u64 + 1);
            if cand.0 * best.1 > best.0 * cand.1 {
                best = cand;
            }
            lcms.push(m);
        }
        Some(best)
    }

    /// Largest internal degree in which a minimal generator of the `i`-th
    /// module of the resolution of `k` can sit.
    pub fn degree_bound(&self, i: usize) -> u64 {
        let i = i as u64;
        match self.slope() {
            Some((num, den)) if num > den => i * num / den,
            _ => i,
        }
    }

    /// Smallest `d_max` certifying `beta_0..beta_{i_max}`.
    pub fn required_d_max(&self, i_max: usize) -> u64 {
        (0..=i_max).map(|i| self.degree_bound(i)).max().unwrap_or(0)
    }
}

/// All exponent vectors in `n` variables of total degree `d`, lexicographically
/// decreasing.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// A free generator of the resolution with its differential
/// `d(g) = sum_h h c_h x^{alpha_g - alpha_h}`.
#[derive(Debug, Clone)]
pub struct ResGenerator {
    pub multidegree: Monomial,
    pub boundary: SparseVec,
}

/// Limits for [`minimal_resolution_of_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionBudget {
    pub i_max: usize,
    pub d_max: u64,
    /// Cap on the total number of free generators.
    pub max_generators: usize,
}

impl ResolutionBudget {
    pub fn new(i_max: usize, d_max: u64) -> Self {
        ResolutionBudget {
            i_max,
            d_max,
            max_generators: 200_000,
        }
    }
}

/// The truncated resolution itself.
#[derive(Debug, Clone)]
pub struct KResolution {
    pub budget: ResolutionBudget,
    /// `generators[i]` are the free generators of `F_i`.
    pub generators: Vec<Vec<ResGenerator>>,
}

/// Poincaré series coefficients with their exactness flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSeries {
    pub coeffs: Vec<u64>,
    pub exact: Vec<bool>,
    /// Largest `K` with `coeffs[0..=K]` all exact.
    pub exact_through: Option<usize>,
    pub bigraded: BTreeMap<(usize, Monomial), usize>,
}

impl PSeries {
    pub fn exact_coeffs(&self) -> &[u64] {
        match self.exact_through {
            Some(k) => &self.coeffs[..=k],
            None => &[],
        }
    }
}

fn vector_in(
    s: &QuotientAlgebra,
    gens: &[ResGenerator],
    lower: &[ResGenerator],
    g: usize,
    beta: &Monomial,
) -> Result<Option<SparseVec>> {
    let gen = &gens[g];
    if !gen.multidegree.divides(beta) {
        return Ok(None);
    }
    let u = beta.quotient(&gen.multidegree)?;
    if !s.is_basis(&u) {
        return Ok(None);
    }
    let mut out = SparseVec::new();
    for (h, c) in &gen.boundary {
        let v = gen.multidegree.quotient(&lower[*h].multidegree)?;
        if let Some(k) = s.mul_coeff(&v, &u)? {
            out.insert(*h, c * &k);
        }
    }
    Ok(Some(out))
}

/// Multidegrees `beta` with `|beta| <= d_max`, by increasing total degree.
fn multidegrees(n: usize, d_max: u64) -> Vec<Monomial> {
    let top = u32::try_from(d_max).unwrap_or(u32::MAX);
    (0..=top).flat_map(|d| monomials_of_degree(n, d)).collect()
}

/// Builds `F_0, ..., F_{i_max}` in all multidegrees of total degree at most
/// `d_max`, choosing minimal generators greedily multidegree by multidegree.
pub fn resolve_k(s: &QuotientAlgebra, budget: ResolutionBudget) -> Result<KResolution> {
    if budget.d_max < budget.i_max as u64 {
        return Err(Error::BudgetExceeded(format!(
            "d_max = {} must be at least i_max = {}",
            budget.d_max, budget.i_max
        )));
    }
    let field = s.ring().field();
    let n = s.n();
    let betas = multidegrees(n, budget.d_max);
    let mut generators: Vec<Vec<ResGenerator>> = vec![vec![ResGenerator {
        multidegree: Monomial::one(n),
        boundary: SparseVec::new(),
    }]];
    let mut total = 1usize;
    for i in 1..=budget.i_max {
        let prev = &generators[i - 1];
        let empty = Vec::new();
        let prev2 = if i >= 2 { &generators[i - 2] } else { &empty };
        let mut new: Vec<ResGenerator> = Vec::new();
        for beta in &betas {
            if (beta.total_degree() as usize) < i {
                continue;
            }
            // kernel of d_{i-1} on (F_{i-1})_beta, coordinates = generator index
            let mut kernel = Vec::new();
            if i == 1 {
                if !beta.is_one() && s.is_basis(beta) {
                    let mut v = SparseVec::new();
                    v.insert(0, field.one());
                    kernel.push(v);
                }
            } else {
                let mut ech = Echelon::new(field);
                for g in 0..prev.len() {
                    if let Some(img) = vector_in(s, prev, prev2, g, beta)? {
                        let mut label = SparseVec::new();
                        label.insert(g, field.one());
                        if let Some(rel) = ech.insert_tracked(img, label) {
                            kernel.push(rel);
                        }
                    }
                }
            }
            if kernel.is_empty() {
                continue;
            }
            let mut span = Echelon::new(field);
            for g in 0..new.len() {
                if let Some(img) = vector_in(s, &new, prev, g, beta)? {
                    span.insert(img);
                }
            }
            for k in kernel {
                if span.insert(k.clone()) {
                    new.push(ResGenerator {
                        multidegree: beta.clone(),
                        boundary: k,
                    });
                    total += 1;
                    if total > budget.max_generators {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {} free generators",
                            budget.max_generators
                        )));
                    }
                }
            }
        }
        generators.push(new);
    }
    Ok(KResolution { budget, generators })
}

/// Bigraded Betti numbers of `k` over `S` with exactness flags.
pub fn minimal_resolution_of_k(s: &QuotientAlgebra, i_max: usize, d_max: u64) -> Result<PSeries> {
    let res = resolve_k(s, ResolutionBudget::new(i_max, d_max))?;
    Ok(series_of(s, &res))
}

/// [`minimal_resolution_of_k`] with the smallest `d_max` that certifies every
/// coefficient through `i_max`.
pub fn poincare_series(s: &QuotientAlgebra, i_max: usize) -> Result<PSeries> {
    let d_max = s.required_d_max(i_max).max(i_max as u64);
    minimal_resolution_of_k(s, i_max, d_max)
}

fn series_of(s: &QuotientAlgebra, res: &KResolution) -> PSeries {
    let mut bigraded = BTreeMap::new();
    for (i, gens) in res.generators.iter().enumerate() {
        for g in gens {
            *bigraded.entry((i, g.multidegree.clone())).or_insert(0) += 1;
        }
    }
    let coeffs: Vec<u64> = res.generators.iter().map(|g| g.len() as u64).collect();
    let exact: Vec<bool> = (0..coeffs.len())
        .map(|i| s.degree_bound(i) <= res.budget.d_max)
        .collect();
    let exact_through = exact.iter().position(|e| !e).map_or(Some(exact.len() - 1), |p| p.checked_sub(1));
    PSeries {
        coeffs,
        exact,
        exact_through,
        bigraded,
    }
}

/// Deviations `eps_1, ..., eps_K` with `K` the exact range of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationRanks {
    pub ranks: Vec<u64>,
    pub exact_through: usize,
}

fn binomial(n: i128, k: i128) -> Result<i128> {
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc
            .checked_mul(n - j)
            .ok_or(Error::SeriesOverflow)?
            / (j + 1);
    }
    Ok(acc)
}

/// Multiplies `series` (truncated at its length) by `(1 + sign t^j)^e`
/// where `e` may be negative.
fn mul_binomial_power(series: &[i128], j: usize, sign: i128, e: i128) -> Result<Vec<i128>> {
    let len = series.len();
    let mut factor = vec![0i128; len];
    let mut k = 0usize;
    while k * j < len {
        let kk = k as i128;
        // coefficient of t^{jk} in (1 + sign t^j)^e
        let c = if e >= 0 {
            binomial(e, kk)?
        } else {
            let b = binomial(-e + kk - 1, kk)?;
            if kk % 2 == 1 { -b } else { b }
        };
        let c = if sign < 0 && kk % 2 == 1 { -c } else { c };
        factor[k * j] = c;
        k += 1;
        if j == 0 {
            break;
        }
    }
    let mut out = vec![0i128; len];
    for (a, x) in series.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (b, y) in factor.iter().enumerate().take(len - a) {
            if *y == 0 {
                continue;
            }
            let term = x.checked_mul(*y).ok_or(Error::SeriesOverflow)?;
            out[a + b] = out[a + b].checked_add(term).ok_or(Error::SeriesOverflow)?;
        }
    }
    Ok(out)
}

/// Peels the product formula factor by factor.
pub fn deviations(p: &PSeries) -> Result<DeviationRanks> {
    deviations_of(p.exact_coeffs())
}

/// Deviations of a plain coefficient list `beta_0..beta_K` with `beta_0 = 1`.
pub fn deviations_of(coeffs: &[u64]) -> Result<DeviationRanks> {
    if coeffs.first() != Some(&1) {
        return Err(Error::InsufficientExactness { needed: 0, have: 0 });
    }
    let mut residual: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
    let mut ranks = Vec::with_capacity(coeffs.len().saturating_sub(1));
    for j in 1..coeffs.len() {
        let e = residual[j];
        if e < 0 {
            return Err(Error::NegativeDeviation { degree: j });
        }
        ranks.push(u64::try_from(e).map_err(|_| Error::SeriesOverflow)?);
        if e > 0 {
            residual = if j % 2 == 1 {
                mul_binomial_power(&residual, j, 1, -e)?
            } else {
                mul_binomial_power(&residual, j, -1, e)?
            };
        }
    }
    Ok(DeviationRanks {
        exact_through: coeffs.len() - 1,
        ranks,
    })
}

/// Coefficients of the product formula through `t^K`.
pub fn series_from_deviations(ranks: &[u64], k: usize) -> Result<Vec<u64>> {
    let mut series = vec![0i128; k + 1];
    series[0] = 1;
    for (idx, &e) in ranks.iter().enumerate().take(k) {
        let j = idx + 1;
        let e = e as i128;
        series = if j % 2 == 1 {
            mul_binomial_power(&series, j, 1, e)?
        } else {
            mul_binomial_power(&series, j, -1, -e)?
        };
    }
    series
        .into_iter()
        .map(|c| u64::try_from(c).map_err(|_| Error::SeriesOverflow))
        .collect()
}

/// `P(t) / (1 + t)^n` through `t^K`.
pub fn poincare_quotient(p: &PSeries, n: usize, k: usize) -> Result<Vec<i128>> {
    let have = p.exact_through;
    if have.map_or(true, |h| h < k) {
        return Err(Error::InsufficientExactness {
            needed: k,
            have: have.unwrap_or(0),
        });
    }
    let series: Vec<i128> = p.coeffs[..=k].iter().map(|&c| c as i128).collect();
    mul_binomial_power(&series, 1, 1, -(n as i128))
}

/// Whether `P_1/(1+t)^{n_1}` and `P_2/(1+t)^{n_2}` agree through `t^K`.
pub fn compare_poincare_quotient(s1: &QuotientAlgebra, s2: &QuotientAlgebra, k: usize) -> Result<bool> {
    let p1 = poincare_series(s1, k)?;
    let p2 = poincare_series(s2, k)?;
    Ok(poincare_quotient(&p1, s1.n(), k)? == poincare_quotient(&p2, s2.n(), k)?)
}

/// A basis element of the dual of `pi^2(S)` located by multidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi2Class {
    pub multidegree: Monomial,
    /// G-degree of `x^alpha`.
    pub gdeg: GDegree,
    /// Its inverse, the G-degree of the corresponding element of `pi^2`.
    pub dual_gdeg: GDegree,
}

/// Multidegrees of `pi^2`: the second syzygies of `k` minus the exterior
/// square of the first, one `x_i x_j` (`i < j`) each.
pub fn pi2_multidegrees(s: &QuotientAlgebra, d_max: u64) -> Result<Vec<Pi2Class>> {
    let p = minimal_resolution_of_k(s, 2, d_max.max(2))?;
    let mut remaining: BTreeMap<Monomial, usize> = p
        .bigraded
        .iter()
        .filter(|((i, _), _)| *i == 2)
        .map(|((_, m), c)| (m.clone(), *c))
        .collect();
    let n = s.n();
    for pair in Subset::of_size(n, 2) {
        let m = Monomial::new((0..n).map(|k| u32::from(pair.contains(k))).collect());
        if let Some(c) = remaining.get_mut(&m) {
            *c -= 1;
        }
    }
    let mut out = Vec::new();
    for (m, c) in remaining {
        for _ in 0..c {
            let gdeg = s.ring().gdegree(&m)?;
            out.push(Pi2Class {
                multidegree: m.clone(),
                dual_gdeg: gdeg.inverse()?,
                gdeg,
            });
        }
    }
    Ok(out)
}
