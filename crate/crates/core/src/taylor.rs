//! The skew Taylor resolution of `R/I`.
//!
//! The basis of `T_i` is `{e_F : F ⊆ [s], |F| = i}` with `e_F` placed in the
//! multidegree and G-degree of `m_F = lcm{m_j : j in F}`, and
//!
//! ```text
//! d(e_F) = sum_{j in F} e_{F\j} (-1)^{sigma(F,j)} C(m_{F\j}, m_F/m_{F\j})^{-1} m_F/m_{F\j}
//! ```
//!
//! with `sigma(F, j)` the number of members of `F` below `j`. Coefficients
//! act on the right throughout.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::qcommute::{GDegree, Monomial, QMatrix};
use crate::scalar::{Field, Scalar};
use crate::skewpoly::{MonomialIdeal, SkewPoly};
use crate::subset::{Subset, MAX_SUBSET_SIZE};

/// Default guard on the number of generators (the complex has `2^s` basis
/// elements).
pub const DEFAULT_MAX_GENERATORS: usize = 20;

/// `sigma(F, i) = |{j in F : j < i}|`.
pub fn sigma_f_i(f: Subset, i: usize) -> Result<usize> {
    if !f.contains(i) {
        return Err(Error::NotInSubset { index: i });
    }
    Ok(f.count_below(i))
}

/// `sigma(V, W) = |{(i, j) in V x W : j < i}|`.
pub fn sigma_pair(v: Subset, w: Subset) -> usize {
    v.iter().map(|i| w.count_below(i)).sum()
}

/// A scalar multiple of a single monomial, the shape of every entry of the
/// Taylor differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: Scalar,
    pub mono: Monomial,
}

impl Term {
    pub fn to_poly(&self, ring: &Arc<QMatrix>) -> SkewPoly {
        SkewPoly::term(ring.clone(), self.coeff.clone(), self.mono.clone())
    }
}

/// One nonzero entry `(F\j, F)` of a differential matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    /// Position of the target in the basis of degree `|F| - 1`.
    pub row: usize,
    pub target: Subset,
    pub term: Term,
}

/// The data attached to a basis element `e_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorBasis {
    pub subset: Subset,
    pub multidegree: Monomial,
    pub internal_degree: u64,
    pub gdeg: GDegree,
}

/// An element of `T`, stored as `sum_F e_F f_F` with right coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaylorElement {
    pub coords: BTreeMap<Subset, SkewPoly>,
}

impl TaylorElement {
    pub fn zero() -> Self {
        TaylorElement::default()
    }

    pub fn basis(ring: &Arc<QMatrix>, f: Subset) -> Self {
        TaylorElement::from_term(f, SkewPoly::one(ring.clone()))
    }

    pub fn from_term(f: Subset, coeff: SkewPoly) -> Self {
        let mut e = TaylorElement::zero();
        e.add_term(f, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, f: Subset, coeff: SkewPoly) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.coords.remove(&f) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.coords.insert(f, sum);
        }
    }

    pub fn add(&self, other: &TaylorElement) -> TaylorElement {
        let mut out = self.clone();
        for (f, c) in &other.coords {
            out.add_term(*f, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TaylorElement) -> TaylorElement {
        self.add(&other.scale_scalar(&neg_one(other)))
    }

    pub fn scale_scalar(&self, s: &Scalar) -> TaylorElement {
        let mut out = TaylorElement::zero();
        for (f, c) in &self.coords {
            out.add_term(*f, c.scale(s));
        }
        out
    }

    /// Right multiplication by a ring element.
    pub fn mul_right(&self, r: &SkewPoly) -> TaylorElement {
        let mut out = TaylorElement::zero();
        for (f, c) in &self.coords {
            out.add_term(*f, c * r);
        }
        out
    }

    /// Homological degrees present.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().map(|f| f.len())
    }
}

fn neg_one(e: &TaylorElement) -> Scalar {
    match e.coords.values().next() {
        Some(p) => p.ring().field().from_i64(-1),
        // sign of an empty element is irrelevant
        None => Field::Rational.from_i64(-1),
    }
}

/// The skew Taylor complex of an ordered list of minimal generators.
#[derive(Debug, Clone)]
pub struct TaylorComplex {
    ring: Arc<QMatrix>,
    gens: Vec<Monomial>,
    ideal: MonomialIdeal,
    lcms: Vec<Monomial>,
    bases: Vec<Vec<Subset>>,
    position: Vec<usize>,
    diff: Vec<Vec<Vec<DiffEntry>>>,
}

#[derive(Debug, Clone, Copy)]
pub struct TaylorOptions {
    pub max_generators: usize,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions {
            max_generators: DEFAULT_MAX_GENERATORS,
        }
    }
}

/// Builds the Taylor complex on `gens`, which must be a minimal generating
/// set (in the order given).
pub fn build_taylor(gens: &[Monomial], ring: Arc<QMatrix>) -> Result<TaylorComplex> {
    build_taylor_with(gens, ring, TaylorOptions::default())
}

pub fn build_taylor_with(
    gens: &[Monomial],
    ring: Arc<QMatrix>,
    options: TaylorOptions,
) -> Result<TaylorComplex> {
    let s = gens.len();
    let n = ring.n();
    if s == 0 {
        return Err(Error::EmptyGenerators);
    }
    let cap = options.max_generators.min(MAX_SUBSET_SIZE);
    if s > cap {
        return Err(Error::TooManyGenerators { s, cap });
    }
    if let Some(bad) = gens.iter().find(|g| g.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.n(),
        });
    }
    for (index, g) in gens.iter().enumerate() {
        if let Some(divisor) = gens
            .iter()
            .enumerate()
            .position(|(k, h)| k != index && h.divides(g))
        {
            return Err(Error::NonMinimalGenerators {
                index: index + 1,
                divisor: divisor + 1,
            });
        }
    }

    let total = 1usize << s;
    let mut lcms = Vec::with_capacity(total);
    lcms.push(Monomial::one(n));
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        lcms.push(lcms[rest].lcm(&gens[low]));
    }

    let bases: Vec<Vec<Subset>> = (0..=s).map(|k| Subset::of_size(s, k)).collect();
    let mut position = vec![0usize; total];
    for basis in &bases {
        for (k, f) in basis.iter().enumerate() {
            position[f.bits() as usize] = k;
        }
    }

    let field = ring.field();
    let mut diff: Vec<Vec<Vec<DiffEntry>>> = vec![Vec::new()];
    for basis in bases.iter().skip(1) {
        let mut columns = Vec::with_capacity(basis.len());
        for &f in basis {
            let m_f = &lcms[f.bits() as usize];
            let mut entries = Vec::with_capacity(f.len());
            for j in f.iter() {
                let g = f.remove(j);
                let m_g = &lcms[g.bits() as usize];
                let u = m_f.quotient(m_g)?;
                let c = ring.c_constant(m_g, &u)?.inv()?;
                let sign = Scalar::sign(field, f.count_below(j));
                entries.push(DiffEntry {
                    row: position[g.bits() as usize],
                    target: g,
                    term: Term {
                        coeff: &sign * &c,
                        mono: u,
                    },
                });
            }
            columns.push(entries);
        }
        diff.push(columns);
    }

    let ideal = MonomialIdeal::new(n, gens.to_vec())?;
    Ok(TaylorComplex {
        ring,
        gens: gens.to_vec(),
        ideal,
        lcms,
        bases,
        position,
        diff,
    })
}

impl TaylorComplex {
    pub fn ring(&self) -> &Arc<QMatrix> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    /// Number of generators `s`.
    pub fn s(&self) -> usize {
        self.gens.len()
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    /// `m_F`; `m_∅ = 1`.
    pub fn lcm(&self, f: Subset) -> &Monomial {
        &self.lcms[f.bits() as usize]
    }

    /// Basis of `T_i`.
    pub fn basis(&self, i: usize) -> &[Subset] {
        self.bases.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Index of `e_F` inside the basis of `T_{|F|}`.
    pub fn position(&self, f: Subset) -> usize {
        self.position[f.bits() as usize]
    }

    /// Entries of `d(e_F)`.
    pub fn diff_of(&self, f: Subset) -> &[DiffEntry] {
        if f.is_empty() {
            return &[];
        }
        &self.diff[f.len()][self.position(f)]
    }

    /// The matrix of `d_i : T_i -> T_{i-1}` as `|basis(i-1)| x |basis(i)|`
    /// entries (row, column) -> ring element.
    pub fn diff_matrix(&self, i: usize) -> BTreeMap<(usize, usize), SkewPoly> {
        let mut out = BTreeMap::new();
        if i == 0 || i > self.s() {
            return out;
        }
        for (col, entries) in self.diff[i].iter().enumerate() {
            for e in entries {
                out.insert((e.row, col), e.term.to_poly(&self.ring));
            }
        }
        out
    }

    pub fn basis_data(&self, f: Subset) -> Result<TaylorBasis> {
        let m = self.lcm(f).clone();
        Ok(TaylorBasis {
            subset: f,
            internal_degree: self.ring.internal_degree(&m),
            gdeg: self.ring.gdegree(&m)?,
            multidegree: m,
        })
    }

    /// Applies the differential to an element.
    pub fn apply_diff(&self, a: &TaylorElement) -> TaylorElement {
        let mut out = TaylorElement::zero();
        for (f, coeff) in &a.coords {
            for e in self.diff_of(*f) {
                let lead = e.term.to_poly(&self.ring);
                out.add_term(e.target, &lead * coeff);
            }
        }
        out
    }

    /// `d ∘ d = 0`, checked entry by entry with exact normal-form products.
    pub fn verify_d_squared(&self) -> bool {
        for i in 2..=self.s() {
            for &f in self.basis(i) {
                let mut acc: BTreeMap<Subset, SkewPoly> = BTreeMap::new();
                for outer in self.diff_of(f) {
                    let outer_poly = outer.term.to_poly(&self.ring);
                    for inner in self.diff_of(outer.target) {
                        let prod = &inner.term.to_poly(&self.ring) * &outer_poly;
                        let slot = acc
                            .entry(inner.target)
                            .or_insert_with(|| SkewPoly::zero(self.ring.clone()));
                        *slot = &*slot + &prod;
                    }
                }
                if acc.values().any(|p| !p.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction of `T` to the multidegree `alpha`.
    ///
    /// In homological degree `i` the basis is `{e_F x^{alpha - m_F} : |F| = i,
    /// m_F | x^alpha}`; matrix entries are the coefficients produced by
    /// applying the differential and renormalizing with exact products, so
    /// the entry at `(F\j, F)` is `(-1)^{sigma(F,j)} C(m_{F\j}, u)^{-1}
    /// C(u, alpha - m_F)` with `u = m_F / m_{F\j}`.
    pub fn strand(&self, alpha: &Monomial) -> Result<StrandComplex> {
        if alpha.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: alpha.n(),
            });
        }
        let mut bases = Vec::with_capacity(self.s() + 1);
        for i in 0..=self.s() {
            let b: Vec<Subset> = self
                .basis(i)
                .iter()
                .copied()
                .filter(|f| self.lcm(*f).divides(alpha))
                .collect();
            bases.push(b);
        }
        let mut maps: Vec<Vec<SparseVec>> = vec![Vec::new()];
        for i in 1..bases.len() {
            let index: BTreeMap<Subset, usize> = bases[i - 1]
                .iter()
                .enumerate()
                .map(|(k, f)| (*f, k))
                .collect();
            let mut images = Vec::with_capacity(bases[i].len());
            for &f in &bases[i] {
                let beta = alpha.quotient(self.lcm(f))?;
                let mut img = SparseVec::new();
                for e in self.diff_of(f) {
                    let c = &e.term.coeff * &self.ring.c_constant(&e.term.mono, &beta)?;
                    img.insert(index[&e.target], c);
                }
                images.push(img);
            }
            maps.push(images);
        }
        Ok(StrandComplex {
            alpha: alpha.clone(),
            field: self.field(),
            bases,
            maps,
        })
    }

    /// The box `prod_i [0, deg_i(m_[s])]` over which exactness is checked.
    pub fn exactness_box(&self) -> Monomial {
        self.lcm(Subset::full(self.s())).clone()
    }

    /// First multidegree in the exactness box where the strand fails to
    /// resolve `R/I`, if any.
    pub fn first_resolution_failure(&self) -> Option<Monomial> {
        let corner = self.exactness_box();
        let alphas = box_points(&corner);
        let check = |alpha: &Monomial| -> bool {
            match self.strand(alpha) {
                Ok(strand) => {
                    let h = strand.homology_dims();
                    h.iter().skip(1).all(|&d| d == 0)
                        && h[0] == self.ideal.quotient_dim(alpha)
                }
                Err(_) => false,
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            alphas.par_iter().find_first(|a| !check(a)).cloned()
        }
        #[cfg(not(feature = "parallel"))]
        {
            alphas.into_iter().find(|a| !check(a))
        }
    }

    /// Exactness of every strand in the box, with `H_0` equal to `(R/I)_alpha`.
    pub fn verify_resolution(&self) -> bool {
        self.first_resolution_failure().is_none()
    }

    /// Multigraded Betti numbers of `R/I`, from `T ⊗_R k`.
    ///
    /// After tensoring with `k` an entry survives only when
    /// `m_F = m_{F\j}`, and then it is the scalar `(-1)^{sigma(F,j)}`.
    pub fn betti(&self) -> BettiTable {
        let field = self.field();
        let mut groups: BTreeMap<&Monomial, Vec<Subset>> = BTreeMap::new();
        for mask in 0..self.lcms.len() {
            groups
                .entry(&self.lcms[mask])
                .or_default()
                .push(Subset(mask as u64));
        }
        let mut entries = BTreeMap::new();
        for (alpha, subsets) in groups {
            let mut by_size: Vec<Vec<Subset>> = vec![Vec::new(); self.s() + 1];
            for f in subsets {
                by_size[f.len()].push(f);
            }
            let mut ranks = vec![0usize; self.s() + 2];
            for i in 1..=self.s() {
                if by_size[i].is_empty() || by_size[i - 1].is_empty() {
                    continue;
                }
                let index: BTreeMap<Subset, usize> = by_size[i - 1]
                    .iter()
                    .enumerate()
                    .map(|(k, f)| (*f, k))
                    .collect();
                let columns = by_size[i].iter().map(|f| {
                    self.diff_of(*f)
                        .iter()
                        .filter(|e| e.term.mono.is_one())
                        .map(|e| (index[&e.target], e.term.coeff.clone()))
                        .collect::<SparseVec>()
                });
                ranks[i] = linalg::rank(field, columns);
            }
            for i in 0..=self.s() {
                let b = by_size[i].len() - ranks[i] - ranks[i + 1];
                if b > 0 {
                    entries.insert((i, alpha.clone()), b);
                }
            }
        }
        BettiTable { entries }
    }

    /// Human-readable listing of the differentials.
    pub fn describe(&self, names: &[String]) -> String {
        let mut out = String::new();
        for i in 1..=self.s() {
            for &f in self.basis(i) {
                out.push_str(&format!("d(e{f}) ="));
                let mut first = true;
                for e in self.diff_of(f) {
                    let coeff = e.term.to_poly(&self.ring).display_with(names);
                    out.push_str(if first { " " } else { " + " });
                    out.push_str(&format!("e{}*[{}]", e.target, coeff));
                    first = false;
                }
                out.push('\n');
            }
        }
        out
    }
}

/// All exponent vectors componentwise below `corner`.
pub fn box_points(corner: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(corner.n())];
    for (i, &bound) in corner.exps().iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
        for m in &out {
            for e in 0..=bound {
                let mut exps = m.exps().to_vec();
                exps[i] = e;
                next.push(Monomial::new(exps));
            }
        }
        out = next;
    }
    out
}

/// A finite complex of vector spaces: one multidegree of `T`.
#[derive(Debug, Clone)]
pub struct StrandComplex {
    pub alpha: Monomial,
    pub field: Field,
    /// Basis subsets in each homological degree.
    pub bases: Vec<Vec<Subset>>,
    /// `maps[i][k]` is the image of `bases[i][k]` in the coordinates of
    /// `bases[i-1]`.
    pub maps: Vec<Vec<SparseVec>>,
}

impl StrandComplex {
    pub fn rank_of(&self, i: usize) -> usize {
        if i == 0 || i >= self.maps.len() {
            return 0;
        }
        linalg::rank(self.field, self.maps[i].iter().cloned())
    }

    /// `dim H_i` for every homological degree.
    pub fn homology_dims(&self) -> Vec<usize> {
        let top = self.bases.len();
        let ranks: Vec<usize> = (0..=top).map(|i| self.rank_of(i)).collect();
        (0..top)
            .map(|i| self.bases[i].len() - ranks[i] - ranks[i + 1])
            .collect()
    }

    pub fn squares_to_zero(&self) -> bool {
        for i in 2..self.maps.len() {
            for img in &self.maps[i] {
                let mut total = SparseVec::new();
                for (k, c) in img {
                    linalg::axpy(&mut total, c, &self.maps[i - 1][*k]);
                }
                if !total.is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Multigraded Betti numbers `beta_{i, alpha}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, Monomial), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, alpha: &Monomial) -> usize {
        self.entries.get(&(i, alpha.clone())).copied().unwrap_or(0)
    }

    /// Total Betti numbers `beta_0, beta_1, ...` up to the last nonzero one.
    pub fn totals(&self) -> Vec<usize> {
        let top = self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for ((i, _), b) in &self.entries {
            out[*i] += b;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn quantum_plane(q: i64) -> Arc<QMatrix> {
        let f = Field::Rational;
        Arc::new(QMatrix::from_upper(f, 2, &[((0, 1), f.from_i64(q))]).unwrap())
    }

    #[test]
    fn sigma_counts() {
        let f12 = Subset::from_indices([0, 1]);
        assert_eq!(sigma_f_i(f12, 0).unwrap(), 0);
        assert_eq!(sigma_f_i(f12, 1).unwrap(), 1);
        assert_eq!(sigma_f_i(Subset::from_indices([1, 4, 6]), 6).unwrap(), 2);
        assert_eq!(
            sigma_f_i(f12, 3),
            Err(Error::NotInSubset { index: 3 })
        );
        assert_eq!(sigma_pair(Subset::singleton(1), Subset::singleton(0)), 1);
        assert_eq!(sigma_pair(Subset::singleton(0), Subset::singleton(1)), 0);
    }

    #[test]
    fn two_generator_differential() {
        let ring = quantum_plane(3);
        let f = ring.field();
        let t = build_taylor(&[m(&[2, 0]), m(&[1, 1])], ring.clone()).unwrap();
        let d = t.diff_of(Subset::full(2));
        assert_eq!(d.len(), 2);
        // e_2 * (q x)
        assert_eq!(d[0].target, Subset::singleton(1));
        assert_eq!(d[0].term, Term { coeff: f.from_i64(3), mono: m(&[1, 0]) });
        // - e_1 * y
        assert_eq!(d[1].target, Subset::singleton(0));
        assert_eq!(d[1].term, Term { coeff: f.from_i64(-1), mono: m(&[0, 1]) });
        assert!(t.verify_d_squared());
        assert!(t.verify_resolution());
    }

    #[test]
    fn rejects_bad_generator_lists() {
        let ring = quantum_plane(2);
        assert_eq!(build_taylor(&[], ring.clone()).unwrap_err(), Error::EmptyGenerators);
        assert_eq!(
            build_taylor(&[m(&[2, 0]), m(&[2, 1])], ring.clone()).unwrap_err(),
            Error::NonMinimalGenerators { index: 2, divisor: 1 }
        );
        assert!(matches!(
            build_taylor(&[m(&[1, 1]), m(&[1, 1])], ring.clone()),
            Err(Error::NonMinimalGenerators { .. })
        ));
        let many: Vec<Monomial> = (0..5).map(|k| m(&[k, 4 - k])).collect();
        assert_eq!(
            build_taylor_with(&many, ring, TaylorOptions { max_generators: 4 }).unwrap_err(),
            Error::TooManyGenerators { s: 5, cap: 4 }
        );
    }

    #[test]
    fn single_generator() {
        let ring = quantum_plane(5);
        let t = build_taylor(&[m(&[1, 2])], ring).unwrap();
        assert_eq!(t.diff_of(Subset::singleton(0))[0].term.mono, m(&[1, 2]));
        assert!(t.verify_resolution());
        assert_eq!(t.betti().totals(), vec![1, 1]);
    }

    #[test]
    fn strands() {
        let ring = quantum_plane(3);
        let t = build_taylor(&[m(&[2, 0]), m(&[1, 1])], ring).unwrap();
        let s0 = t.strand(&m(&[0, 0])).unwrap();
        assert_eq!(s0.bases[0], vec![Subset::EMPTY]);
        assert!(s0.bases[1].is_empty());
        let s = t.strand(&m(&[2, 1])).unwrap();
        assert_eq!(s.bases[1].len(), 2);
        assert_eq!(s.bases[2], vec![Subset::full(2)]);
        assert!(s.squares_to_zero());
        let outside = t.strand(&m(&[0, 5])).unwrap();
        assert!(outside.bases.iter().skip(1).all(Vec::is_empty));
    }

    #[test]
    fn betti_tables() {
        let ring = quantum_plane(7);
        let t = build_taylor(&[m(&[2, 0]), m(&[1, 1])], ring).unwrap();
        let b = t.betti();
        assert_eq!(b.totals(), vec![1, 2, 1]);
        assert_eq!(b.get(2, &m(&[2, 1])), 1);

        let comm = Arc::new(QMatrix::commutative(Field::Rational, 3));
        let t = build_taylor(&[m(&[1, 1, 0]), m(&[0, 1, 1]), m(&[1, 0, 1])], comm).unwrap();
        assert_eq!(t.betti().totals(), vec![1, 3, 2]);
        assert!(t.verify_resolution());
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(box_points(&m(&[2, 1])).len(), 6);
        assert_eq!(box_points(&m(&[0, 0, 0])).len(), 1);
    }
}
