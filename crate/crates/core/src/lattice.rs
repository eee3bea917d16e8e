//! The LCM lattice `L_I`, the GCD graph on it, and a brute-force search for
//! color-preserving isomorphisms between two of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::error::{Error, Result};
use crate::homres::{poincare_quotient, poincare_series, QuotientAlgebra};
use crate::qcommute::{GDegree, Monomial, QMatrix};
use crate::scalar::Scalar;
use crate::skewpoly::{deglex, MonomialIdeal};
use crate::subset::Subset;
use crate::taylor::{TaylorComplex, DEFAULT_MAX_GENERATORS};

/// Default cap on `s` for the permutation search.
pub const DEFAULT_MAX_ATOMS: usize = 9;

#[derive(Debug, Clone)]
pub struct LcmLattice {
    ring: Arc<QMatrix>,
    gens: Vec<Monomial>,
    /// Distinct lcms by increasing degree, `1` first.
    pub nodes: Vec<Monomial>,
    /// Node of `m_i` for each generator.
    pub atoms: Vec<usize>,
    pub node_gdeg: Vec<GDegree>,
    pub node_idegree: Vec<u64>,
    /// Node of `m_F`, indexed by the mask of `F`.
    subset_node: Vec<usize>,
}

pub fn build_lcm_lattice(gens: &[Monomial], ring: Arc<QMatrix>) -> Result<LcmLattice> {
    let s = gens.len();
    if s == 0 {
        return Err(Error::EmptyGenerators);
    }
    if s > DEFAULT_MAX_GENERATORS {
        return Err(Error::TooManyGenerators {
            s,
            cap: DEFAULT_MAX_GENERATORS,
        });
    }
    let n = ring.n();
    if let Some(bad) = gens.iter().find(|g| g.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.n(),
        });
    }
    let ideal = MonomialIdeal::new(n, gens.to_vec())?;
    if !ideal.was_minimal() || ideal.mingens().len() != s {
        let (index, divisor) = first_redundant(gens);
        return Err(Error::NonMinimalGenerators { index, divisor });
    }
    let mut lcms = vec![Monomial::one(n)];
    for mask in 1usize..(1 << s) {
        let low = mask.trailing_zeros() as usize;
        let m = lcms[mask & (mask - 1)].lcm(&gens[low]);
        lcms.push(m);
    }
    let mut nodes = lcms.clone();
    nodes.sort_by(|a, b| deglex(b, a));
    nodes.dedup();
    let index: BTreeMap<&Monomial, usize> = nodes.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let subset_node: Vec<usize> = lcms.iter().map(|m| index[m]).collect();
    let atoms = (0..s).map(|i| subset_node[1 << i]).collect();
    let node_gdeg = nodes
        .iter()
        .map(|m| ring.gdegree(m))
        .collect::<Result<Vec<_>>>()?;
    let node_idegree = nodes.iter().map(|m| ring.internal_degree(m)).collect();
    Ok(LcmLattice {
        ring,
        gens: gens.to_vec(),
        nodes,
        atoms,
        node_gdeg,
        node_idegree,
        subset_node,
    })
}

fn first_redundant(gens: &[Monomial]) -> (usize, usize) {
    for (i, g) in gens.iter().enumerate() {
        for (j, h) in gens.iter().enumerate() {
            if i != j && h.divides(g) {
                return (i + 1, j + 1);
            }
        }
    }
    (0, 0)
}

impl LcmLattice {
    pub fn from_taylor(t: &TaylorComplex) -> Result<Self> {
        build_lcm_lattice(t.gens(), t.ring().clone())
    }

    pub fn ring(&self) -> &Arc<QMatrix> {
        &self.ring
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn s(&self) -> usize {
        self.gens.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of(&self, f: Subset) -> usize {
        self.subset_node[f.bits() as usize]
    }

    /// `a <= b` in the lattice.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.nodes[a].divides(&self.nodes[b])
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let m = self.nodes[a].lcm(&self.nodes[b]);
        self.nodes.iter().position(|x| *x == m)
    }

    /// Nodes covering nothing but the bottom.
    pub fn minimal_nonunit_nodes(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&b| (1..self.len()).all(|a| a == b || !self.leq(a, b)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdEdge {
    pub from: usize,
    pub to: usize,
    pub weight: Scalar,
}

/// Directed edges `m_P -> m_Q` weighted by `C(m_P, m_Q)` between distinct
/// coprime nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdGraph {
    pub edges: Vec<GcdEdge>,
}

pub fn build_gcd_graph(l: &LcmLattice) -> Result<GcdGraph> {
    let mut edges = Vec::new();
    for a in 0..l.len() {
        for b in 0..l.len() {
            if a != b && l.nodes[a].is_coprime(&l.nodes[b]) {
                edges.push(GcdEdge {
                    from: a,
                    to: b,
                    weight: l.ring.c_constant(&l.nodes[a], &l.nodes[b])?,
                });
            }
        }
    }
    Ok(GcdGraph { edges })
}

impl GcdGraph {
    pub fn weight(&self, from: usize, to: usize) -> Option<&Scalar> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| &e.weight)
    }

    /// `v <index> <monomial>` lines followed by `e <from> <to> <weight>`
    /// lines.
    pub fn to_edge_list(&self, l: &LcmLattice, names: &[String]) -> String {
        let mut out = String::new();
        for (k, m) in l.nodes.iter().enumerate() {
            let _ = writeln!(out, "v {} {}", k, m.display_with(names));
        }
        for e in &self.edges {
            let _ = writeln!(out, "e {} {} {}", e.from, e.to, e.weight.canonical());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIso {
    /// `atom_map[i] = j` sends `m_i` to `m'_j`.
    pub atom_map: Vec<usize>,
    pub node_map: Vec<usize>,
    pub preserves_internal_degree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoOptions {
    pub max_atoms: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

struct Search<'a> {
    l1: &'a LcmLattice,
    l2: &'a LcmLattice,
    g1: &'a GcdGraph,
    g2: &'a GcdGraph,
    internal: bool,
}

impl Search<'_> {
    fn atom_compatible(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.l1.atoms[i], self.l2.atoms[j]);
        self.l1.node_gdeg[a] == self.l2.node_gdeg[b]
            && (!self.internal || self.l1.node_idegree[a] == self.l2.node_idegree[b])
    }

    /// Extends the partial node map with every subset whose top member is
    /// the newly assigned atom `k`.
    fn extend(&self, perm: &[usize], k: usize, node_map: &mut [Option<usize>], inverse: &mut [Option<usize>]) -> bool {
        for low in 0..(1usize << k) {
            let f = Subset(low as u64).insert(k);
            let a = self.l1.node_of(f);
            let b = self.l2.node_of(f.map(|i| perm[i]));
            match (node_map[a], inverse[b]) {
                (None, None) => {
                    if self.l1.node_gdeg[a] != self.l2.node_gdeg[b]
                        || (self.internal && self.l1.node_idegree[a] != self.l2.node_idegree[b])
                    {
                        return false;
                    }
                    node_map[a] = Some(b);
                    inverse[b] = Some(a);
                }
                (Some(x), Some(y)) if x == b && y == a => {}
                _ => return false,
            }
        }
        true
    }

    fn finish(&self, node_map: &[Option<usize>]) -> Option<Vec<usize>> {
        let map: Vec<usize> = node_map.iter().copied().collect::<Option<_>>()?;
        let n = map.len();
        for a in 0..n {
            for b in 0..n {
                if self.l1.leq(a, b) != self.l2.leq(map[a], map[b]) {
                    return None;
                }
            }
        }
        if self.g1.edges.len() != self.g2.edges.len() {
            return None;
        }
        for e in &self.g1.edges {
            if self.g2.weight(map[e.from], map[e.to]) != Some(&e.weight) {
                return None;
            }
        }
        Some(map)
    }

    fn run(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let s = self.l1.s();
        let mut perm = vec![usize::MAX; s];
        let mut used = vec![false; s];
        let mut node_map = vec![None; self.l1.len()];
        node_map[0] = Some(0);
        let mut inverse = vec![None; self.l2.len()];
        inverse[0] = Some(0);
        self.step(0, &mut perm, &mut used, &node_map, &inverse)
    }

    fn step(
        &self,
        k: usize,
        perm: &mut [usize],
        used: &mut [bool],
        node_map: &[Option<usize>],
        inverse: &[Option<usize>],
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let s = perm.len();
        if k == s {
            return self.finish(node_map).map(|m| (perm.to_vec(), m));
        }
        for j in 0..s {
            if used[j] || !self.atom_compatible(k, j) {
                continue;
            }
            perm[k] = j;
            let mut nm = node_map.to_vec();
            let mut inv = inverse.to_vec();
            if self.extend(perm, k, &mut nm, &mut inv) {
                used[j] = true;
                if let Some(found) = self.step(k + 1, perm, used, &nm, &inv) {
                    return Some(found);
                }
                used[j] = false;
            }
        }
        perm[k] = usize::MAX;
        None
    }
}

/// An atom bijection whose induced node map is an order isomorphism,
/// preserves G-degrees, and carries the GCD graph onto the other with equal
/// weights. Bijections that also preserve internal degrees are preferred.
pub fn find_color_iso(
    l1: &LcmLattice,
    g1: &GcdGraph,
    l2: &LcmLattice,
    g2: &GcdGraph,
    options: IsoOptions,
) -> Result<Option<LatticeIso>> {
    if l1.ring.field() != l2.ring.field() {
        return Err(Error::FieldMismatch);
    }
    let s = l1.s();
    if s > options.max_atoms || l2.s() > options.max_atoms {
        return Err(Error::BudgetExceeded(format!(
            "isomorphism search allows at most {} atoms, got {}",
            options.max_atoms,
            s.max(l2.s())
        )));
    }
    if s != l2.s() || l1.len() != l2.len() || l1.ring.n() != l2.ring.n() {
        return Ok(None);
    }
    for internal in [true, false] {
        let search = Search { l1, l2, g1, g2, internal };
        if let Some((atom_map, node_map)) = search.run() {
            let preserves_internal_degree = internal
                || (0..l1.len()).all(|a| l1.node_idegree[a] == l2.node_idegree[node_map[a]]);
            return Ok(Some(LatticeIso {
                atom_map,
                node_map,
                preserves_internal_degree,
            }));
        }
    }
    Ok(None)
}

/// `m_{λ̂(F)} = λ(m_F)` for every subset.
pub fn check_iso_on_subsets(iso: &LatticeIso, l1: &LcmLattice, l2: &LcmLattice) -> bool {
    (0..1u64 << l1.s()).all(|mask| {
        let f = Subset(mask);
        iso.node_map[l1.node_of(f)] == l2.node_of(f.map(|i| iso.atom_map[i]))
    })
}

/// Truncation degree used by [`predict_equalities`].
pub const PREDICTION_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionReport {
    pub applicable: bool,
    pub internal_degree_preserved: bool,
    pub betti: (Vec<usize>, Vec<usize>),
    pub betti_equal: bool,
    pub quotients: (Vec<i128>, Vec<i128>),
    pub poincare_equal: bool,
}

impl PredictionReport {
    pub fn passed(&self) -> bool {
        self.applicable && self.betti_equal && self.poincare_equal
    }
}

/// Compares the invariants an isomorphism predicts to agree: the total Betti
/// numbers of `R/I` and the quotients `P(t) / (1+t)^n` through `t^K`.
pub fn predict_equalities(
    iso: Option<&LatticeIso>,
    t1: &TaylorComplex,
    t2: &TaylorComplex,
    k: usize,
) -> Result<PredictionReport> {
    let b1 = t1.betti().totals();
    let b2 = t2.betti().totals();
    let quotient = |t: &TaylorComplex| -> Result<Vec<i128>> {
        let s = QuotientAlgebra::new(t.ring().clone(), t.ideal().clone())?;
        poincare_quotient(&poincare_series(&s, k)?, t.n(), k)
    };
    let (q1, q2) = if iso.is_some() {
        (quotient(t1)?, quotient(t2)?)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(PredictionReport {
        applicable: iso.is_some(),
        internal_degree_preserved: iso.is_some_and(|i| i.preserves_internal_degree),
        betti_equal: b1 == b2,
        poincare_equal: iso.is_some() && q1 == q2,
        betti: (b1, b2),
        quotients: (q1, q2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::taylor::build_taylor;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn plane(q: i64) -> Arc<QMatrix> {
        let f = Field::Rational;
        Arc::new(QMatrix::from_upper(f, 2, &[((0, 1), f.from_i64(q))]).unwrap())
    }

    fn lattice(gens: &[&[u32]], ring: Arc<QMatrix>) -> (LcmLattice, GcdGraph) {
        let gens: Vec<Monomial> = gens.iter().map(|g| m(g)).collect();
        let l = build_lcm_lattice(&gens, ring).unwrap();
        let g = build_gcd_graph(&l).unwrap();
        (l, g)
    }

    #[test]
    fn node_sets() {
        let (l, _) = lattice(&[&[2, 0], &[0, 2]], plane(1));
        assert_eq!(l.nodes, vec![m(&[0, 0]), m(&[0, 2]), m(&[2, 0]), m(&[2, 2])]);
        let comm = Arc::new(QMatrix::commutative(Field::Rational, 3));
        let (l, _) = lattice(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]], comm);
        assert_eq!(l.len(), 5);
        let mut atoms = l.atoms.clone();
        atoms.sort();
        assert_eq!(l.minimal_nonunit_nodes(), atoms);
        assert_eq!(l.join(l.atoms[0], l.atoms[1]), Some(4));
    }

    #[test]
    fn gcd_graph_weights() {
        let ring = plane(2);
        let (l, g) = lattice(&[&[2, 0], &[0, 2]], ring.clone());
        let (x2, y2) = (2, 1);
        assert!(g.weight(x2, y2).unwrap().is_one());
        assert_eq!(*g.weight(y2, x2).unwrap(), ring.field().parse_scalar("1/16").unwrap());
        for e in &g.edges {
            let back = g.weight(e.to, e.from).unwrap();
            let chi = ring.chi(&l.nodes[e.from], &l.nodes[e.to]).unwrap();
            assert_eq!(e.weight.checked_div(back).unwrap(), chi);
        }
        assert!(g.edges.iter().all(|e| e.from != e.to));
        let text = g.to_edge_list(&l, &[]);
        assert!(text.contains("e 1 2 1/16"));
    }

    #[test]
    fn iso_search() {
        let (l1, g1) = lattice(&[&[2, 0], &[0, 2]], plane(1));
        let (l2, g2) = lattice(&[&[3, 0], &[0, 3]], plane(1));
        let iso = find_color_iso(&l1, &g1, &l2, &g2, IsoOptions::default()).unwrap().unwrap();
        assert_eq!(iso.atom_map, vec![0, 1]);
        assert!(!iso.preserves_internal_degree);
        assert!(check_iso_on_subsets(&iso, &l1, &l2));

        let (l3, g3) = lattice(&[&[2, 0], &[1, 1]], plane(1));
        assert!(find_color_iso(&l3, &g3, &l1, &g1, IsoOptions::default()).unwrap().is_none());
        let own = find_color_iso(&l3, &g3, &l3, &g3, IsoOptions::default()).unwrap().unwrap();
        assert_eq!(own.atom_map, vec![0, 1]);
        assert!(own.preserves_internal_degree);
    }

    #[test]
    fn predictions() {
        let ring = plane(1);
        let t1 = build_taylor(&[m(&[2, 0]), m(&[0, 2])], ring.clone()).unwrap();
        let t2 = build_taylor(&[m(&[3, 0]), m(&[0, 3])], ring.clone()).unwrap();
        let (l1, l2) = (LcmLattice::from_taylor(&t1).unwrap(), LcmLattice::from_taylor(&t2).unwrap());
        let (g1, g2) = (build_gcd_graph(&l1).unwrap(), build_gcd_graph(&l2).unwrap());
        let iso = find_color_iso(&l1, &g1, &l2, &g2, IsoOptions::default()).unwrap();
        let report = predict_equalities(iso.as_ref(), &t1, &t2, PREDICTION_DEGREE).unwrap();
        assert!(report.passed());
        assert_eq!(report.betti.0, vec![1, 2, 1]);

        let t3 = build_taylor(&[m(&[2, 0]), m(&[1, 1])], ring).unwrap();
        let report = predict_equalities(None, &t3, &t1, PREDICTION_DEGREE).unwrap();
        assert!(!report.applicable);
        assert!(!report.passed());
    }

    #[test]
    fn budget_and_minimality() {
        let ring = Arc::new(QMatrix::commutative(Field::Rational, 10));
        let gens: Vec<Monomial> = (0..10).map(|i| Monomial::var(10, i)).collect();
        let l = build_lcm_lattice(&gens, ring).unwrap();
        let g = build_gcd_graph(&l).unwrap();
        assert!(matches!(
            find_color_iso(&l, &g, &l, &g, IsoOptions::default()),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            build_lcm_lattice(&[m(&[1, 0]), m(&[2, 0])], plane(1)),
            Err(Error::NonMinimalGenerators { index: 2, divisor: 1 })
        ));
    }
}
