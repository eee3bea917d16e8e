#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewtaylor_core::skewpoly::minimal_generators;
use skewtaylor_core::{Field, Monomial, QMatrix};

pub fn m(e: &[u32]) -> Monomial {
    Monomial::new(e.to_vec())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f101() -> Field {
    Field::prime(101).unwrap()
}

/// Random q-matrix over `field` with entries drawn from `1..p` (or small
/// integers and their inverses over the rationals).
pub fn random_q(rng: &mut impl Rng, field: Field, n: usize) -> QMatrix {
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let q = match field {
                Field::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
                Field::Rational => {
                    let v = field.from_i64(rng.gen_range(1..4) * if rng.gen_bool(0.5) { 1 } else { -1 });
                    if rng.gen_bool(0.5) { v } else { v.inv().unwrap() }
                }
            };
            upper.push(((i, j), q));
        }
    }
    QMatrix::from_upper(field, n, &upper).unwrap()
}

pub fn random_monomial(rng: &mut impl Rng, n: usize, max_exp: u32, min_degree: u64) -> Monomial {
    loop {
        let g = Monomial::new((0..n).map(|_| rng.gen_range(0..=max_exp)).collect());
        if g.total_degree() >= min_degree.max(1) {
            return g;
        }
    }
}

/// Minimal generators of a random ideal, in the order first produced.
pub fn random_gens(rng: &mut impl Rng, n: usize, s: usize, max_exp: u32, min_degree: u64) -> Vec<Monomial> {
    let raw: Vec<Monomial> = (0..s).map(|_| random_monomial(rng, n, max_exp, min_degree)).collect();
    let minimal = minimal_generators(&raw);
    let mut out = Vec::new();
    for g in raw {
        if minimal.contains(&g) && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Exactly `s` minimal generators when some draw achieves it within a few
/// hundred tries, otherwise the largest antichain seen.
pub fn random_antichain(rng: &mut impl Rng, n: usize, s: usize, max_exp: u32, min_degree: u64) -> Vec<Monomial> {
    let mut best = Vec::new();
    for _ in 0..400 {
        let gens = random_gens(rng, n, s, max_exp, min_degree);
        if gens.len() == s {
            return gens;
        }
        if gens.len() > best.len() {
            best = gens;
        }
    }
    best
}

pub struct Instance {
    pub ring: Arc<QMatrix>,
    pub gens: Vec<Monomial>,
}

/// The randomized suite: `n <= 5`, `s <= 5`, exponents `<= 3`, q over F_101.
pub fn random_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(2..=5);
            let s = r.gen_range(1..=5);
            let ring = Arc::new(random_q(&mut r, f101(), n));
            let gens = random_antichain(&mut r, n, s, 3, 1);
            Instance { ring, gens }
        })
        .collect()
}

/// `x^a x^b` by sorting the word of variables with adjacent swaps.
pub fn swap_product_coeff(q: &QMatrix, a: &Monomial, b: &Monomial) -> skewtaylor_core::Scalar {
    let mut word: Vec<usize> = Vec::new();
    for src in [a, b] {
        for (i, &e) in src.exps().iter().enumerate() {
            word.extend(std::iter::repeat_n(i, e as usize));
        }
    }
    let mut coeff = q.field().one();
    let len = word.len();
    for pass in 0..len {
        for k in 0..len.saturating_sub(1 + pass) {
            if word[k] > word[k + 1] {
                // x_j x_i = q_ji x_i x_j
                coeff = &coeff * q.q(word[k], word[k + 1]);
                word.swap(k, k + 1);
            }
        }
    }
    coeff
}

/// Rank over F_p with `p = 1_000_003`, for matrices with small integer
/// entries given as rows.
pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    const P: i64 = 1_000_003;
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(P)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        let inv = pow_mod(a[rank][c], P - 2, P);
        for v in a[rank].iter_mut() {
            *v = *v * inv % P;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// The classical Taylor resolution of a commutative monomial ideal, coded
/// from scratch: subsets are sorted index vectors.
pub struct ClassicalTaylor {
    pub gens: Vec<Vec<u32>>,
}

impl ClassicalTaylor {
    pub fn lcm(&self, f: &[usize]) -> Vec<u32> {
        let n = self.gens[0].len();
        let mut out = vec![0; n];
        for &i in f {
            for k in 0..n {
                out[k] = out[k].max(self.gens[i][k]);
            }
        }
        out
    }

    pub fn subsets(&self, size: usize) -> Vec<Vec<usize>> {
        let s = self.gens.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << s) {
            if mask.count_ones() as usize == size {
                out.push((0..s).filter(|i| mask >> i & 1 == 1).collect());
            }
        }
        out
    }

    /// `d(e_F) = sum_k (-1)^k (m_F / m_{F - i_k}) e_{F - i_k}`.
    pub fn diff(&self, f: &[usize]) -> Vec<(Vec<usize>, i64, Vec<u32>)> {
        let mf = self.lcm(f);
        (0..f.len())
            .map(|k| {
                let mut g = f.to_vec();
                g.remove(k);
                let mg = self.lcm(&g);
                let u = mf.iter().zip(&mg).map(|(a, b)| a - b).collect();
                (g, if k % 2 == 0 { 1 } else { -1 }, u)
            })
            .collect()
    }

    /// `e_V e_W = sign(V, W) (m_V m_W / m_{V ∪ W}) e_{V ∪ W}`.
    pub fn product(&self, v: &[usize], w: &[usize]) -> Option<(Vec<usize>, i64, Vec<u32>)> {
        if v.iter().any(|i| w.contains(i)) {
            return None;
        }
        let mut inversions = 0;
        for i in v {
            for j in w {
                if j < i {
                    inversions += 1;
                }
            }
        }
        let mut u: Vec<usize> = v.iter().chain(w).copied().collect();
        u.sort();
        let (mv, mw, mu) = (self.lcm(v), self.lcm(w), self.lcm(&u));
        let g = (0..mv.len()).map(|k| mv[k] + mw[k] - mu[k]).collect();
        Some((u, if inversions % 2 == 0 { 1 } else { -1 }, g))
    }

    /// Total Betti numbers from the reduced complex, one lcm at a time.
    pub fn betti(&self) -> BTreeMap<(usize, Vec<u32>), usize> {
        let s = self.gens.len();
        let mut groups: BTreeMap<Vec<u32>, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
        for size in 0..=s {
            for f in self.subsets(size) {
                let entry = groups.entry(self.lcm(&f)).or_insert_with(|| vec![Vec::new(); s + 1]);
                entry[size].push(f);
            }
        }
        let mut out = BTreeMap::new();
        for (alpha, by_size) in groups {
            let mut ranks = vec![0; s + 2];
            for i in 1..=s {
                let rows: Vec<Vec<i64>> = by_size[i]
                    .iter()
                    .map(|f| {
                        by_size[i - 1]
                            .iter()
                            .map(|g| {
                                self.diff(f)
                                    .into_iter()
                                    .find(|(h, _, u)| h == g && u.iter().all(|e| *e == 0))
                                    .map_or(0, |(_, c, _)| c)
                            })
                            .collect()
                    })
                    .collect();
                ranks[i] = if rows.is_empty() { 0 } else { rank_mod_p(&rows) };
            }
            for i in 0..=s {
                let b = by_size[i].len() - ranks[i] - ranks[i + 1];
                if b > 0 {
                    out.insert((i, alpha.clone()), b);
                }
            }
        }
        out
    }
}

/// `dim Tor_i^S(k, k)` in each multidegree of total degree `<= max_degree`,
/// from the normalized bar complex `B_i = (S_+)^{⊗i}`.
pub fn bar_complex_tor(
    ring: &QMatrix,
    ideal: &skewtaylor_core::MonomialIdeal,
    max_degree: u32,
) -> BTreeMap<(usize, Monomial), usize> {
    use skewtaylor_core::linalg::{rank, SparseVec};
    let n = ring.n();
    let field = ring.field();
    let mut positive: Vec<Monomial> = Vec::new();
    for d in 1..=max_degree {
        for mono in skewtaylor_core::homres::monomials_of_degree(n, d) {
            if !ideal.contains(&mono) {
                positive.push(mono);
            }
        }
    }
    // words by (length, multidegree)
    let mut words: BTreeMap<(usize, Monomial), Vec<Vec<usize>>> = BTreeMap::new();
    words.insert((0, Monomial::one(n)), vec![Vec::new()]);
    let mut frontier = vec![(Vec::<usize>::new(), Monomial::one(n))];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, deg) in frontier {
            for (k, p) in positive.iter().enumerate() {
                let d = &deg * p;
                if d.total_degree() > max_degree as u64 {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(k);
                words.entry((w2.len(), d.clone())).or_default().push(w2.clone());
                next.push((w2, d));
            }
        }
        frontier = next;
    }
    let index: BTreeMap<&Monomial, usize> = positive.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let boundary = |w: &[usize]| -> Vec<(Vec<usize>, skewtaylor_core::Scalar)> {
        let mut out = Vec::new();
        for j in 0..w.len().saturating_sub(1) {
            let (a, b) = (&positive[w[j]], &positive[w[j + 1]]);
            let ab = a * b;
            if ideal.contains(&ab) {
                continue;
            }
            let c = ring.c_constant(a, b).unwrap();
            let sign = if j % 2 == 0 { field.one() } else { -field.one() };
            let mut w2 = w[..j].to_vec();
            w2.push(index[&ab]);
            w2.extend_from_slice(&w[j + 2..]);
            out.push((w2, &sign * &c));
        }
        out
    };
    let rank_of = |i: usize, deg: &Monomial| -> usize {
        let (Some(src), Some(dst)) = (words.get(&(i, deg.clone())), words.get(&(i - 1, deg.clone()))) else {
            return 0;
        };
        let pos: BTreeMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let vectors = src.iter().map(|w| {
            let mut v = SparseVec::new();
            for (t, c) in boundary(w) {
                let k = pos[&t];
                let e = v.entry(k).or_insert_with(|| field.zero());
                *e += &c;
                if e.is_zero() {
                    v.remove(&k);
                }
            }
            v
        });
        rank(field, vectors)
    };
    let mut out = BTreeMap::new();
    for ((i, deg), ws) in &words {
        let r_in = if *i == 0 { 0 } else { rank_of(*i, deg) };
        let r_out = rank_of(i + 1, deg);
        let dim = ws.len() - r_in - r_out;
        if dim > 0 {
            out.insert((*i, deg.clone()), dim);
        }
    }
    out
}
