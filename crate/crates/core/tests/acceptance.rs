//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{f101, m, random_antichain, random_gens, random_instances, random_q, rng, ClassicalTaylor, Instance};
use rand::seq::SliceRandom;
use rand::Rng;
use skewtaylor_core::dgalgebra::{
    basis_product, divided_power, verify_associativity, verify_color_comm, verify_gamma_axioms, verify_leibniz,
};
use skewtaylor_core::homres::{
    deviations, minimal_resolution_of_k, pi2_multidegrees, poincare_series, series_from_deviations, QuotientAlgebra,
};
use skewtaylor_core::lattice::{
    build_gcd_graph, build_lcm_lattice, check_iso_on_subsets, find_color_iso, predict_equalities, IsoOptions,
    LcmLattice, PREDICTION_DEGREE,
};
use skewtaylor_core::taylor::{build_taylor, TaylorComplex, TaylorElement};
use skewtaylor_core::{Field, Monomial, MonomialIdeal, QMatrix, Subset};

type Outcome = Result<(), String>;

fn check(cond: bool, what: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn criterion_1() -> Outcome {
    let mut rings = Vec::new();
    let f = Field::Rational;
    rings.push((f, f.from_i64(2)));
    let p = f101();
    rings.push((p, p.root_of_unity(5).unwrap()));
    for (field, q) in rings {
        let upper = [
            ((0, 1), q.clone()),
            ((0, 2), field.from_i64(-1)),
            ((1, 2), -q.inv().unwrap()),
        ];
        let ring = QMatrix::from_upper(field, 3, &upper).unwrap();
        let (x2, z2, yz) = (m(&[2, 0, 0]), m(&[0, 0, 2]), m(&[0, 1, 1]));
        check(ring.c_constant(&x2, &yz).unwrap().is_one(), "C(x^2, yz) != 1")?;
        check(ring.c_constant(&z2, &yz).unwrap() == q.pow(2).unwrap(), "C(z^2, yz) != q^2")?;
        check(ring.gdegree(&x2).unwrap() == ring.gdegree(&z2).unwrap(), "gdeg(x^2) != gdeg(z^2)")?;
    }
    Ok(())
}

fn complexes(instances: &[Instance]) -> Vec<TaylorComplex> {
    instances
        .iter()
        .map(|i| build_taylor(&i.gens, i.ring.clone()).unwrap())
        .collect()
}

fn criterion_2(ts: &[TaylorComplex]) -> Outcome {
    for (k, t) in ts.iter().enumerate() {
        check(t.verify_d_squared(), format!("instance {k}: d^2 != 0"))?;
        check(t.verify_resolution(), format!("instance {k}: not a resolution"))?;
    }
    Ok(())
}

fn criterion_3(ts: &[TaylorComplex]) -> Outcome {
    for (k, t) in ts.iter().enumerate() {
        check(verify_leibniz(t).unwrap(), format!("instance {k}: Leibniz"))?;
        check(verify_associativity(t).unwrap(), format!("instance {k}: associativity"))?;
        check(verify_color_comm(t).unwrap(), format!("instance {k}: color commutativity"))?;
        check(verify_gamma_axioms(t).unwrap(), format!("instance {k}: divided powers"))?;
        for size in (2..=t.s()).step_by(2) {
            for &p in t.basis(size) {
                let ep = TaylorElement::basis(t.ring(), p);
                check(divided_power(t, &ep, 2).unwrap().is_zero(), format!("instance {k}: e_P^(2) != 0"))?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut r = rng(404);
    for k in 0..25 {
        let n = r.gen_range(2..=4);
        let s = r.gen_range(1..=5);
        let gens = random_antichain(&mut r, n, s, 3, 1);
        let t = build_taylor(&gens, Arc::new(QMatrix::commutative(Field::Rational, n))).unwrap();
        let classical = ClassicalTaylor {
            gens: gens.iter().map(|g| g.exps().to_vec()).collect(),
        };
        let field = t.field();
        for i in 1..=t.s() {
            for &f in t.basis(i) {
                let idx: Vec<usize> = f.iter().collect();
                let got: Vec<_> = t
                    .diff_of(f)
                    .iter()
                    .map(|e| (e.target, e.term.coeff.clone(), e.term.mono.exps().to_vec()))
                    .collect();
                let expected: Vec<_> = classical
                    .diff(&idx)
                    .into_iter()
                    .map(|(g, c, u)| (Subset::from_indices(g), field.from_i64(c), u))
                    .collect();
                check(got == expected, format!("instance {k}: differential of {f}"))?;
            }
        }
        let full = 1u64 << t.s();
        for v in 0..full {
            for w in 0..full {
                let (v, w) = (Subset(v), Subset(w));
                let got = basis_product(&t, v, w).unwrap();
                let expected = match classical.product(&v.iter().collect::<Vec<_>>(), &w.iter().collect::<Vec<_>>()) {
                    None => TaylorElement::zero(),
                    Some((u, c, g)) => TaylorElement::from_term(
                        Subset::from_indices(u),
                        skewtaylor_core::SkewPoly::term(t.ring().clone(), field.from_i64(c), Monomial::new(g)),
                    ),
                };
                check(got == expected, format!("instance {k}: product e{v} e{w}"))?;
            }
        }
        let betti: Vec<_> = t
            .betti()
            .entries
            .into_iter()
            .map(|((i, a), b)| ((i, a.exps().to_vec()), b))
            .collect();
        check(
            betti == classical.betti().into_iter().collect::<Vec<_>>(),
            format!("instance {k}: Betti table"),
        )?;
    }
    Ok(())
}

fn criterion_5(ts: &[TaylorComplex]) -> Outcome {
    let f = Field::Rational;
    let q = Arc::new(QMatrix::from_upper(f, 2, &[((0, 1), f.from_i64(3))]).unwrap());
    let start = Instant::now();
    let a = build_taylor(&[m(&[2, 0]), m(&[1, 1])], q).unwrap().betti().totals();
    check(a == vec![1, 2, 1], format!("(x^2, xy) gave {a:?}"))?;
    let comm = Arc::new(QMatrix::commutative(f, 3));
    let b = build_taylor(&[m(&[1, 1, 0]), m(&[0, 1, 1]), m(&[1, 0, 1])], comm)
        .unwrap()
        .betti()
        .totals();
    check(b == vec![1, 3, 2], format!("(xy, yz, xz) gave {b:?}"))?;
    check(start.elapsed() < Duration::from_secs(1), "golden Betti tables took over 1 s")?;
    for (k, t) in ts.iter().enumerate() {
        let started = Instant::now();
        let totals = t.betti().totals();
        for (i, b) in totals.iter().enumerate() {
            check(*b <= binomial(t.s(), i), format!("instance {k}: beta_{i} = {b} > binom"))?;
        }
        check(started.elapsed() < Duration::from_secs(1), format!("instance {k}: over 1 s"))?;
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// A base ideal in at most three variables whose first two variables only
/// occur with even exponents, so flipping the sign of `q_12` preserves all
/// constants on the lattice.
fn base_instance(r: &mut impl Rng) -> (Arc<QMatrix>, Vec<Monomial>) {
    loop {
        let n = r.gen_range(2..=3);
        let s = r.gen_range(2..=3);
        let raw: Vec<Monomial> = (0..s)
            .map(|_| {
                Monomial::new(
                    (0..n)
                        .map(|v| if v < 2 { 2 * r.gen_range(0..=1) } else { r.gen_range(0..=2) })
                        .collect(),
                )
            })
            .collect();
        if raw.iter().any(|g| g.total_degree() < 2) {
            continue;
        }
        let min = skewtaylor_core::skewpoly::minimal_generators(&raw);
        if min.len() < 2 || min.len() != raw.len() {
            continue;
        }
        let ring = Arc::new(random_q(r, f101(), n));
        return (ring, raw);
    }
}

/// A ring in which swapping `x_1` and `x_2` is an automorphism that keeps
/// every G-degree of a monomial with even `x_1`, `x_2` exponents.
fn swappable_ring(r: &mut impl Rng, n: usize) -> QMatrix {
    let f = f101();
    let mut upper = vec![((0, 1), f.from_i64(if r.gen_bool(0.5) { 1 } else { -1 }))];
    for k in 2..n {
        let q = f.from_i64(r.gen_range(1..101));
        upper.push(((0, k), q.clone()));
        upper.push(((1, k), q));
    }
    QMatrix::from_upper(f, n, &upper).unwrap()
}

fn swap_first_two(g: &Monomial) -> Monomial {
    let mut e = g.exps().to_vec();
    e.swap(0, 1);
    Monomial::new(e)
}

fn rescaled(ring: &QMatrix, gens: &[Monomial]) -> QMatrix {
    let field = ring.field();
    let n = ring.n();
    let even = |v: usize| gens.iter().all(|g| g.exps()[v] % 2 == 0);
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let q = ring.q(i, j).clone();
            let q = if even(i) && even(j) { -q } else { q };
            upper.push(((i, j), q));
        }
    }
    QMatrix::from_upper(field, n, &upper).unwrap()
}

fn lattice_of(t: &TaylorComplex) -> (LcmLattice, skewtaylor_core::lattice::GcdGraph) {
    let l = LcmLattice::from_taylor(t).unwrap();
    let g = build_gcd_graph(&l).unwrap();
    (l, g)
}

fn criterion_6() -> Outcome {
    let mut r = rng(606);
    let mut rescaled_pairs = 0;
    let mut relabeled_pairs = 0;
    for k in 0..20 {
        let (mut ring, gens) = base_instance(&mut r);
        let swap = k % 2 == 0;
        if swap {
            ring = Arc::new(swappable_ring(&mut r, ring.n()));
        }
        let mut permuted: Vec<Monomial> = if swap { gens.iter().map(swap_first_two).collect() } else { gens.clone() };
        if permuted.iter().any(|g| !gens.contains(g)) {
            relabeled_pairs += 1;
        }
        permuted.shuffle(&mut r);
        let ring2 = Arc::new(rescaled(&ring, &gens));
        if *ring2 != *ring {
            rescaled_pairs += 1;
        }
        let t1 = build_taylor(&gens, ring).unwrap();
        let t2 = build_taylor(&permuted, ring2).unwrap();
        let (l1, g1) = lattice_of(&t1);
        let (l2, g2) = lattice_of(&t2);
        let iso = find_color_iso(&l1, &g1, &l2, &g2, IsoOptions::default()).unwrap();
        let Some(iso) = iso else {
            return Err(format!("positive pair {k}: no isomorphism found"));
        };
        check(check_iso_on_subsets(&iso, &l1, &l2), format!("positive pair {k}: lambda-hat mismatch"))?;
        check(iso.preserves_internal_degree, format!("positive pair {k}: internal degree"))?;
        let report = predict_equalities(Some(&iso), &t1, &t2, PREDICTION_DEGREE).unwrap();
        check(report.passed(), format!("positive pair {k}: {report:?}"))?;
    }
    check(rescaled_pairs > 0, "no pair exercised the q rescaling")?;
    check(relabeled_pairs > 0, "no pair exercised a variable swap")?;

    let mut negatives = 0;
    while negatives < 20 {
        let n = r.gen_range(2..=3);
        let ring = Arc::new(random_q(&mut r, f101(), n));
        let s = r.gen_range(2..=3);
        let a = random_gens(&mut r, n, s, 2, 2);
        let b = random_gens(&mut r, n, s, 2, 2);
        let (la, lb) = (
            build_lcm_lattice(&a, ring.clone()).unwrap(),
            build_lcm_lattice(&b, ring.clone()).unwrap(),
        );
        let (ga, gb) = (build_gcd_graph(&la).unwrap(), build_gcd_graph(&lb).unwrap());
        let mut da: Vec<_> = la.node_gdeg.clone();
        let mut db: Vec<_> = lb.node_gdeg.clone();
        da.sort();
        db.sort();
        let distinct = la.len() != lb.len() || da != db || ga.edges.len() != gb.edges.len();
        if !distinct {
            continue;
        }
        negatives += 1;
        let iso = find_color_iso(&la, &ga, &lb, &gb, IsoOptions::default()).unwrap();
        check(iso.is_none(), format!("negative pair {negatives}: false isomorphism"))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let f = Field::Rational;
    let ring = Arc::new(QMatrix::from_upper(f, 2, &[((0, 1), f.from_i64(2))]).unwrap());
    let mut classes = Vec::new();
    for e in [2u32, 3] {
        let ideal = MonomialIdeal::new(2, vec![m(&[e, 0]), m(&[0, e])]).unwrap();
        let s = QuotientAlgebra::new(ring.clone(), ideal).unwrap();
        let p = poincare_series(&s, 5).unwrap();
        let d = deviations(&p).unwrap();
        check(d.ranks == vec![2, 2, 0, 0, 0], format!("S_{e}: deviations {:?}", d.ranks))?;
        let pi2 = pi2_multidegrees(&s, 2 * e as u64).unwrap();
        let degs: Vec<Monomial> = pi2.iter().map(|c| c.multidegree.clone()).collect();
        check(degs == vec![m(&[0, e]), m(&[e, 0])], format!("S_{e}: pi^2 multidegrees {degs:?}"))?;
        let mut g: Vec<_> = pi2.iter().map(|c| c.dual_gdeg.clone()).collect();
        g.sort();
        classes.push(g);
    }
    check(classes[0] != classes[1], "pi^2 G-degrees of S_2 and S_3 agree")
}

fn criterion_8() -> Outcome {
    let f = Field::Rational;
    let ring = Arc::new(QMatrix::from_upper(f, 2, &[((0, 1), f.from_i64(2))]).unwrap());
    let ideal = MonomialIdeal::new(2, vec![m(&[2, 0]), m(&[0, 2])]).unwrap();
    let s = QuotientAlgebra::new(ring.clone(), ideal.clone()).unwrap();
    let p = minimal_resolution_of_k(&s, 5, 10).unwrap();
    check(p.coeffs == vec![1, 2, 3, 4, 5, 6], format!("beta = {:?}", p.coeffs))?;
    check(p.exact_through == Some(5), "coefficients not certified through 5")?;
    let bar = common::bar_complex_tor(&ring, &ideal, 6);
    let low: Vec<_> = p
        .bigraded
        .iter()
        .filter(|((_, a), _)| a.total_degree() <= 6)
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    let bar_low: Vec<_> = bar.into_iter().filter(|((i, _), _)| *i <= 5).collect();
    check(low == bar_low, "bar complex disagrees through internal degree 6")?;

    // round trip on every instance computed here
    let mut r = rng(808);
    let mut series = vec![p];
    for _ in 0..10 {
        let n = r.gen_range(1..=3);
        let ring = Arc::new(random_q(&mut r, f101(), n));
        let count = r.gen_range(1..=3);
        let gens = random_gens(&mut r, n, count, 2, 2);
        let s = QuotientAlgebra::new(ring, MonomialIdeal::new(n, gens).unwrap()).unwrap();
        series.push(poincare_series(&s, 5).unwrap());
    }
    for p in &series {
        let d = deviations(p).unwrap();
        check(
            series_from_deviations(&d.ranks, d.exact_through).unwrap() == p.exact_coeffs(),
            format!("round trip failed for {:?}", p.coeffs),
        )?;
    }
    Ok(())
}

fn main() {
    let instances = random_instances(100, 2024);
    let complexes = complexes(&instances);
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 bicharacter golden values", Duration::from_millis(1), Box::new(criterion_1)),
        ("2 complex property suite", Duration::from_secs(60), Box::new(|| criterion_2(&complexes))),
        ("3 DG Gamma suite", Duration::from_secs(120), Box::new(|| criterion_3(&complexes))),
        ("4 commutative degeneration", Duration::from_secs(60), Box::new(criterion_4)),
        ("5 Betti oracles", Duration::from_secs(60), Box::new(|| criterion_5(&complexes))),
        ("6 isomorphism predictions", Duration::from_secs(120), Box::new(criterion_6)),
        ("7 complete intersections S_2, S_3", Duration::from_secs(30), Box::new(criterion_7)),
        ("8 resolution of k", Duration::from_secs(60), Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, limit, run) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            check(elapsed <= *limit, format!("took {elapsed:?}, limit {limit:?}"))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
