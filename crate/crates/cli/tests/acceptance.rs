//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{data, eigvar};
use eigvar::oracle::{exponent_rows, DEFAULT_BUDGET};
use eigvar::smith::is_unit;
use eigvar::*;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Corpus) -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn opts() -> EigenOptions {
    EigenOptions::default()
}

fn tensor(h: &Hypergraph, kind: TensorKind) -> GenTensor {
    structured_tensor(h, kind)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn pow_big(m: usize, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(m), e)
}

// ---------------------------------------------------------------- instances

struct Corpus {
    triangle_power: Hypergraph,
    complete: Vec<Hypergraph>,
    cored: Vec<Hypergraph>,
    small3: Vec<Hypergraph>,
    graphs: Vec<Hypergraph>,
}

/// Connected cored hypergraph: every edge owns one vertex nobody else touches.
fn random_cored(rng: &mut ChaCha8Rng, m: usize) -> Hypergraph {
    loop {
        let mut shared: Vec<usize> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut n = 0usize;
        let target = rng.gen_range(1..=3);
        for k in 0..target {
            let mut e = vec![n];
            n += 1;
            if k > 0 {
                e.push(*shared.choose(rng).unwrap());
            }
            while e.len() < m {
                let reuse = !shared.is_empty() && rng.gen_bool(0.5);
                let v = if reuse {
                    *shared.choose(rng).unwrap()
                } else {
                    shared.push(n);
                    n += 1;
                    n - 1
                };
                if !e.contains(&v) {
                    e.push(v);
                }
            }
            edges.push(e);
        }
        if n > 9 {
            continue;
        }
        let h = Hypergraph::new(n, m, edges).unwrap();
        if h.num_edges() == target && h.is_connected() && h.is_cored() {
            return h;
        }
    }
}

fn triples(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

/// Every connected 3-uniform hypergraph on 3..=5 labelled vertices with 1–3 edges.
fn all_small_triples() -> Vec<Hypergraph> {
    let mut out = Vec::new();
    for n in 3..=5 {
        let t = triples(n);
        let k = t.len();
        let mut sets: Vec<Vec<Vec<usize>>> = Vec::new();
        for i in 0..k {
            sets.push(vec![t[i].clone()]);
            for j in i + 1..k {
                sets.push(vec![t[i].clone(), t[j].clone()]);
                for l in j + 1..k {
                    sets.push(vec![t[i].clone(), t[j].clone(), t[l].clone()]);
                }
            }
        }
        out.extend(
            sets.into_iter()
                .map(|edges| Hypergraph::new(n, 3, edges).unwrap())
                .filter(Hypergraph::is_connected),
        );
    }
    out
}

fn random_triples(rng: &mut ChaCha8Rng, count: usize) -> Vec<Hypergraph> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(3..=5);
        let mut t = triples(n);
        t.shuffle(rng);
        let k = rng.gen_range(1..=t.len());
        t.truncate(k);
        let h = Hypergraph::new(n, 3, t).unwrap();
        if h.is_connected() {
            out.push(h);
        }
    }
    out
}

fn random_graph(rng: &mut ChaCha8Rng) -> Hypergraph {
    let n = rng.gen_range(2..=12);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<Vec<usize>> = (1..n)
        .map(|i| vec![order[i], order[rng.gen_range(0..i)]])
        .collect();
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push(vec![a, b]);
        }
    }
    Hypergraph::new(n, 2, edges).unwrap()
}

fn corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let triangle_power = gen_power(&SimpleGraph::cycle(3).unwrap(), 4).unwrap();
    let complete = [(4, 3), (5, 3), (5, 4), (6, 3)]
        .iter()
        .map(|&(n, m)| gen_complete(n, m).unwrap())
        .collect();
    let cored = (0..20)
        .map(|i| random_cored(&mut rng, if i % 2 == 0 { 3 } else { 4 }))
        .collect();
    let mut small3 = all_small_triples();
    small3.extend(random_triples(&mut rng, 50));
    let graphs = (0..20).map(|_| random_graph(&mut rng)).collect();
    Corpus {
        triangle_power,
        complete,
        cored,
        small3,
        graphs,
    }
}

// ---------------------------------------------------------------- criteria

fn flagship(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let h = &c.triangle_power;
    let l = tensor(h, TensorKind::Laplacian);

    let f = snf_mod(&l.incidence(true).matrix(), 4).map_err(|e| e.to_string())?;
    ensure!(
        f.integer.nrows == 3 && f.integer.ncols == 6,
        "incidence is {}x{}",
        f.integer.nrows,
        f.integer.ncols
    );
    ensure!(f.mod_factors == [1, 1, 2], "d = {:?}", f.mod_factors);
    ensure!(f.rank_mod() == 3, "r = {}", f.rank_mod());
    let s = stabilizing_index(&l).map_err(|e| e.to_string())?;
    ensure!(s == BigUint::from(32u32), "s = {s}");

    let path = data("triangle-power.hgf");
    let out = eigvar(&[
        "eigenvariety",
        "--tensor",
        "laplacian",
        "--emit-vectors",
        &path,
    ]);
    ensure!(out.code == 0, "cli exit {}: {}", out.code, out.stderr);
    let report = out.json();
    ensure!(report["s"] == 32, "cli s = {}", report["s"]);
    let exps = report["exponents"].as_array().unwrap();
    ensure!(
        exps.len() == 32,
        "cli lists {} exponent vectors",
        exps.len()
    );
    let mut worst = 0.0f64;
    for y in report["vectors"].as_array().unwrap() {
        let y: Vec<Complex64> = y
            .as_array()
            .unwrap()
            .iter()
            .map(|z| Complex64::new(z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
            .collect();
        worst = worst.max(l.residual(Complex64::zero(), &y).unwrap());
    }
    ensure!(worst <= 1e-8, "laplacian residual {worst:e}");

    let q = tensor(h, TensorKind::Signless);
    let z = zero_variety_signless(h, &opts()).map_err(|e| e.to_string())?;
    let z = z.ok_or("signless tensor has no zero eigenvalue")?;
    ensure!(z.count() == 32, "zero variety has {} vectors", z.count());
    let qworst = z
        .vectors()
        .map(|y| q.residual(Complex64::zero(), &y).unwrap())
        .fold(0.0, f64::max);
    ensure!(qworst <= 1e-8, "signless residual {qworst:e}");

    let cl = classify(h);
    ensure!(
        cl.odd_colorable == Some(true),
        "odd_colorable = {:?}",
        cl.odd_colorable
    );
    ensure!(
        cl.odd_bipartite == Some(false),
        "odd_bipartite = {:?}",
        cl.odd_bipartite
    );

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "d=(1,1,2) r=3 s=32, max residual L {worst:.1e} Q {qworst:.1e}, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn complete_hypergraphs(c: &Corpus) -> Outcome {
    let start = Instant::now();
    for h in &c.complete {
        let (n, m) = (h.n(), h.m());
        let a = tensor(h, TensorKind::Adjacency);
        let s = stabilizing_index(&a).map_err(|e| e.to_string())?;
        ensure!(s.is_one(), "K_{n}^[{m}]: s = {s}");
        let p = spectral_radius(&a, &PerronOptions::default()).map_err(|e| e.to_string())?;
        let expected = binomial(n as u64 - 1, m as u64 - 1) as f64;
        ensure!(
            (p.rho - expected).abs() <= 1e-10,
            "K_{n}^[{m}]: rho = {} vs {expected}",
            p.rho
        );
        let scan =
            phase_scan(&a, &p.vector, p.rho, 1e-10, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure!(
            scan.accepted == vec![vec![0u64; n]],
            "K_{n}^[{m}]: phase scan accepted {:?}",
            scan.accepted
        );
        let ones_err = p.vector.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        ensure!(
            ones_err <= 1e-10,
            "K_{n}^[{m}]: Perron vector off all-ones by {ones_err:e}"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "4 instances, s=1, unique all-ones vector, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn cored_formula(c: &Corpus) -> Outcome {
    let mut even = 0;
    for h in &c.cored {
        let (n, m, t) = (h.n(), h.m(), h.num_edges());
        let expected = pow_big(m, n - 1 - t);
        for kind in [TensorKind::Adjacency, TensorKind::Laplacian] {
            let s = stabilizing_index(&tensor(h, kind)).map_err(|e| e.to_string())?;
            ensure!(
                s == expected,
                "{kind} of {:?}: s = {s}, expected {expected}",
                h.edges()
            );
        }
        if m == 4 {
            even += 1;
            ensure!(
                classify(h).odd_bipartite == Some(true),
                "{:?} not odd-bipartite",
                h.edges()
            );
            let z = zero_variety_signless(h, &opts())
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("{:?}: no zero variety", h.edges()))?;
            ensure!(
                BigUint::from(z.count()) == expected,
                "{:?}: zero variety {} vs {expected}",
                h.edges(),
                z.count()
            );
        }
    }
    Ok(format!(
        "{} instances ({even} with m=4), s = m^(n-1-t) throughout",
        c.cored.len()
    ))
}

fn oracle_equivalence(c: &Corpus) -> Outcome {
    let mut exit4 = 0;
    for (i, h) in c.small3.iter().enumerate() {
        let a = tensor(h, TensorKind::Adjacency);
        let r = rho_eigenvariety(&a, &opts()).map_err(|e| e.to_string())?;
        let scan =
            phase_scan(&a, &r.perron, r.lambda, 1e-8, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let rep = scan.compare(format!("#{i}"), exponent_rows(&r.exponents));
        ensure!(
            rep.agrees(),
            "{:?}: phase scan mismatches {:?}",
            h.edges(),
            rep.mismatches
        );

        let pinned = r.snf.pinned_kernel_size().unwrap();
        let ks = kernel_scan(&a.incidence(true).matrix(), 3, true, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        ensure!(
            BigUint::from(ks.accepted.len()) == pinned,
            "{:?}: kernel scan {} vs {pinned}",
            h.edges(),
            ks.accepted.len()
        );

        let path = common::scratch(&format!("acc4-{i}.hgf"), &h.to_hgf());
        for kind in ["adjacency", "laplacian", "signless"] {
            let out = eigvar(&["verify", "--tensor", kind, &path]);
            if out.code == 4 {
                exit4 += 1;
            }
            ensure!(
                out.code == 0,
                "verify {kind} {:?}: exit {} {}",
                h.edges(),
                out.code,
                out.stderr
            );
        }
    }
    ensure!(exit4 == 0, "{exit4} runs exited with 4");
    Ok(format!(
        "{} instances, sets and counts agree, no exit 4",
        c.small3.len()
    ))
}

fn matrix_sanity(c: &Corpus) -> Outcome {
    let mut worst = 0.0f64;
    for g in &c.graphs {
        for kind in [TensorKind::Adjacency, TensorKind::Laplacian] {
            let s = stabilizing_index(&tensor(g, kind)).map_err(|e| e.to_string())?;
            ensure!(s.is_one(), "{kind} of {:?}: s = {s}", g.edges());
        }
        let l = tensor(g, TensorKind::Laplacian);
        let r = least_eigenvariety(&l, &opts()).map_err(|e| e.to_string())?;
        ensure!(
            r.lambda.abs() <= 1e-12,
            "{:?}: lambda_min = {:e}",
            g.edges(),
            r.lambda
        );
        let res = l.residual_real(0.0, &vec![1.0; g.n()]).unwrap();
        ensure!(res <= 1e-12, "{:?}: all-ones residual {res:e}", g.edges());
        worst = worst.max(res);
    }
    Ok(format!(
        "{} graphs, s=1, lambda_min=0, residual {worst:.1e}",
        c.graphs.len()
    ))
}

/// The subgroup generated by `set`, built by adjoining cyclic subgroups.
fn generated(set: &[ExponentVector], m: u64) -> HashSet<ExponentVector> {
    let n = set.first().map_or(0, ExponentVector::len);
    let mut h: HashSet<ExponentVector> = HashSet::from([ExponentVector::zero(n)]);
    for x in set {
        if h.contains(x) {
            continue;
        }
        let mut next = HashSet::new();
        for base in &h {
            let mut y = base.clone();
            for _ in 0..x.order(m) {
                next.insert(y.clone());
                y = y.add(x, m);
            }
        }
        h = next;
    }
    h
}

fn check_group(
    label: &str,
    r: &EigenvarietyResult,
    t: &GenTensor,
    pair_budget: usize,
) -> Result<usize, String> {
    let m = r.modulus;
    let set: HashSet<ExponentVector> = r.exponents.iter().cloned().collect();
    ensure!(set.len() == r.count(), "{label}: duplicate exponents");
    let n = r.perron.len();
    ensure!(
        set.contains(&ExponentVector::zero(n)),
        "{label}: identity missing"
    );
    for x in &r.exponents {
        ensure!(set.contains(&x.neg(m)), "{label}: inverse of {x} missing");
        ensure!(
            m.is_multiple_of(x.order(m)),
            "{label}: order of {x} does not divide {m}"
        );
    }
    // closed iff the generated subgroup is the set itself
    ensure!(
        generated(&r.exponents, m) == set,
        "{label}: not closed under addition"
    );

    let k = r.count();
    let mut pairs = 0;
    for i in 0..k {
        for j in (i..k).step_by(1 + k / 8) {
            if pairs >= pair_budget {
                break;
            }
            let (a, b) = (&r.exponents[i], &r.exponents[j]);
            let prod = quasi_hadamard(
                &a.realize(&r.perron, m),
                &b.realize(&r.perron, m),
                &r.perron,
                1e-8,
            )
            .map_err(|e| e.to_string())?;
            let sum = a.add(b, m).realize(&r.perron, m);
            let gap = prod
                .iter()
                .zip(&sum)
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max);
            ensure!(gap <= 1e-8, "{label}: {a} ∘ {b} off by {gap:e}");
            let res = t.residual(Complex64::from(r.lambda), &prod).unwrap();
            ensure!(res <= 1e-8, "{label}: {a} ∘ {b} residual {res:e}");
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn group_structure(c: &Corpus) -> Outcome {
    let mut instances: Vec<&Hypergraph> = vec![&c.triangle_power];
    instances.extend(&c.complete);
    instances.extend(&c.cored);
    instances.extend(&c.small3);
    let mut sets = 0;
    let mut pairs = 0;
    for h in instances {
        let label = format!("{:?}", h.edges());
        let l = tensor(h, TensorKind::Laplacian);
        let a = tensor(h, TensorKind::Adjacency);
        let least = least_eigenvariety(&l, &opts()).map_err(|e| e.to_string())?;
        let rho = rho_eigenvariety(&a, &opts()).map_err(|e| e.to_string())?;
        pairs += check_group(&label, &least, &l, 64)?;
        pairs += check_group(&label, &rho, &a, 64)?;
        sets += 2;
        let class = l
            .m_classify(&PerronOptions::default())
            .map_err(|e| e.to_string())?;
        ensure!(
            matches!(class, MClass::SingularM(_)),
            "{label}: L is {}",
            class.name()
        );
    }
    Ok(format!(
        "{sets} exponent groups, {pairs} quasi-Hadamard products, L singular M throughout"
    ))
}

fn certificates(c: &Corpus) -> Outcome {
    let mut instances: Vec<&Hypergraph> = vec![&c.triangle_power];
    instances.extend(&c.complete);
    instances.extend(&c.cored);
    instances.extend(&c.small3);
    instances.extend(&c.graphs);
    let mut count = 0;
    for h in &instances {
        let label = format!("{:?}", h.edges());
        let m = h.m() as u64;
        for kind in [TensorKind::Adjacency, TensorKind::Laplacian] {
            let b = tensor(h, kind).incidence(true).matrix();
            let snf = integer_snf(&b, true);
            let tr = snf.transforms.as_ref().ok_or("transforms missing")?;
            let pbq =
                tr.p.mul(&b)
                    .and_then(|pb| pb.mul(&tr.q))
                    .map_err(|e| e.to_string())?;
            ensure!(pbq == snf.diagonal(), "{label}: PBQ != D");
            ensure!(
                is_unit(&tr.p.determinant().unwrap()),
                "{label}: P not unimodular"
            );
            ensure!(
                is_unit(&tr.q.determinant().unwrap()),
                "{label}: Q not unimodular"
            );
            for w in snf.factors.windows(2) {
                ensure!(
                    w[1].is_multiple_of(&w[0]),
                    "{label}: {} does not divide {}",
                    w[0],
                    w[1]
                );
            }
            let f = eigvar::smith::reduce_mod(snf, m).map_err(|e| e.to_string())?;
            for w in f.mod_factors.windows(2) {
                ensure!(
                    w[1].is_multiple_of(w[0]),
                    "{label}: d = {:?} not a chain",
                    f.mod_factors
                );
            }
            ensure!(
                f.mod_factors.iter().all(|&d| m.is_multiple_of(d)),
                "{label}: d = {:?} vs m={m}",
                f.mod_factors
            );
            let r = f.rank_mod();
            ensure!(r >= 1 && r < h.n(), "{label}: r = {r} outside [1, n-1]");
            let fact_ok = f.integer.factors.iter().all(|s| s.to_u64().is_some());
            ensure!(fact_ok, "{label}: unexpectedly large factor");
            count += 1;
        }
    }
    Ok(format!(
        "{count} certified factorizations over {} instances",
        instances.len()
    ))
}

fn main() {
    let c = corpus();
    let criteria: [Criterion; 7] = [
        ("C3^{4,2} end to end", flagship),
        ("complete hypergraphs", complete_hypergraphs),
        ("cored formula", cored_formula),
        ("oracle equivalence", oracle_equivalence),
        ("matrix sanity (m=2)", matrix_sanity),
        ("group structure", group_structure),
        ("SNF certificates", certificates),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&c))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
