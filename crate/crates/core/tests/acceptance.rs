//! End-to-end acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Reference values for criteria 1 and 13 are recomputed here by plain
//! brute force that shares no code with the library.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use polystoch::constructions::{self, FamilyMode, ZeroFamilySpec};
use polystoch::latin::{self, LatinHypercube, PartialHypercube};
use polystoch::permanent;
use polystoch::polytope;
use polystoch::rational::{format, int, ratio};
use polystoch::tensor::{self, ConvexCombination};
use polystoch::{Rational, Tensor};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

// --- brute-force references ---------------------------------------------------

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Σ over permutation pairs (σ, τ) of Π_i [L(i, σ(i)) = τ(i)].
fn brute_transversals(l: &LatinHypercube) -> u64 {
    let n = l.order();
    let perms = all_permutations(n);
    let mut count = 0;
    for s in &perms {
        for t in &perms {
            if (0..n).all(|i| l.symbols()[i * n + s[i]] == t[i]) {
                count += 1;
            }
        }
    }
    count
}

/// Σ over all (d-1)-tuples of permutations of Π_i A(i, σ_2(i), ..).
#[allow(clippy::needless_range_loop)]
fn brute_permanent(a: &Tensor) -> Rational {
    let (d, n) = (a.dim(), a.order());
    let perms = all_permutations(n);
    let mut choice = vec![0usize; d - 1];
    let mut total = Rational::zero();
    loop {
        let mut prod = Rational::one();
        for i in 0..n {
            let mut off = i;
            for &c in &choice {
                off = off * n + perms[c][i];
            }
            prod *= &a.entries()[off];
        }
        total += prod;
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            return total;
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

// --- criteria -----------------------------------------------------------------

fn c1() -> Outcome {
    let mut parts = Vec::new();
    for n in [4, 6, 8] {
        let c = permanent::count_transversals(&latin::cyclic(2, n).map_err(e)?);
        ensure(c == 0, format!("cyclic(2,{n}) has {c} transversals"))?;
        parts.push(format!("n={n}:0"));
    }
    for (n, expect) in [(3, 3), (5, 15), (7, 133)] {
        let h = latin::cyclic(2, n).map_err(e)?;
        let c = permanent::count_transversals(&h);
        let o = brute_transversals(&h);
        ensure(o == expect, format!("oracle gives {o} for n={n}, expected {expect}"))?;
        ensure(c == o, format!("n={n}: library {c}, oracle {o}"))?;
        parts.push(format!("n={n}:{c}"));
    }
    Ok(parts.join(" "))
}

fn c2() -> Outcome {
    let c = latin::cyclic(2, 4).map_err(e)?;
    let mut ds = BTreeSet::new();
    for axis in 0..3 {
        for i in 0..4 {
            ds.insert(latin::interchange_hyperplanes(&c, axis, i, (i + 1) % 4).map_err(e)?);
        }
    }
    ensure(ds.len() == 12, format!("{} distinct hypercubes", ds.len()))?;
    let pc = latin::p_of_h(&c);
    for d in &ds {
        let mid = pc.lerp(&latin::p_of_h(d), &ratio(1, 2)).map_err(e)?;
        let per = permanent::permanent1(&mid).map_err(e)?.value;
        ensure(per.is_zero(), format!("midpoint permanent {per}"))?;
        let mixed = permanent::mixed_transversal_exists(&[c.clone(), d.clone()]).map_err(e)?;
        ensure(mixed.is_none(), "mixed transversal found")?;
    }
    Ok("12 distinct, all midpoints permanent 0, no mixed transversals".into())
}

fn c3() -> Outcome {
    let all = latin::completions(&PartialHypercube::empty(2, 4).map_err(e)?, 100_000_000).map_err(e)?;
    let distinct: BTreeSet<_> = all.iter().collect();
    ensure(all.len() == 576 && distinct.len() == 576, format!("{} squares", all.len()))?;
    let zero = all.iter().filter(|h| permanent::count_transversals(h) == 0).count();
    ensure(zero == 432, format!("{zero} zero-transversal squares"))?;
    Ok(format!("{} squares, {zero} without transversals", all.len()))
}

fn c4() -> Outcome {
    let mut parts = Vec::new();
    let mut notes = Vec::new();
    for (d, n, listed) in [(3, 3, ratio(36, 729)), (3, 4, ratio(9, 4)), (4, 3, ratio(8, 3)), (3, 6, ratio(518400, 46656))] {
        let value = permanent::permanent1(&Tensor::uniform(d, n).map_err(e)?).map_err(e)?.value;
        let formula = Rational::new(
            num_traits::pow(factorial(n), d - 1),
            num_traits::pow(BigInt::from(n), n),
        );
        ensure(value == formula, format!("({d},{n}): {} vs (n!)^(d-1)/n^n = {}", format(&value), format(&formula)))?;
        parts.push(format!("({d},{n})={}", format(&value)));
        if listed != formula {
            notes.push(format!("listed {} for ({d},{n}) is not (n!)^(d-1)/n^n", format(&listed)));
        }
    }
    let mut line = parts.join(" ");
    if !notes.is_empty() {
        line.push_str(&format!(" [note: {}]", notes.join("; ")));
    }
    Ok(line)
}

fn c5() -> Outcome {
    let mut parts = Vec::new();
    for (d, n) in [(3, 4), (3, 6), (5, 4)] {
        let spec = ZeroFamilySpec::new(d, n);
        let members = constructions::zero_family(&spec, FamilyMode::Sample { count: 20, seed: 2024 }).map_err(e)?;
        ensure(members.len() == 20, "sample size")?;
        let c = latin::cyclic(d - 1, n).map_err(e)?;
        for h in &members {
            for o in 0..h.len() {
                if !spec.in_window(&h.coords(o)) {
                    ensure(h.symbols()[o] == c.symbols()[o], "member leaves the window")?;
                }
            }
            let per = permanent::permanent1(&latin::p_of_h(h)).map_err(e)?.value;
            ensure(per.is_zero(), format!("({d},{n}): member with permanent {per}"))?;
        }
        let mut checked = BTreeSet::new();
        for i in 0..20 {
            for j in i + 1..20 {
                for k in j + 1..20 {
                    let mut key = vec![&members[i], &members[j], &members[k]];
                    key.sort();
                    key.dedup();
                    if !checked.insert(key.clone()) {
                        continue;
                    }
                    let family: Vec<LatinHypercube> = key.into_iter().cloned().collect();
                    let mixed = permanent::mixed_transversal_exists(&family).map_err(e)?;
                    ensure(mixed.is_none(), format!("({d},{n}): mixed transversal in a sampled triple"))?;
                }
            }
        }
        let distinct: BTreeSet<_> = members.iter().collect();
        parts.push(format!("({d},{n}): 20 members ({} distinct), {} distinct triples", distinct.len(), checked.len()));
    }
    Ok(parts.join("; "))
}

fn c6() -> Outcome {
    let mut parts = Vec::new();
    for (k, n) in [(2, 3), (2, 4), (2, 5), (3, 3), (3, 4)] {
        let expected = if n % 2 == 1 || (k + 1) % 2 == 0 { 0 } else { n / 2 };
        let (mut cubes, mut ts) = (0u64, 0u64);
        let mut err: Option<String> = None;
        latin::for_each_completion(&PartialHypercube::empty(k, n).map_err(e)?, 1_000_000_000, |h| {
            cubes += 1;
            permanent::for_each_transversal(h, |t| {
                ts += 1;
                // Independent recomputation of the Delta sum.
                let sum = t.cells.iter().fold(0, |acc, cell| {
                    let coords: usize = cell[..k].iter().sum();
                    (acc + cell[k] + n * k - coords) % n
                });
                let lib = permanent::delta_sum_check(h, &t);
                if sum != expected || lib.as_ref().ok() != Some(&expected) {
                    err = Some(format!("(k,n)=({k},{n}): Delta sum {sum}, library {lib:?}"));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if err.is_some() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .map_err(e)?;
        if let Some(msg) = err {
            return Err(msg);
        }
        parts.push(format!("({k},{n}): {cubes} hypercubes/{ts} transversals ≡ {expected}"));
    }
    Ok(parts.join("; "))
}

fn random_omega1(n: usize, rng: &mut ChaCha8Rng) -> Result<Tensor, String> {
    let empty = PartialHypercube::empty(2, n).map_err(e)?;
    let m = rng.gen_range(1..=3);
    let weights: Vec<i64> = (0..m).map(|_| rng.gen_range(1..20)).collect();
    let total: i64 = weights.iter().sum();
    let mut terms = Vec::new();
    for w in weights {
        let h = latin::random_completion(&empty, rng, 1_000_000).map_err(e)?.ok_or("no completion")?;
        terms.push((ratio(w, total), latin::p_of_h(&h)));
    }
    Ok(tensor::combine(&ConvexCombination::new(terms).map_err(e)?))
}

fn random_lambda2(n: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let mut s: Vec<usize> = (0..n).collect();
    let mut t: Vec<usize> = (0..n).collect();
    s.shuffle(rng);
    t.shuffle(rng);
    Tensor::from_fn(3, n, |x| if s[x[0]] == x[1] && t[x[0]] == x[2] { int(1) } else { int(0) }).unwrap()
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..200 {
        let n = 2 + trial % 3;
        let a = random_omega1(n, &mut rng)?;
        let b = random_omega1(n, &mut rng)?;
        let ab = tensor::product(&a, &b).map_err(e)?;
        ensure(ab.dim() == 4, "product dimension")?;
        ensure(tensor::is_polystochastic(&ab, 1).map_err(e)?, format!("trial {trial}: A×B not in Ω₁(4,{n})"))?;
        let q = tensor::product(&random_lambda2(n, &mut rng), &random_lambda2(n, &mut rng)).map_err(e)?;
        ensure(tensor::is_permutation_matrix(&q, 3).map_err(e)?, format!("trial {trial}: Q1×Q2 not in Λ₃(4,{n})"))?;
    }
    Ok("200 Ω₁ products and 200 Λ₂×Λ₂ products verified".into())
}

fn c8() -> Outcome {
    let a = constructions::a6();
    ensure(tensor::is_polystochastic(&a, 1).map_err(e)?, "a6 not 1-polystochastic")?;
    let cert = constructions::a6_certificate();
    ensure(cert.terms.len() == 8, "term count")?;
    let expected_weights = [6, 6, 6, 6, 12, 12, 12, 12].map(|q| ratio(1, q));
    for ((w, t), ew) in cert.terms.terms().iter().zip(&expected_weights) {
        ensure(tensor::is_permutation_matrix(t, 2).map_err(e)?, "term outside Λ₂(3,6)")?;
        ensure(w == ew, format!("weight {w}"))?;
    }
    ensure(tensor::combine(&cert.terms) == a.scale(&ratio(1, 6)), "recombination differs from a6/6")?;
    Ok("a6 ∈ Ω₁(3,6); 8 terms in Λ₂(3,6); Σ = a6/6 exactly".into())
}

fn c9() -> Outcome {
    let mut squares = vec![("cyclic(2,3)".to_string(), latin::cyclic(2, 3).map_err(e)?)];
    for n in [3, 4, 5, 7] {
        squares.push((format!("mols({n}).0"), constructions::mols_pair(n).map_err(e)?.0));
    }
    for (name, l) in &squares {
        let p = latin::p_of_h(l);
        let cover = polytope::transversal_cover(&p).map_err(e)?.ok_or(format!("{name}: no cover"))?;
        let n = l.order();
        ensure(cover.parts.len() == n, "cover size")?;
        let mut sum = Tensor::zeros(3, n).map_err(e)?;
        for q in &cover.parts {
            ensure(tensor::is_permutation_matrix(q, 2).map_err(e)?, "part outside Λ₂")?;
            sum = sum.checked_add(q).map_err(e)?;
        }
        ensure(sum == p, format!("{name}: parts do not sum to P"))?;
        ensure(latin::are_orthogonal(l, &cover.mate), format!("{name}: mate not orthogonal"))?;
    }
    let none = polytope::transversal_cover(&latin::p_of_h(&latin::cyclic(2, 4).map_err(e)?)).map_err(e)?;
    ensure(none.is_none(), "cyclic(2,4) has a cover")?;
    Ok("5 covers recombine to P; cyclic(2,4) has none".into())
}

fn c10() -> Outcome {
    let w = constructions::hull_witness(5, 3).map_err(e)?;
    let cert = &w.certificate;
    let mut total = Rational::zero();
    for (c, t) in cert.terms.terms() {
        ensure(c.is_positive(), "non-positive weight")?;
        ensure(tensor::is_permutation_matrix(t, 4).map_err(e)?, "term outside Λ₄(5,3)")?;
        total += c;
    }
    ensure(total.is_one(), format!("weights sum to {total}"))?;
    ensure(tensor::combine(&cert.terms) == cert.target, "certificate does not recombine")?;
    ensure(cert.target == w.matrix.scale(&ratio(1, 27)), "target is not 3^(2-5)·A")?;
    ensure(tensor::is_polystochastic(&w.matrix, 1).map_err(e)?, "A not 1-polystochastic")?;
    ensure(w.matrix != Tensor::uniform(5, 3).map_err(e)?, "A is uniform")?;
    Ok(format!("{} terms in Λ₄(5,3), weights sum 1, A ∈ Ω₁(5,3) \\ {{J/3}}", cert.terms.len()))
}

fn c11() -> Outcome {
    let eps = [ratio(1, 100), ratio(1, 50), ratio(1, 20), ratio(1, 10)];
    let square = latin::cyclic(2, 4).map_err(e)?;
    let lo = constructions::perturbation_scan(&latin::p_of_h(&square), &eps).map_err(e)?;
    ensure(lo.baseline == ratio(9, 4), "baseline (3,4)")?;
    for (x, v) in eps.iter().zip(&lo.values) {
        ensure(*v < ratio(9, 4), format!("(3,4) ε={x}: {v} not below 9/4"))?;
    }
    let cube = latin::linear_hypercube(3, 3, 0, &[1, 1, 2]).map_err(e)?;
    let hi = constructions::perturbation_scan(&latin::p_of_h(&cube), &eps).map_err(e)?;
    // Per(uniform(4,3)) = (3!)^3/3^3 = 8; exceeding it also exceeds 8/3.
    ensure(hi.baseline == int(8), format!("baseline (4,3) = {}", hi.baseline))?;
    for (x, v) in eps.iter().zip(&hi.values) {
        ensure(*v > hi.baseline && *v > ratio(8, 3), format!("(4,3) ε={x}: {v} not above baseline"))?;
    }
    let show = |vs: &[Rational]| vs.iter().map(format).collect::<Vec<_>>().join(",");
    Ok(format!("(3,4): [{}] < 9/4; (4,3): [{}] > 8 > 8/3", show(&lo.values), show(&hi.values)))
}

fn c12() -> Outcome {
    let set = constructions::independent_zero_set(3, 8).map_err(e)?;
    ensure(set.len() == 4, format!("{} matrices", set.len()))?;
    let (rank, independent) = polytope::rank_independent(&set).map_err(e)?;
    ensure(rank == 4 && independent, format!("rank {rank}"))?;
    let mut all = set;
    all.push(latin::p_of_h(&latin::cyclic(2, 8).map_err(e)?));
    let avg = tensor::combine(&ConvexCombination::average(all).map_err(e)?);
    let per = permanent::permanent1(&avg).map_err(e)?.value;
    ensure(per.is_zero(), format!("average has permanent {per}"))?;
    Ok("4 matrices, rank 4, average with P(C_{2,8}) has permanent 0".into())
}

fn random_tensor(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Tensor {
    Tensor::from_fn(d, n, |_| match rng.gen_range(0..4) {
        0 => int(0),
        _ => ratio(rng.gen_range(-12..13), rng.gen_range(1..9)),
    })
    .unwrap()
}

fn c13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1313);
    for i in 0..200 {
        let n = 1 + i % 4;
        let a = random_tensor(3, n, &mut rng);
        let (lib, oracle) = (permanent::permanent1(&a).map_err(e)?.value, brute_permanent(&a));
        ensure(lib == oracle, format!("d=3 n={n}: {lib} vs oracle {oracle}"))?;
    }
    for _ in 0..50 {
        let a = random_tensor(4, 3, &mut rng);
        let (lib, oracle) = (permanent::permanent1(&a).map_err(e)?.value, brute_permanent(&a));
        ensure(lib == oracle, format!("d=4 n=3: {lib} vs oracle {oracle}"))?;
    }
    Ok("200 tensors (d=3, n≤4) and 50 tensors (d=4, n=3) match the oracle".into())
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("cyclic transversal counts", c1, 10),
        ("Zer1(3,4) twelve lines", c2, 5),
        ("order-4 zero-permanent census", c3, 30),
        ("uniform permanent formula", c4, 60),
        ("zero-family property suite", c5, 120),
        ("Delta lemma exhaustive check", c6, 120),
        ("product laws", c7, 60),
        ("A6 certificate", c8, 1),
        ("transversal cover round trip", c9, 30),
        ("hull witness pipeline", c10, 60),
        ("perturbation scan", c11, 120),
        ("independent zero set", c12, 60),
        ("oracle equivalence", c13, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > Duration::from_secs(*limit) => Err(format!("{msg} (exceeded {limit} s)")),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {:>2} {tag} {name} [{:.2} s]: {msg}", i + 1, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
