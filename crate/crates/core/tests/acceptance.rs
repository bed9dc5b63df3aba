//! Acceptance checks. Each criterion prints one PASS/FAIL line with its
//! elapsed time; any failure or budget overrun makes the binary exit 1.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use deltaprop::arith::{factorize, is_prime};
use deltaprop::classify::{classify, pkq_member, pqr_member};
use deltaprop::delta::{
    delta_set, delta_triples, divisor_diff_sets, double_representation, has_delta, is_primitive,
    primitive_decompositions, DeltaTriple, MembershipTable,
};
use deltaprop::graphs::{
    factor_graph, graph_stats, n_simple_induced_cycles, random_corpus, triangle_type,
    TriangleType, CORPUS_SEED,
};
use deltaprop::realize::{active_realizations, realization_params, realize_graph};
use deltaprop::verify::{
    bounds_suite, check_graph, coprime_double_representations, families_suite, family_corpus,
    realization_corpus, CORPUS_MAX_I, CORPUS_MAX_K, CORPUS_SIZE, REALIZE_CAP,
};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| is_prime(p)).collect()
}

fn ac1() -> Outcome {
    let set = delta_set(1000);
    ensure(set.starts_with(&[24, 40]), format!("starts with {:?}", &set[..2.min(set.len())]))?;
    let first_odd = set.iter().find(|n| *n % 2 == 1);
    ensure(first_odd == Some(&105), format!("first odd member {first_odd:?}"))
}

fn ac2() -> Outcome {
    let bad: Vec<u64> = (2..=100_000u64)
        .into_par_iter()
        .filter(|&n| {
            let by_sets = divisor_diff_sets(n).unwrap().has_delta();
            let by_triples = !delta_triples(n).unwrap().is_empty();
            let by_classify = classify(n).unwrap().is_member();
            let by_sweep = has_delta(n).unwrap();
            !(by_sets == by_triples && by_triples == by_classify && by_classify == by_sweep)
        })
        .collect();
    ensure(bad.is_empty(), format!("paths disagree on {:?}", &bad[..bad.len().min(10)]))
}

fn ac3() -> Outcome {
    let r = bounds_suite(1_000_000);
    ensure(r.ok(), format!("{} violations, first {:?}", r.failed, r.failures.first()))?;
    // both regime maxima are attained wherever they fall in range
    for x in 2..=100u64 {
        let dup = x * (2 * x - 1) * (3 * x - 2);
        if dup <= 1_000_000 {
            let t = DeltaTriple::new(dup, x, 2 * x - 1, 2 * x - 1).map_err(|e| e.to_string())?;
            ensure(delta_triples(dup).unwrap().contains(&t), format!("duplicated maximum at x = {x}"))?;
        }
        let gen = x * x * (x + 1) * (x + 1) * (x * x + x - 1);
        if gen <= 1_000_000 {
            let t = DeltaTriple::new(gen, x, x + 1, x * x + x - 1).map_err(|e| e.to_string())?;
            ensure(delta_triples(gen).unwrap().contains(&t), format!("generic maximum at x = {x}"))?;
        }
    }
    Ok(())
}

fn ac4() -> Outcome {
    let small = primes_below(50);
    for &p in &small {
        for &q in &small {
            if p == q {
                continue;
            }
            for k in 1..=8u32 {
                let Some(n) = p.checked_pow(k).and_then(|pk| pk.checked_mul(q)) else {
                    continue;
                };
                let expect = has_delta(n).unwrap();
                ensure(pkq_member(p, k, q).unwrap() == expect, format!("p^k q mismatch at {p}^{k} * {q}"))?;
            }
        }
    }
    let hundred = primes_below(100);
    for (i, &p) in hundred.iter().enumerate() {
        for (j, &q) in hundred.iter().enumerate().skip(i + 1) {
            for &r in &hundred[j + 1..] {
                let expect = has_delta(p * q * r).unwrap();
                ensure(pqr_member(p, q, r).unwrap() == expect, format!("pqr mismatch at {p} * {q} * {r}"))?;
            }
        }
    }
    let wide = primes_below(2000);
    let found: BTreeSet<u64> = wide
        .iter()
        .take_while(|&&p| p <= 7)
        .flat_map(|&p| {
            let wide = &wide;
            wide.iter().filter(move |&&q| q > p).flat_map(move |&q| {
                wide.iter().filter(move |&&r| r > q).map(move |&r| p * q * r)
            })
        })
        .filter(|&n| has_delta(n).unwrap())
        .collect();
    ensure(
        found == BTreeSet::from([105, 385, 1729]),
        format!("pqr members with p <= 7: {found:?}"),
    )
}

fn ac5() -> Outcome {
    let d: Vec<(u64, u64)> = primitive_decompositions(5616)
        .unwrap()
        .iter()
        .map(|d| (d.alpha, d.m))
        .collect();
    ensure(d == [(3, 624), (2, 1404)], format!("5616 decomposes as {d:?}"))?;
    let table = MembershipTable::build(1_000_000);
    let bad = coprime_double_representations(&table);
    ensure(bad.is_empty(), format!("coprime double representations at {:?}", &bad[..bad.len().min(10)]))
}

fn ac6() -> Outcome {
    let first = (2u64..).map(|k| k * k).find(|&n| has_delta(n).unwrap()).unwrap();
    ensure(first == 900, format!("least member square {first}"))?;
    let next = (31u64..).map(|k| k * k).find(|&n| is_primitive(n).unwrap()).unwrap();
    ensure(next == 7056, format!("next primitive square {next}"))?;
    let rep = double_representation(900, 7056, 1).map_err(|e| e.to_string())?;
    ensure(rep == (14, 5, 176_400), format!("double representation {rep:?}"))
}

fn ac7() -> Outcome {
    let grid = family_corpus().len();
    ensure(grid >= 30, format!("only {grid} families"))?;
    let r = families_suite(0);
    ensure(r.ok(), format!("{} failures, first {:?}", r.failed, r.failures.first()))
}

fn ac8() -> Outcome {
    let t = DeltaTriple::new(24, 2, 3, 3).unwrap();
    let p = realization_params(&t, 3).map_err(|e| e.to_string())?;
    ensure(p.k_size == 18, format!("|K| = {}", p.k_size))?;
    ensure((p.d_a, p.d_b, p.d_c) == (3, 8, 13), "degrees")?;
    ensure((p.eta_ab, p.eta_bc, p.eta_ac) == (0, 5, 1), "eta values")?;
    let s = realize_graph(&p).map_err(|e| e.to_string())?;
    ensure(s.k_size() == 18 && s.i_degrees() == [3, 8, 13], "realized graph shape")?;
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        ensure(s.sigma(u, v) == Ok(24), format!("sigma({u}, {v})"))?;
    }
    ensure(triangle_type(&s, [0, 1, 2]) == Ok(TriangleType::Delta0), "triangle type")?;
    let st = graph_stats(&s);
    ensure(st.balanced, "balanced")?;
    ensure(st.all_active(), format!("inactive vertices {:?}", st.inactive))?;
    ensure(st.indecomposable_active, "indecomposable")
}

fn ac9() -> Outcome {
    let corpus = random_corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_K, CORPUS_MAX_I);
    ensure(corpus.len() == 500, "corpus size")?;
    ensure(
        corpus.iter().all(|s| s.k_size() <= 12 && s.i_size() <= 4),
        "corpus bounds",
    )?;
    let mut graphs: Vec<_> = corpus.into_iter().collect();
    graphs.extend(realization_corpus(REALIZE_CAP).into_iter().map(|(_, s)| s));
    for t in [(24, 2, 3, 3), (40, 4, 5, 5), (385, 5, 7, 11), (385, 7, 11, 11)] {
        let t = DeltaTriple::new(t.0, t.1, t.2, t.3).unwrap();
        graphs.extend(active_realizations(&t).map_err(|e| e.to_string())?.into_iter().map(|(_, s)| s));
    }
    let bad: Vec<String> = graphs.par_iter().filter_map(|s| check_graph(s).err()).collect();
    ensure(bad.is_empty(), format!("{} graphs fail, first {:?}", bad.len(), bad.first()))
}

fn ac10() -> Outcome {
    let corpus = random_corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_K, CORPUS_MAX_I);
    for (i, s) in corpus.iter().enumerate() {
        let weights: BTreeSet<u64> = factor_graph(s).edges().iter().map(|e| e.multiplicity).collect();
        for w in weights {
            if w < 2 || deltaprop::arith::is_perfect_square(w) || has_delta(w).unwrap() {
                continue;
            }
            let cycles = n_simple_induced_cycles(s, w).map_err(|e| e.to_string())?;
            ensure(cycles.iter().all(|c| c.len() != 3), format!("graph {i} has a {w}-simple triangle"))?;
        }
    }
    Ok(())
}

fn ac11() -> Outcome {
    let bad: Vec<u64> = (2..=1_000_000u64)
        .into_par_iter()
        .filter(|&n| {
            if n == 24 || n == 40 || !has_delta(n).unwrap() {
                return false;
            }
            let f = factorize(n).unwrap();
            if f.distinct_primes() == 3 && f.is_squarefree() {
                return false;
            }
            let t = f.tau();
            !(t == 12 || (t >= 15 && !is_prime(t)))
        })
        .collect();
    ensure(bad.is_empty(), format!("tau violations at {:?}", &bad[..bad.len().min(10)]))
}

type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 11] = [
        ("AC1", "smallest members and first odd member", secs(1), ac1),
        ("AC2", "three membership paths agree up to 1e5", secs(120), ac2),
        ("AC3", "triple bounds and regime maxima up to 1e6", secs(600), ac3),
        ("AC4", "p^k q and pqr characterizations", secs(60), ac4),
        ("AC5", "5616 decompositions, coprime uniqueness up to 1e6", secs(600), ac5),
        ("AC6", "member squares and double representation", secs(60), ac6),
        ("AC7", "cubic families stay in the set", secs(60), ac7),
        ("AC8", "realizer golden graph for (2, 3, 3)", None, ac8),
        ("AC9", "sigma formula against 2-switch oracle", secs(120), ac9),
        ("AC10", "no n-simple triangles for non-members", None, ac10),
        ("AC11", "divisor counts of members up to 1e6", None, ac11),
    ];
    let mut failed = 0;
    for (id, what, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(()), Some(b)) if took > b => Err(format!("over budget: {took:.2?} > {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("[PASS] {id:<4} {what} ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id:<4} {what} ({took:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
