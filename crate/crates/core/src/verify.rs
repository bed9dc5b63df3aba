//! Self-verification suites: exhaustive range checks that pit the
//! closed-form results against the brute-force oracles.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, is_perfect_square};
use crate::error::Error;
use crate::classify::classify;
use crate::delta::{
    delta_triples_factored, descent_witness, divisor_diff_sets, extremal_bound, has_delta,
    MembershipTable, Regime,
};
use crate::graphs::{
    factor_graph, is_n_simple_type0_triangle, n_simple_induced_cycles, random_corpus, SplitGraph,
    CORPUS_SEED,
};
use crate::polyfam::{family_grid, family_members, make_family, PolyFamily};
use crate::realize::{realization_params, realize_graph};

/// The families named in the literature, as `(a, b, c)`.
pub const NAMED_FAMILIES: [(i64, i64, i64); 5] =
    [(1, 0, -1), (1, 2, 1), (1, -1, -5), (3, 4, 7), (2, -4, -10)];

/// Realizations are built for `n` up to this bound at most; the 2-switch
/// oracle is quadratic in the clique size.
pub const REALIZE_CAP: u64 = 5000;

pub const CORPUS_SIZE: usize = 500;
pub const CORPUS_MAX_K: usize = 12;
pub const CORPUS_MAX_I: usize = 4;

const KEPT_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bounds,
    Classification,
    Families,
    Graphs,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Bounds, Suite::Classification, Suite::Families, Suite::Graphs];

    pub fn run(self, max: u64) -> SuiteReport {
        match self {
            Suite::Bounds => bounds_suite(max),
            Suite::Classification => classification_suite(max),
            Suite::Families => families_suite(max),
            Suite::Graphs => graphs_suite(max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: u64,
    pub failed: u64,
    pub max: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn from_outcomes(suite: Suite, max: u64, outcomes: Vec<Result<(), String>>) -> Self {
        let failures: Vec<String> = outcomes.iter().filter_map(|o| o.clone().err()).collect();
        SuiteReport {
            suite,
            passed: (outcomes.len() - failures.len()) as u64,
            failed: failures.len() as u64,
            max,
            failures: failures.into_iter().take(KEPT_FAILURES).collect(),
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every inequality and regime maximum for the triples of one `n`.
pub fn check_bounds(n: u64) -> Result<(), String> {
    let f = factorize(n).map_err(|e| e.to_string())?;
    let sets = divisor_diff_sets(n).map_err(|e| e.to_string())?;
    let below_top = sets.dstar.iter().rev().nth(1).copied();
    if let Some(d) = below_top {
        check(2 * d + 4 <= n, || format!("{n}: difference {d} exceeds n/2 - 2"))?;
    }
    if let Some(&c) = sets.intersection().last() {
        check(3 * c + 18 <= 2 * n, || format!("{n}: common element {c} exceeds 2n/3 - 6"))?;
    }
    for t in delta_triples_factored(&f).map_err(|e| e.to_string())? {
        let (x, y, z) = (t.x(), t.y(), t.z());
        let tag = || format!("{n} with {t}");
        check(x < y && y < 2 * x, || format!("{}: y/x outside (1, 2)", tag()))?;
        check(y % x != 0, || format!("{}: x divides y", tag()))?;
        check(z < x * (x + 1), || format!("{}: z >= x(x+1)", tag()))?;
        let a = z / x;
        check((1..=x).contains(&a), || format!("{}: z = ax + b with a = {a}", tag()))?;
        let c = z / y;
        check(c >= 1 && c < x, || format!("{}: z = cy + d with c = {c}", tag()))?;
        check(z * gcd(x, y) < x * y, || format!("{}: z gcd(x, y) >= xy", tag()))?;

        let regime = if t.is_duplicated() { Regime::Duplicated } else { Regime::Generic };
        match extremal_bound(x, regime) {
            Ok((bound, extremal)) => {
                check(n <= bound, || format!("{}: n above the regime maximum {bound}", tag()))?;
                let at_extremal = (y, z) == (extremal.y(), extremal.z());
                check((n == bound) == at_extremal, || format!("{}: equality case mismatch", tag()))?;
            }
            // the maximum lies past the ceiling, so n is strictly below it
            Err(Error::AboveCeiling(_) | Error::Overflow(_)) => {}
            Err(e) => return Err(e.to_string()),
        }

        if t.is_duplicated() {
            descent_witness(n, x, y).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

pub fn bounds_suite(max: u64) -> SuiteReport {
    let outcomes = (2..=max).into_par_iter().map(check_bounds).collect();
    SuiteReport::from_outcomes(Suite::Bounds, max, outcomes)
}

fn admissible_tau(t: u64) -> bool {
    t == 12 || (t >= 15 && !crate::arith::is_prime(t))
}

/// Classifier agreement, the divisor-count restriction on members, and
/// `p < n/p` for every prime factor `p` of a member.
pub fn check_classification(n: u64) -> Result<(), String> {
    let verdict = classify(n).map_err(|e| e.to_string())?;
    let member = has_delta(n).map_err(|e| e.to_string())?;
    check(verdict.is_member() == member, || {
        format!("{n}: rule {} says member = {}", verdict.rule, verdict.is_member())
    })?;
    if member {
        let f = factorize(n).map_err(|e| e.to_string())?;
        let pqr = f.distinct_primes() == 3 && f.is_squarefree();
        if n != 24 && n != 40 && !pqr {
            check(admissible_tau(f.tau()), || format!("{n}: member with tau = {}", f.tau()))?;
        }
        for &(p, _) in f.factors() {
            check(p < n / p, || format!("{n}: member with prime factor {p} >= n/{p}"))?;
        }
    }
    Ok(())
}

pub fn classification_suite(max: u64) -> SuiteReport {
    let outcomes = (2..=max).into_par_iter().map(check_classification).collect();
    SuiteReport::from_outcomes(Suite::Classification, max, outcomes)
}

/// The named families plus the `a <= 5`, `|b| <= 5` grid.
pub fn family_corpus() -> Vec<PolyFamily> {
    let mut fams: Vec<PolyFamily> = NAMED_FAMILIES
        .iter()
        .map(|&(a, b, c)| make_family(a, b, c).expect("named families are valid"))
        .collect();
    for f in family_grid(5, 5) {
        if !fams.contains(&f) {
            fams.push(f);
        }
    }
    fams
}

/// `n(x)` is a member for `x` in `[n0, n0 + 20]`, for every corpus family.
/// The range does not depend on `max`.
pub fn families_suite(max: u64) -> SuiteReport {
    let mut outcomes: Vec<Result<(), String>> = family_corpus()
        .par_iter()
        .map(|f| family_members(f, 21).map(|_| ()).map_err(|e| e.to_string()))
        .collect();
    let dup = make_family(1, 0, -1).expect("valid");
    outcomes.push((2..=100u64).try_for_each(|x| {
        let (bound, _) = extremal_bound(x, Regime::Duplicated).map_err(|e| e.to_string())?;
        check(dup.eval(x as i64) == Ok(bound), || format!("x(2x-1)(3x-2) differs at {x}"))
    }));
    SuiteReport::from_outcomes(Suite::Families, max, outcomes)
}

/// Formula against oracle, total switch count, and the induced-cycle facts
/// on one graph.
pub fn check_graph(s: &SplitGraph) -> Result<(), String> {
    let phi = factor_graph(s);
    let m = s.i_size();
    for u in 0..m {
        for v in u + 1..m {
            let (f, o) = (
                s.sigma(u, v).map_err(|e| e.to_string())?,
                s.sigma_oracle(u, v).map_err(|e| e.to_string())?,
            );
            check(f == o, || format!("sigma({u}, {v}) = {f} but the oracle counts {o}"))?;
        }
    }
    let total = s.switch_count();
    check(phi.weighted_edge_count() == total, || {
        format!("weighted edge count {} but {total} switches", phi.weighted_edge_count())
    })?;
    let mut weights: Vec<u64> = phi.edges().iter().map(|e| e.multiplicity).collect();
    weights.sort_unstable();
    weights.dedup();
    for w in weights {
        let cycles = n_simple_induced_cycles(s, w).map_err(|e| e.to_string())?;
        if w >= 2 && !is_perfect_square(w) && !has_delta(w).map_err(|e| e.to_string())? {
            check(cycles.iter().all(|c| c.len() != 3), || {
                format!("{w}-simple triangle with {w} a non-square non-member")
            })?;
        }
    }
    Ok(())
}

/// Realized graphs for every triple with `n <= limit` and `dA` in
/// `{z, z + 1, x + z}`, paired with their `n`.
pub fn realization_corpus(limit: u64) -> Vec<(u64, SplitGraph)> {
    (2..=limit)
        .into_par_iter()
        .flat_map_iter(|n| {
            let f = factorize(n).expect("in range");
            let triples = delta_triples_factored(&f).expect("in range");
            triples.into_iter().flat_map(move |t| {
                let (x, z) = (t.x(), t.z());
                [z, z + 1, x + z].into_iter().map(move |d_a| {
                    let p = realization_params(&t, d_a).expect("dA >= z");
                    (n, realize_graph(&p).expect("construction is checked"))
                })
            })
        })
        .collect()
}

pub fn graphs_suite(max: u64) -> SuiteReport {
    let corpus = random_corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_K, CORPUS_MAX_I);
    let mut outcomes: Vec<Result<(), String>> = corpus.par_iter().map(check_graph).collect();
    let realized = realization_corpus(max.min(REALIZE_CAP));
    outcomes.par_extend(realized.par_iter().map(|(n, s)| {
        check_graph(s)?;
        check(is_n_simple_type0_triangle(s, *n), || format!("realization for {n} is not {n}-simple"))
    }));
    SuiteReport::from_outcomes(Suite::Graphs, max, outcomes)
}

/// Non-squares `n <= max` with two square-times-primitive decompositions
/// whose primitive parts are coprime.
pub fn coprime_double_representations(table: &MembershipTable) -> Vec<u64> {
    (2..=table.limit())
        .filter(|&n| table.contains(n) && !is_perfect_square(n))
        .filter(|&n| {
            let d = table.decompositions(n);
            d.iter()
                .enumerate()
                .any(|(i, p)| d[i + 1..].iter().any(|q| gcd(p.m, q.m) == 1))
        })
        .collect()
}

/// Roots `k` with `k^2` a member, `k^2 <= limit`.
pub fn delta_square_roots(limit: u64) -> Vec<u64> {
    (2u64..)
        .take_while(|k| k * k <= limit)
        .filter(|k| has_delta(k * k).unwrap_or(false))
        .collect()
}
