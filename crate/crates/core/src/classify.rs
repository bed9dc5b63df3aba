//! Membership classification through the known obstructions and
//! characterizations, with the oracle as the last resort.
//!
//! Rules run in a fixed order and the first decisive one wins. Decisive
//! rules never contradict [`has_delta`]: in debug builds every verdict is
//! cross-checked and a disagreement surfaces as [`Error::Falsified`].

use serde::{Serialize, Serializer};

use crate::arith::{factorize, is_prime, Factorization};
use crate::delta::{delta_triples_factored, has_delta_factored, DeltaTriple};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Decision {
    Member,
    NonMember,
    OracleMember,
    OracleNonMember,
}

impl Decision {
    pub fn is_member(self) -> bool {
        matches!(self, Decision::Member | Decision::OracleMember)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `n = 2k` with `k` odd.
    TwoOdd,
    /// `n = p^k`.
    PrimePower,
    /// `n = p^x q^y` with `x, y <= 2`.
    TwoPrimesLowExp,
    /// `n = p^k q`, decided in both directions.
    PkQ,
    /// `n = pk` with `p` prime and `p >= k`.
    DominatingPrime,
    /// `n = p^x q^y`, `y >= 2`, `q > p^x`.
    TwoPrimeDominated,
    /// `n = pqr`, decided in both directions.
    PQR,
    /// Divisor-count restriction on members.
    TauFilter,
    Oracle,
}

impl Rule {
    pub const ORDER: [Rule; 9] = [
        Rule::TwoOdd,
        Rule::PrimePower,
        Rule::TwoPrimesLowExp,
        Rule::PkQ,
        Rule::DominatingPrime,
        Rule::TwoPrimeDominated,
        Rule::PQR,
        Rule::TauFilter,
        Rule::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::TwoOdd => "TwoOdd",
            Rule::PrimePower => "PrimePower",
            Rule::TwoPrimesLowExp => "TwoPrimesLowExp",
            Rule::PkQ => "PkQ",
            Rule::DominatingPrime => "DominatingPrime",
            Rule::TwoPrimeDominated => "TwoPrimeDominated",
            Rule::PQR => "PQR",
            Rule::TauFilter => "TauFilter",
            Rule::Oracle => "Oracle",
        }
    }

    /// Whether the rule's shape hypotheses hold for `f`. A rule whose
    /// hypotheses hold decides `n`; otherwise classification moves on.
    pub fn hypotheses_hold(self, f: &Factorization) -> bool {
        let n = f.n();
        match self {
            Rule::TwoOdd => n % 4 == 2,
            Rule::PrimePower => f.distinct_primes() == 1,
            Rule::TwoPrimesLowExp => {
                f.distinct_primes() == 2 && f.factors().iter().all(|&(_, e)| e <= 2)
            }
            Rule::PkQ => {
                matches!(f.factors(), [(_, e1), (_, e2)] if (*e1 == 1) != (*e2 == 1))
            }
            Rule::DominatingPrime => f
                .largest_prime()
                .is_some_and(|p| p as u128 * p as u128 >= n as u128),
            Rule::TwoPrimeDominated => match *f.factors() {
                [(p, x), (q, y)] => dominated(p, x, q, y) || dominated(q, y, p, x),
                _ => false,
            },
            Rule::PQR => f.distinct_primes() == 3 && f.is_squarefree(),
            Rule::TauFilter => !tau_filter_factored(f),
            Rule::Oracle => true,
        }
    }
}

/// `q > p^x` with `y >= 2`.
fn dominated(p: u64, x: u32, q: u64, y: u32) -> bool {
    y >= 2 && p.checked_pow(x).is_some_and(|px| q > px)
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub n: u64,
    pub decision: Decision,
    pub rule: Rule,
    pub witness: Option<DeltaTriple>,
    pub explanation: String,
}

impl ClassVerdict {
    pub fn is_member(&self) -> bool {
        self.decision.is_member()
    }
}

pub fn classify(n: u64) -> Result<ClassVerdict> {
    if n < 2 {
        return Err(Error::TooSmall { min: 2, got: n });
    }
    let f = factorize(n)?;
    let rule = Rule::ORDER
        .into_iter()
        .find(|r| r.hypotheses_hold(&f))
        .expect("the oracle rule always applies");

    let (decision, explanation) = match rule {
        Rule::TwoOdd => (Decision::NonMember, format!("{n} = 2 * {} with the cofactor odd", n / 2)),
        Rule::PrimePower => {
            let (p, k) = f.factors()[0];
            (Decision::NonMember, format!("{n} = {p}^{k} is a prime power"))
        }
        Rule::TwoPrimesLowExp => (
            Decision::NonMember,
            format!("{n} = {} has two primes with exponents at most 2", render(&f)),
        ),
        Rule::PkQ => {
            let (p, k, q) = pkq_shape(&f);
            let member = pkq_member(p, k, q)?;
            let verb = if member { "is" } else { "is not" };
            (
                if member { Decision::Member } else { Decision::NonMember },
                format!("{n} = {p}^{k} * {q} {verb} of the form 2^(2h+1) q with q in {{3, 5}}"),
            )
        }
        Rule::DominatingPrime => {
            let p = f.largest_prime().expect("n >= 2");
            (
                Decision::NonMember,
                format!("{n} = {p} * {} with the prime {p} >= {}", n / p, n / p),
            )
        }
        Rule::TwoPrimeDominated => {
            let [(p, x), (q, y)] = *f.factors() else { unreachable!() };
            let (small, big) = if dominated(p, x, q, y) {
                ((p, x), (q, y))
            } else {
                ((q, y), (p, x))
            };
            (
                Decision::NonMember,
                format!(
                    "{n} = {}^{} * {}^{} with {} > {}^{} and exponent {} >= 2",
                    small.0, small.1, big.0, big.1, big.0, small.0, small.1, big.1
                ),
            )
        }
        Rule::PQR => {
            let [(p, _), (q, _), (r, _)] = *f.factors() else { unreachable!() };
            let member = pqr_member(p, q, r)?;
            let verb = if member { "satisfies" } else { "fails" };
            (
                if member { Decision::Member } else { Decision::NonMember },
                format!("{n} = {p} * {q} * {r} {verb} the three-prime characterization"),
            )
        }
        Rule::TauFilter => (
            Decision::NonMember,
            format!("tau({n}) = {} is not 12 and not a composite >= 15", f.tau()),
        ),
        Rule::Oracle => {
            if has_delta_factored(&f) {
                (Decision::OracleMember, "no rule applies; the difference sets intersect".into())
            } else {
                (Decision::OracleNonMember, "no rule applies; the difference sets are disjoint".into())
            }
        }
    };

    let witness = if decision.is_member() {
        let first = delta_triples_factored(&f)?.into_iter().next();
        if first.is_none() {
            return Err(Error::Falsified(format!("rule {rule} declared {n} a member without a triple")));
        }
        first
    } else {
        None
    };

    if cfg!(debug_assertions) && rule != Rule::Oracle && decision.is_member() != has_delta_factored(&f) {
        return Err(Error::Falsified(format!("rule {rule} disagrees with the oracle on {n}")));
    }

    Ok(ClassVerdict { n, decision, rule, witness, explanation })
}

fn render(f: &Factorization) -> String {
    f.factors()
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// `(p, k, q)` with `n = p^k q`; only called when the PkQ shape holds.
fn pkq_shape(f: &Factorization) -> (u64, u32, u64) {
    match *f.factors() {
        [(p, k), (q, 1)] if k != 1 => (p, k, q),
        [(q, 1), (p, k)] => (p, k, q),
        _ => unreachable!("not of the form p^k q"),
    }
}

/// Membership of `p^k q`: exactly `p = 2`, `q` in `{3, 5}`, `k` odd and `>= 3`.
pub fn pkq_member(p: u64, k: u32, q: u64) -> Result<bool> {
    for v in [p, q] {
        if !is_prime(v) {
            return Err(Error::NotPrime(v));
        }
    }
    Ok(p == 2 && (q == 3 || q == 5) && k % 2 == 1 && k >= 3)
}

/// Membership of `pqr` for primes `p < q < r`.
pub fn pqr_member(p: u64, q: u64, r: u64) -> Result<bool> {
    for v in [p, q, r] {
        if !is_prime(v) {
            return Err(Error::NotPrime(v));
        }
    }
    if !(p < q && q < r) {
        return Err(Error::Invalid(format!("primes must be increasing, got ({p}, {q}, {r})")));
    }
    let (p, q, r) = (p as u128, q as u128, r as u128);
    Ok((r - p + 1) * (q - p + 1) == p * p - p + 1
        || (q, r) == (p + 2, 2 * p + 1)
        || (q, r) == (2 * p - 1, 3 * p - 2))
}

fn admissible_tau(t: u64) -> bool {
    t == 12 || (t >= 15 && !is_prime(t))
}

/// `false` means `n` is certainly not a member; `true` is inconclusive.
pub fn tau_filter(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::TooSmall { min: 2, got: n });
    }
    Ok(tau_filter_factored(&factorize(n)?))
}

fn tau_filter_factored(f: &Factorization) -> bool {
    let n = f.n();
    let pqr = f.distinct_primes() == 3 && f.is_squarefree();
    n == 24 || n == 40 || pqr || admissible_tau(f.tau())
}
