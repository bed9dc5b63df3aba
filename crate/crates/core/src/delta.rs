//! The Δ property: complementary-divisor difference sets, Δ-triples,
//! membership, Δ-primitivity and the structural identities around them.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, factorize, gcd, narrow, perfect_square_root, Factorization, CEILING};
use crate::error::{Error, Result};

fn require_at_least_two(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall { min: 2, got: n });
    }
    arith::check_range(n)
}

/// `D*_n` and `D+_n` for one `n`, both ascending and duplicate-free.
///
/// `dstar` holds `|a - b|` over complementary divisor pairs `ab = n`;
/// `dplus` holds every sum `s + t` of nonzero elements of `dstar`, with
/// `s = t` allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorDiffSets {
    pub n: u64,
    pub dstar: Vec<u64>,
    pub dplus: Vec<u64>,
}

impl DivisorDiffSets {
    pub fn intersection(&self) -> Vec<u64> {
        self.dstar
            .iter()
            .copied()
            .filter(|c| self.dplus.binary_search(c).is_ok())
            .collect()
    }

    pub fn has_delta(&self) -> bool {
        !self.intersection().is_empty()
    }
}

/// Differences `n/d - d` for divisors `d <= sqrt(n)`, ascending.
fn complementary_differences(f: &Factorization) -> Vec<u64> {
    let n = f.n();
    let mut diffs: Vec<u64> = f
        .divisors()
        .into_iter()
        .take_while(|&d| d <= n / d)
        .map(|d| n / d - d)
        .collect();
    diffs.reverse();
    diffs
}

pub fn divisor_diff_sets(n: u64) -> Result<DivisorDiffSets> {
    require_at_least_two(n)?;
    let dstar = complementary_differences(&factorize(n)?);
    let nonzero: Vec<u64> = dstar.iter().copied().filter(|&d| d > 0).collect();
    let mut dplus = Vec::with_capacity(nonzero.len() * (nonzero.len() + 1) / 2);
    for (i, &s) in nonzero.iter().enumerate() {
        for &t in &nonzero[i..] {
            dplus.push(s + t);
        }
    }
    dplus.sort_unstable();
    dplus.dedup();
    Ok(DivisorDiffSets { n, dstar, dplus })
}

/// Decides `D*_n ∩ D+_n ≠ ∅` without materializing `D+_n`: for each
/// difference, a two-pointer sweep looks for a pair of nonzero differences
/// summing to it.
pub fn has_delta(n: u64) -> Result<bool> {
    require_at_least_two(n)?;
    Ok(has_delta_factored(&factorize(n)?))
}

pub(crate) fn has_delta_factored(f: &Factorization) -> bool {
    let diffs = complementary_differences(f);
    let nonzero = match diffs.first() {
        Some(0) => &diffs[1..],
        _ => &diffs[..],
    };
    nonzero.iter().any(|&target| {
        let (mut lo, mut hi) = (0usize, nonzero.len() - 1);
        while lo <= hi {
            let sum = nonzero[lo] + nonzero[hi];
            match sum.cmp(&target) {
                std::cmp::Ordering::Equal => return true,
                std::cmp::Ordering::Less => lo += 1,
                std::cmp::Ordering::Greater => {
                    if hi == 0 {
                        break;
                    }
                    hi -= 1;
                }
            }
        }
        false
    })
}

/// A certified Δ-triple `(x, y, z)` for `n`.
///
/// Construction checks divisibility, `1 < x < y <= z < sqrt(n)` and the
/// defining identity, so every value of this type is valid for its `n`.
/// Ordering is lexicographic in `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DeltaTriple {
    x: u64,
    y: u64,
    z: u64,
    n: u64,
}

/// Checks the Δ-triple conditions using exact division, which never
/// overflows once divisibility holds.
pub fn is_delta_triple(n: u64, x: u64, y: u64, z: u64) -> bool {
    1 < x
        && x < y
        && y <= z
        && n % x == 0
        && n % y == 0
        && n % z == 0
        && z < n / z
        && n / x - x == (n / y - y) + (n / z - z)
}

impl DeltaTriple {
    pub fn new(n: u64, x: u64, y: u64, z: u64) -> Result<Self> {
        if !is_delta_triple(n, x, y, z) {
            return Err(Error::NotDeltaTriple { n, x, y, z });
        }
        let triple = DeltaTriple { n, x, y, z };
        // The cross-multiplied form must agree with the division form.
        let (lhs, rhs) = triple.cross_products()?;
        if lhs != rhs {
            return Err(Error::Falsified(format!(
                "({x}, {y}, {z}) satisfies the divided identity for {n} but not the product form"
            )));
        }
        Ok(triple)
    }

    /// The unique `n` a triple can belong to, solved from the product form.
    pub fn recover(x: u64, y: u64, z: u64) -> Result<Self> {
        let bad = || Error::Invalid(format!("({x}, {y}, {z}) is not a delta-triple for any n"));
        if !(1 < x && x < y && y <= z) {
            return Err(bad());
        }
        let (xx, yy, zz) = (x as i128, y as i128, z as i128);
        let den = xx * yy + xx * zz - yy * zz;
        let num = (xx * yy * zz)
            .checked_mul(zz + yy - xx)
            .ok_or(Error::Overflow("triple recovery"))?;
        if den <= 0 || num % den != 0 {
            return Err(bad());
        }
        let n = narrow((num / den) as u128)?;
        DeltaTriple::new(n, x, y, z).map_err(|_| bad())
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn x(&self) -> u64 {
        self.x
    }
    pub fn y(&self) -> u64 {
        self.y
    }
    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }

    /// `y == z`.
    pub fn is_duplicated(&self) -> bool {
        self.y == self.z
    }

    /// Both sides of `(xy + xz - yz) n = xyz (z + y - x)`, in 128 bits.
    pub fn cross_products(&self) -> Result<(i128, i128)> {
        const WHAT: &str = "delta-triple cross products";
        let (n, x, y, z) = (
            self.n as i128,
            self.x as i128,
            self.y as i128,
            self.z as i128,
        );
        let lhs = (x * y + x * z - y * z)
            .checked_mul(n)
            .ok_or(Error::Overflow(WHAT))?;
        let rhs = (x * y)
            .checked_mul(z)
            .and_then(|v| v.checked_mul(z + y - x))
            .ok_or(Error::Overflow(WHAT))?;
        Ok((lhs, rhs))
    }

    /// `(n/x - x, n/y - y, n/z - z)`, the three differences involved.
    pub fn differences(&self) -> (u64, u64, u64) {
        let n = self.n;
        (n / self.x - self.x, n / self.y - self.y, n / self.z - self.z)
    }
}

impl std::fmt::Display for DeltaTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// All Δ-triples of `n` in lexicographic order.
///
/// For each pair `x < y` of divisors below `sqrt(n)` the third component is
/// forced: `n/z - z` must equal `(n/x - x) - (n/y - y)`, and `d -> n/d - d`
/// is strictly decreasing, so a binary search over the remaining divisors
/// finds it or rules it out.
pub fn delta_triples(n: u64) -> Result<Vec<DeltaTriple>> {
    require_at_least_two(n)?;
    delta_triples_factored(&factorize(n)?)
}

pub(crate) fn delta_triples_factored(f: &Factorization) -> Result<Vec<DeltaTriple>> {
    let n = f.n();
    let small: Vec<u64> = f
        .divisors()
        .into_iter()
        .filter(|&d| d > 1 && d < n / d)
        .collect();
    let diff = |d: u64| n / d - d;
    let mut out = Vec::new();
    for (i, &x) in small.iter().enumerate() {
        for (j, &y) in small.iter().enumerate().skip(i + 1) {
            let target = diff(x) - diff(y);
            let tail = &small[j..];
            if let Ok(k) = tail.binary_search_by(|&z| diff(z).cmp(&target).reverse()) {
                out.push(DeltaTriple::new(n, x, y, tail[k])?);
            }
        }
    }
    Ok(out)
}

/// Members of N(Δ) in `2..=limit`, ascending. The scan runs in parallel.
pub fn delta_set(limit: u64) -> Vec<u64> {
    let limit = limit.min(CEILING);
    if limit < 2 {
        return Vec::new();
    }
    (2..=limit)
        .into_par_iter()
        .filter(|&n| has_delta(n).unwrap_or(false))
        .collect()
}

/// `n = alpha^2 m` with `m` Δ-primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimitiveDecomposition {
    pub n: u64,
    pub alpha: u64,
    pub m: u64,
}

/// A member with no split `n = alpha^2 m`, `alpha >= 2`, `m` a member.
pub fn is_primitive(n: u64) -> Result<bool> {
    require_at_least_two(n)?;
    let f = factorize(n)?;
    if !has_delta_factored(&f) {
        return Ok(false);
    }
    for alpha in f.square_divisor_roots().into_iter().skip(1) {
        let m = n / (alpha * alpha);
        if m >= 2 && has_delta(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every way of writing a member `n` as `alpha^2 m` with `m` Δ-primitive,
/// ordered by the primitive part `m`.
pub fn primitive_decompositions(n: u64) -> Result<Vec<PrimitiveDecomposition>> {
    require_at_least_two(n)?;
    let f = factorize(n)?;
    if !has_delta_factored(&f) {
        return Err(Error::NotMember(n));
    }
    let mut out = Vec::new();
    for alpha in f.square_divisor_roots() {
        let m = n / (alpha * alpha);
        if m >= 2 && is_primitive(m)? {
            out.push(PrimitiveDecomposition { n, alpha, m });
        }
    }
    out.sort_by_key(|d| (d.m, d.alpha));
    if out.is_empty() {
        return Err(Error::Falsified(format!(
            "member {n} has no square-times-primitive decomposition"
        )));
    }
    Ok(out)
}

/// Every Δ-triple having `t` as a component, each carrying the unique `n`
/// it determines.
///
/// The search runs over `u = y - x` and `v = z - x`. Admissible triples
/// satisfy `1 <= u <= x - 1`, `u <= v` and `uv <= x^2 - 1`, and then
/// `n = x (x+u) (x+v) (x+u+v) / (x^2 - uv)` whenever that quotient is an
/// integer divisible by all three components.
pub fn triples_with_component(t: u64) -> Result<Vec<DeltaTriple>> {
    if t < 2 {
        return Err(Error::TooSmall { min: 2, got: t });
    }
    if t > 3_000_000 {
        return Err(Error::Invalid(format!(
            "component {t} too large: every candidate n would exceed the ceiling"
        )));
    }
    let mut found = BTreeSet::new();
    let mut consider = |x: u64, u: u64, v: u64| -> Result<()> {
        let (xx, uu, vv) = (x as u128, u as u128, v as u128);
        let den = xx * xx - uu * vv;
        let num = xx * (xx + uu) * (xx + vv) * (xx + uu + vv);
        if num % den != 0 {
            return Ok(());
        }
        let n128 = num / den;
        let (y, z) = (x + u, x + v);
        let (yy, zz) = (y as u128, z as u128);
        if n128 % xx != 0 || n128 % yy != 0 || n128 % zz != 0 || zz * zz >= n128 {
            return Ok(());
        }
        let n = narrow(n128)?;
        found.insert(DeltaTriple::new(n, x, y, z)?);
        Ok(())
    };
    for x in 2..=t {
        let cap = x * x - 1;
        if x == t {
            for u in 1..x {
                for v in u..=cap / u {
                    consider(x, u, v)?;
                }
            }
        } else {
            let d = t - x;
            // y == t
            if d < x {
                for v in d..=cap / d {
                    consider(x, d, v)?;
                }
            }
            // z == t
            if d <= cap {
                for u in 1..x.min(d + 1) {
                    if u * d <= cap {
                        consider(x, u, d)?;
                    }
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Output of [`descent_witness`] for a duplicated triple `(x, y, y)`.
///
/// With `d = gcd(x, y)`, `x = da`, `y = db`: `(2a - b) n = d^2 ab (2b - a)`,
/// `gcd(2a - b, ab(2b - a))` divides 6, and `(2a - b) / gcd(2a - b, 6)`
/// divides `d^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DescentWitness {
    pub n: u64,
    pub x: u64,
    pub y: u64,
    pub d: u64,
    pub a: u64,
    pub b: u64,
}

pub fn descent_witness(n: u64, x: u64, y: u64) -> Result<DescentWitness> {
    DeltaTriple::new(n, x, y, y)?;
    let d = gcd(x, y);
    let (a, b) = (x / d, y / d);
    let witness = DescentWitness { n, x, y, d, a, b };

    let (a128, b128, d128) = (a as i128, b as i128, d as i128);
    let lhs = (2 * a128 - b128) * n as i128;
    let rhs = d128 * d128 * a128 * b128 * (2 * b128 - a128);
    if lhs != rhs {
        return Err(Error::Falsified(format!(
            "descent identity for n = {n}, (x, y) = ({x}, {y}): {lhs} != {rhs}"
        )));
    }
    // 1 < y/x < 2 makes both 2a - b and 2b - a positive.
    let left = 2 * a - b;
    let right = u128::from(a) * u128::from(b) * u128::from(2 * b - a);
    let g = num_integer::gcd(u128::from(left), right);
    if 6 % g != 0 {
        return Err(Error::Falsified(format!(
            "gcd(2a - b, ab(2b - a)) = {g} does not divide 6 for n = {n}"
        )));
    }
    if (d * d) % (left / gcd(left, 6)) != 0 {
        return Err(Error::Falsified(format!(
            "(2a - b)/gcd(2a - b, 6) does not divide d^2 for n = {n}"
        )));
    }
    Ok(witness)
}

/// The two regimes of a Δ-triple: `y = z` and `y < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Regime {
    Duplicated,
    Generic,
}

/// The largest `n` admitting a triple with smallest component `x` in the
/// given regime, together with the triple attaining it.
///
/// Duplicated: `x(2x-1)(3x-2)` via `(x, 2x-1, 2x-1)`. Generic:
/// `x^2 (x+1)^2 (x^2+x-1)` via `(x, x+1, x^2+x-1)`.
pub fn extremal_bound(x: u64, regime: Regime) -> Result<(u64, DeltaTriple)> {
    if x < 2 {
        return Err(Error::TooSmall { min: 2, got: x });
    }
    const WHAT: &str = "extremal bound";
    let xx = x as u128;
    let (n, y, z) = match regime {
        Regime::Duplicated => {
            let y = 2 * xx - 1;
            let n = xx * y * (3 * xx - 2);
            (n, y, y)
        }
        Regime::Generic => {
            let z = xx
                .checked_mul(xx + 1)
                .ok_or(Error::Overflow(WHAT))?
                - 1;
            let n = (xx * (xx + 1))
                .checked_mul(xx * (xx + 1))
                .and_then(|v| v.checked_mul(z))
                .ok_or(Error::Overflow(WHAT))?;
            (n, xx + 1, z)
        }
    };
    let n = narrow(n)?;
    let triple = DeltaTriple::new(n, x, y as u64, z as u64)?;
    Ok((n, triple))
}

/// `(y - x + 1)(z - x + 1) == x^2 - x + 1`; for a Δ-triple this holds exactly
/// when `n = xyz`.
pub fn xyz_identity_holds(x: u64, y: u64, z: u64) -> bool {
    let (x, y, z) = (x as i128, y as i128, z as i128);
    (y - x + 1) * (z - x + 1) == x * x - x + 1
}

/// Two representations `a^2 m = b^2 l = n` of one square built from two
/// distinct Δ-primitive squares `m` and `l`, scaled by `k`.
pub fn double_representation(m: u64, l: u64, k: u64) -> Result<(u64, u64, u64)> {
    if m == l {
        return Err(Error::Invalid("the two primitive squares must differ".into()));
    }
    if k == 0 {
        return Err(Error::TooSmall { min: 1, got: 0 });
    }
    let mut roots = [0u64; 2];
    for (slot, v) in roots.iter_mut().zip([m, l]) {
        *slot = perfect_square_root(v)
            .ok_or_else(|| Error::Invalid(format!("{v} is not a perfect square")))?;
        if v < 2 || !is_primitive(v)? {
            return Err(Error::Invalid(format!("{v} is not delta-primitive")));
        }
    }
    let [rm, rl] = roots;
    let g = gcd(rm, rl);
    let a = (k as u128) * (rl / g) as u128;
    let b = (k as u128) * (rm / g) as u128;
    let n = a
        .checked_mul(a)
        .and_then(|v| v.checked_mul(m as u128))
        .ok_or(Error::Overflow("double representation"))?;
    debug_assert_eq!(n, b * b * l as u128);
    Ok((narrow(a)?, narrow(b)?, narrow(n)?))
}

/// Δ-primitives up to `limit` whose square-free part is `s`.
pub fn primitives_with_squarefree_part(s: u64, limit: u64) -> Result<Vec<u64>> {
    if !factorize(s)?.is_squarefree() {
        return Err(Error::NotSquareFree(s));
    }
    let limit = limit.min(CEILING);
    let mut out = Vec::new();
    let mut j = 1u64;
    while let Some(n) = j
        .checked_mul(j)
        .and_then(|jj| jj.checked_mul(s))
        .filter(|&n| n <= limit)
    {
        if n >= 2 && is_primitive(n)? {
            out.push(n);
        }
        j += 1;
    }
    Ok(out)
}

/// Membership and primitivity for every `n <= limit`, built by one
/// parallel scan plus a square-multiple sieve.
#[derive(Debug, Clone)]
pub struct MembershipTable {
    member: Vec<bool>,
    primitive: Vec<bool>,
}

impl MembershipTable {
    pub fn build(limit: u64) -> Self {
        let limit = limit.min(CEILING) as usize;
        let member: Vec<bool> = (0..=limit)
            .into_par_iter()
            .map(|n| n >= 2 && has_delta(n as u64).unwrap_or(false))
            .collect();
        let mut primitive = member.clone();
        for m in 2..=limit {
            if !member[m] {
                continue;
            }
            let mut alpha = 2usize;
            while let Some(n) = (alpha * alpha).checked_mul(m).filter(|&n| n <= limit) {
                primitive[n] = false;
                alpha += 1;
            }
        }
        MembershipTable { member, primitive }
    }

    pub fn limit(&self) -> u64 {
        (self.member.len() - 1) as u64
    }

    pub fn contains(&self, n: u64) -> bool {
        self.member.get(n as usize).copied().unwrap_or(false)
    }

    pub fn is_primitive(&self, n: u64) -> bool {
        self.primitive.get(n as usize).copied().unwrap_or(false)
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(n, _)| n as u64)
    }

    /// Same contract as [`primitive_decompositions`], answered from the table.
    pub fn decompositions(&self, n: u64) -> Vec<PrimitiveDecomposition> {
        if !self.contains(n) {
            return Vec::new();
        }
        let mut out: Vec<_> = (1u64..)
            .take_while(|a| a * a <= n)
            .filter(|a| n % (a * a) == 0 && self.is_primitive(n / (a * a)))
            .map(|alpha| PrimitiveDecomposition {
                n,
                alpha,
                m: n / (alpha * alpha),
            })
            .collect();
        out.sort_by_key(|d| (d.m, d.alpha));
        out
    }
}
