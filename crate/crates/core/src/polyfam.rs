//! Cubic families `n(x) = (ax + b)(2ax + c)(alpha x + beta)` whose values
//! are members from some point on, witnessed by the duplicated triple
//! `(ax + b, 2ax + c, 2ax + c)`.

use serde::Serialize;

use crate::arith::{is_perfect_square, narrow};
use crate::delta::{has_delta, is_primitive, DeltaTriple};
use crate::error::{Error, Result};

const N0_SCAN_CAP: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PolyFamily {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub alpha: i64,
    pub beta: i64,
    pub n0: u64,
}

/// Builds the family for `(a, b, c)`.
///
/// Requires `a > 0`, `2b > c` and `(2b - c) | gcd(3a, 2c - b)`. The
/// threshold `n0` is found by scanning `x` upward until the strict chain
/// `1 < ax+b < 2ax+c < sqrt(n(x))` holds and the quadratic
/// `h(x) = (ax+b)(alpha x+beta) - (2ax+c)` is non-decreasing; past that
/// point every condition stays true.
pub fn make_family(a: i64, b: i64, c: i64) -> Result<PolyFamily> {
    if a <= 0 {
        return Err(Error::Invalid(format!("a must be positive, got {a}")));
    }
    if a.abs().max(b.abs()).max(c.abs()) > 1 << 20 {
        return Err(Error::Invalid("coefficients must stay below 2^20 in absolute value".into()));
    }
    let d = 2 * b - c;
    if d <= 0 {
        return Err(Error::Invalid(format!("need 2b > c, got b = {b}, c = {c}")));
    }
    let g = num_integer::gcd(3 * a, 2 * c - b);
    if g % d != 0 {
        return Err(Error::Invalid(format!(
            "2b - c = {d} does not divide gcd(3a, 2c - b) = {g}"
        )));
    }
    let alpha = 3 * a / d;
    let beta = (2 * c - b) / d;

    let mut fam = PolyFamily { a, b, c, alpha, beta, n0: 0 };
    let mut last_fail = 0i64;
    for x in 1..=N0_SCAN_CAP {
        let holds = fam.chain_holds(x);
        if !holds {
            last_fail = x;
        } else if fam.h_slope(x) >= 0 {
            fam.n0 = (last_fail + 1) as u64;
            return Ok(fam);
        }
    }
    Err(Error::Invalid(format!(
        "no threshold found for ({a}, {b}, {c}) below x = {N0_SCAN_CAP}"
    )))
}

impl PolyFamily {
    fn linear(&self, x: i64) -> (i128, i128, i128) {
        let x = x as i128;
        (
            self.a as i128 * x + self.b as i128,
            2 * self.a as i128 * x + self.c as i128,
            self.alpha as i128 * x + self.beta as i128,
        )
    }

    /// `1 < ax+b < 2ax+c` and `(2ax+c)^2 < n(x)`, the latter as `h(x) > 0`.
    fn chain_holds(&self, x: i64) -> bool {
        let (p, q, r) = self.linear(x);
        p > 1 && q > p && p * r - q > 0
    }

    /// `h'(x) = 2 a alpha x + a beta + b alpha - 2a`.
    fn h_slope(&self, x: i64) -> i128 {
        let (a, b, al, be) = (
            self.a as i128,
            self.b as i128,
            self.alpha as i128,
            self.beta as i128,
        );
        2 * a * al * x as i128 + a * be + b * al - 2 * a
    }

    /// The three linear factors at `x`.
    pub fn factors_at(&self, x: i64) -> (i128, i128, i128) {
        self.linear(x)
    }

    /// `n(x)` as an exact integer; errors past the ceiling or when negative.
    pub fn eval(&self, x: i64) -> Result<u64> {
        let (p, q, r) = self.linear(x);
        let v = p
            .checked_mul(q)
            .and_then(|v| v.checked_mul(r))
            .ok_or(Error::Overflow("family value"))?;
        if v < 0 {
            return Err(Error::Invalid(format!("n({x}) = {v} is negative")));
        }
        narrow(v as u128)
    }

    /// The duplicated triple `(ax+b, 2ax+c, 2ax+c)` for `n(x)`, `x >= n0`.
    pub fn witness(&self, x: i64) -> Result<DeltaTriple> {
        if x < self.n0 as i64 {
            return Err(Error::Invalid(format!("x = {x} is below n0 = {}", self.n0)));
        }
        let n = self.eval(x)?;
        let (p, q, _) = self.linear(x);
        DeltaTriple::new(n, p as u64, q as u64, q as u64)
    }
}

/// `(x, n(x))` for `x = n0, ..., n0 + count - 1`, each checked by the oracle
/// and by the explicit witness before being returned.
pub fn family_members(fam: &PolyFamily, count: u64) -> Result<Vec<(u64, u64)>> {
    if count == 0 {
        return Err(Error::TooSmall { min: 1, got: 0 });
    }
    let mut out = Vec::with_capacity(count as usize);
    for x in fam.n0..fam.n0 + count {
        let xi = x as i64;
        let n = fam.eval(xi)?;
        fam.witness(xi).map_err(|e| {
            Error::Falsified(format!("family {:?} at x = {x}: {e}", (fam.a, fam.b, fam.c)))
        })?;
        if !has_delta(n)? {
            return Err(Error::Falsified(format!(
                "family {:?} gives the non-member {n} at x = {x}",
                (fam.a, fam.b, fam.c)
            )));
        }
        out.push((x, n));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquareHit {
    pub x: u64,
    pub n: u64,
    pub primitive: bool,
}

/// Every `x` in `[n0, xmax]` with `n(x)` a perfect square.
pub fn square_scan(fam: &PolyFamily, xmax: u64) -> Result<Vec<SquareHit>> {
    if xmax < fam.n0 {
        return Err(Error::Invalid(format!("xmax = {xmax} is below n0 = {}", fam.n0)));
    }
    let mut out = Vec::new();
    for x in fam.n0..=xmax {
        let n = fam.eval(x as i64)?;
        if is_perfect_square(n) {
            out.push(SquareHit { x, n, primitive: is_primitive(n)? });
        }
    }
    Ok(out)
}

/// The `(a, b, c)` grid with `a` in `1..=amax`, `|b| <= bmax`, and `c`
/// ranging over every admissible choice: `d = 2b - c` must divide
/// `gcd(3a, 2c - b)`, which reduces to `d | 3 gcd(a, b)`.
pub fn family_grid(amax: i64, bmax: i64) -> Vec<PolyFamily> {
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -bmax..=bmax {
            let bound = 3 * num_integer::gcd(a, b);
            for d in (1..=bound).filter(|d| bound % d == 0) {
                if let Ok(fam) = make_family(a, b, 2 * b - d) {
                    out.push(fam);
                }
            }
        }
    }
    out
}

/// Looks for linear `X, Y, Z` in `t`, coefficients bounded by `bound`, that
/// form a triple for `XYZ` at every `t` in `1..=window`. For `n = xyz` the
/// triple condition is `1 < x < y <= z < xy` plus
/// `xy + xz - yz = z + y - x`. Returns the first hit, if any.
pub fn linear_generic_search(bound: i64, window: i64) -> Option<[(i64, i64); 3]> {
    let coeffs: Vec<(i64, i64)> = (-bound..=bound)
        .flat_map(|m| (-bound..=bound).map(move |k| (m, k)))
        .collect();
    let at = |(m, k): (i64, i64), t: i64| m * t + k;
    for &fx in &coeffs {
        if at(fx, 1) < 2 {
            continue;
        }
        for &fy in &coeffs {
            if at(fy, 1) <= at(fx, 1) {
                continue;
            }
            for &fz in &coeffs {
                let ok = (1..=window).all(|t| {
                    let (x, y, z) = (at(fx, t), at(fy, t), at(fz, t));
                    1 < x && x < y && y <= z && z < x * y && x * y + x * z - y * z == z + y - x
                });
                if ok {
                    return Some([fx, fy, fz]);
                }
            }
        }
    }
    None
}
