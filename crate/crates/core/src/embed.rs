//! Solvers for the embedding problems of L = Q(√d, √e): the H8 case through
//! orthogonal three-square representations, and the D4 cases through a
//! Legendre conic solved within Holzer's bounds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::factor::factorize;
use crate::arith::{fmt_rat, int, Biquad, BiquadElt, Rat};
use crate::brauer::{is_trivial, ramified_places, Place};
use crate::cohom::{galois_type_of_gamma, named_class, CohClass};
use crate::error::{Error, Result};

pub const DEFAULT_HEIGHT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseId {
    A,
    B,
    C,
    D,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::A, CaseId::B, CaseId::C, CaseId::D];

    pub fn parse(s: &str) -> Result<CaseId> {
        match s.trim() {
            "A" | "a" => Ok(CaseId::A),
            "B" | "b" => Ok(CaseId::B),
            "C" | "c" => Ok(CaseId::C),
            "D" | "d" => Ok(CaseId::D),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }

    /// The class of L(√t)/Q for this case.
    pub fn expected_class(self) -> CohClass {
        let name = match self {
            CaseId::A => "h0",
            CaseId::B => "h_d",
            CaseId::C => "h_e",
            CaseId::D => "h_de",
        };
        named_class(name).expect("built-in class name")
    }

    /// The conic roles (D, E) for D = E·y² − x², with t = E·y + x√E.
    fn roles(self, d: i64, e: i64) -> Option<(i64, i64)> {
        match self {
            CaseId::A => None,
            CaseId::B => Some((d, e)),
            CaseId::C => Some((e, d)),
            CaseId::D => Some((d * e, d)),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The data that produced t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// v, w ∈ Q³ with |v|² = d, |w|² = e, v·w = 0.
    ThreeSquares { v: [Rat; 3], w: [Rat; 3] },
    /// x, y ∈ Q with D = E·y² − x².
    Conic { x: Rat, y: Rat },
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        match self {
            Witness::ThreeSquares { v, w } => {
                m.serialize_entry("v", &v.each_ref().map(fmt_rat))?;
                m.serialize_entry("w", &w.each_ref().map(fmt_rat))?;
            }
            Witness::Conic { x, y } => {
                m.serialize_entry("x", &fmt_rat(x))?;
                m.serialize_entry("y", &fmt_rat(y))?;
            }
        }
        m.end()
    }
}

/// The extensions L(√(q·t)), q ∈ Q×, solving the embedding problem of `case`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaFamily {
    t: BiquadElt,
    case: CaseId,
    witness: Witness,
}

impl GammaFamily {
    /// Checks that L(√t)/Q has the class belonging to `case`.
    pub fn new(t: BiquadElt, case: CaseId, witness: Witness) -> Result<GammaFamily> {
        let got = galois_type_of_gamma(&t)?;
        if got != Some(case.expected_class()) {
            return Err(Error::Internal(format!(
                "t = {t} has type {} but case {case} needs {}",
                got.map_or("non-Galois", |c| c.name()),
                case.expected_class()
            )));
        }
        Ok(GammaFamily { t, case, witness })
    }

    pub fn t(&self) -> &BiquadElt {
        &self.t
    }

    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn member(&self, q: &Rat) -> Result<BiquadElt> {
        if q.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.t.scale(q))
    }
}

pub fn case_solvable(case: CaseId, d: i64, e: i64) -> Result<bool> {
    let l = Biquad::new(d, e)?;
    let (d, e) = (int(l.d()), int(l.e()));
    match case {
        CaseId::A => Ok(ramified_places(&-d.clone(), &-e.clone())?
            .into_iter()
            .eq([Place::Finite(BigInt::from(2)), Place::Infinite])),
        CaseId::B => is_trivial(&-d, &e),
        CaseId::C => is_trivial(&d, &-e),
        CaseId::D => is_trivial(&d, &-(&d * &e)),
    }
}

/// Integer triples with a² + b² + c² = n, lexicographically descending.
fn three_square_reps(n: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    let r = n.sqrt();
    for a in (-r..=r).rev() {
        let ra = n - a * a;
        let rb = ra.sqrt();
        for b in (-rb..=rb).rev() {
            let rc = ra - b * b;
            let c = rc.sqrt();
            if c * c == rc {
                out.push([a, b, c]);
                if c != 0 {
                    out.push([a, b, -c]);
                }
            }
        }
    }
    out
}

/// v, w ∈ Q³ with |v|² = d, |w|² = e and v·w = 0, searching common
/// denominators N = 1, …, height and returning the lexicographically greatest
/// pair (V, W) of integer numerators for the first N that works.
pub fn three_squares_orthogonal(d: &Rat, e: &Rat, height: u64) -> Result<Option<([Rat; 3], [Rat; 3])>> {
    if !d.is_positive() || !e.is_positive() {
        return Err(Error::InvalidInput("d and e must be positive".into()));
    }
    for n in 1..=height {
        let n2 = Rat::from_integer(BigInt::from(n) * BigInt::from(n));
        let (dn, en) = (d * &n2, e * &n2);
        if !dn.is_integer() || !en.is_integer() {
            continue;
        }
        let to_i64 = |q: &Rat| {
            q.to_integer()
                .to_i64()
                .ok_or(Error::SolverBoundExceeded { height })
        };
        let vs = three_square_reps(to_i64(&dn)?);
        if vs.is_empty() {
            continue;
        }
        let ws = three_square_reps(to_i64(&en)?);
        for v in &vs {
            if let Some(w) = ws.iter().find(|w| v[0] * w[0] + v[1] * w[1] + v[2] * w[2] == 0) {
                let nn = n as i64;
                let scale = |x: &[i64; 3]| x.map(|xi| Rat::new(BigInt::from(xi), BigInt::from(nn)));
                return Ok(Some((scale(v), scale(w))));
            }
        }
    }
    Ok(None)
}

/// t = 1 + v₁/√d + w₃/√e + (v₁w₃ − v₃w₁)/√(de), generating the H8 extensions.
pub fn h8_gamma(d: i64, e: i64, height: u64) -> Result<GammaFamily> {
    let l = Biquad::new(d, e)?;
    if d < 0 || e < 0 {
        return Err(Error::InvalidInput(format!(
            "case A needs d, e > 0 (got d = {d}, e = {e})"
        )));
    }
    if !case_solvable(CaseId::A, d, e)? {
        return Err(Error::Unsolvable(format!("case A is not solvable for d = {d}, e = {e}")));
    }
    let (dq, eq) = (int(d), int(e));
    let (v, w) = three_squares_orthogonal(&dq, &eq, height)?.ok_or(Error::SolverBoundExceeded { height })?;
    let cross = &v[0] * &w[2] - &v[2] * &w[0];
    let t = l.elt([Rat::one(), &v[0] / &dq, &w[2] / &eq, cross / (&dq * &eq)]);
    GammaFamily::new(t, CaseId::A, Witness::ThreeSquares { v, w })
}

/// Reduces aX² + bY² + cZ² to squarefree pairwise coprime coefficients.
/// Returns the new coefficients and, per variable, the factor by which a
/// solution of the reduced form must be divided to solve the original.
fn legendre_reduce(a: i128, b: i128, c: i128) -> Result<([i128; 3], [i128; 3])> {
    let mut k = [a, b, c];
    let mut div = [1i128; 3];
    loop {
        for i in 0..3 {
            let (sf, root) = squarefree_i128(k[i])?;
            k[i] = sf;
            div[i] *= root;
        }
        let g = k[0].gcd(&k[1]).gcd(&k[2]);
        if g > 1 {
            for x in &mut k {
                *x /= g;
            }
            continue;
        }
        let mut changed = false;
        for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let g = k[i].gcd(&k[j]);
            if g > 1 {
                // multiply through by g and absorb it into the shared variables
                k[i] /= g;
                k[j] /= g;
                k[l] *= g;
                div[i] *= g;
                div[j] *= g;
                changed = true;
                break;
            }
        }
        if !changed {
            return Ok((k, div));
        }
    }
}

/// n = s·r² with s squarefree.
fn squarefree_i128(n: i128) -> Result<(i128, i128)> {
    let mut s = n.signum();
    let mut r = 1i128;
    for (p, k) in factorize(&BigInt::from(n))? {
        let p = p.to_i128().expect("prime factor of an i128");
        r *= p.pow(k / 2);
        if k % 2 == 1 {
            s *= p;
        }
    }
    Ok((s, r))
}

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Largest number of candidate pairs [`conic_point`] will try.
pub const CONIC_SEARCH_BUDGET: u128 = 1 << 34;

/// Nontrivial zero of the reduced form within Holzer's bounds, scanning the
/// two smallest ranges and solving for the remaining variable.
fn holzer_search(k: [i128; 3]) -> Result<Option<[i128; 3]>> {
    let bounds = [(k[1] * k[2]).abs().sqrt(), (k[0] * k[2]).abs().sqrt(), (k[0] * k[1]).abs().sqrt()];
    let solve = (0..3).max_by_key(|&i| (bounds[i], i)).expect("three variables");
    let (i, j) = match solve {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let work = (bounds[i] as u128 + 1) * (bounds[j] as u128 + 1);
    if work > CONIC_SEARCH_BUDGET {
        return Err(Error::SolverBoundExceeded { height: u64::try_from(bounds[i].max(bounds[j])).unwrap_or(u64::MAX) });
    }
    for xi in 0..=bounds[i] {
        for xj in 0..=bounds[j] {
            if xi == 0 && xj == 0 {
                continue;
            }
            let rest = -(k[i] * xi * xi + k[j] * xj * xj);
            if rest % k[solve] != 0 {
                continue;
            }
            if let Some(xs) = isqrt_exact(rest / k[solve]) {
                let mut sol = [0; 3];
                sol[i] = xi;
                sol[j] = xj;
                sol[solve] = xs;
                return Ok(Some(sol));
            }
        }
    }
    Ok(None)
}

/// A primitive nontrivial integer zero of aX² + bY² + cZ², or `None` when the
/// form is anisotropic over Q.
pub fn conic_point(a: i64, b: i64, c: i64) -> Result<Option<[BigInt; 3]>> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::ZeroInput);
    }
    let local = is_trivial(&int(-a * c), &int(-b * c))?;
    let definite = (a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0);
    let product = i128::from(a)
        .checked_mul(i128::from(b))
        .and_then(|x| x.checked_mul(i128::from(c)))
        .filter(|x| x.unsigned_abs() < 1 << 100)
        .ok_or_else(|| Error::InvalidInput("conic coefficients too large".into()))?;
    debug_assert!(product != 0);
    let found = if definite {
        None
    } else {
        let (k, div) = legendre_reduce(a.into(), b.into(), c.into())?;
        holzer_search(k)?.map(|sol| {
            // original variable i is sol[i] / div[i]
            let l = div.iter().fold(1i128, |acc, x| acc.lcm(x));
            let mut out = [0i128; 3];
            for i in 0..3 {
                out[i] = sol[i] * (l / div[i]);
            }
            let g = out.iter().fold(0i128, |acc, x| acc.gcd(x));
            out.map(|x| BigInt::from(x / g))
        })
    };
    if found.is_some() != local {
        return Err(Error::Internal(format!(
            "conic {a}X^2 + {b}Y^2 + {c}Z^2: search and local symbols disagree"
        )));
    }
    if let Some(s) = &found {
        let q = BigInt::from(a) * &s[0] * &s[0] + BigInt::from(b) * &s[1] * &s[1] + BigInt::from(c) * &s[2] * &s[2];
        if !q.is_zero() {
            return Err(Error::Internal(format!("conic point {s:?} is not a zero")));
        }
    }
    Ok(found)
}

/// t = E·y + x√E from a solution of D = E·y² − x², for cases B, C and D.
pub fn d4_gamma(case: CaseId, d: i64, e: i64) -> Result<GammaFamily> {
    let l = Biquad::new(d, e)?;
    let (big_d, big_e) = case
        .roles(d, e)
        .ok_or_else(|| Error::InvalidInput("case A is not a D4 case".into()))?;
    if !case_solvable(case, d, e)? {
        return Err(Error::Unsolvable(format!("case {case} is not solvable for d = {d}, e = {e}")));
    }
    // X² − E·Y² + D·Z² = 0 with x = X/Z, y = Y/Z
    let [xx, yy, zz] = conic_point(1, -big_e, big_d)?
        .ok_or_else(|| Error::Internal(format!("no conic point although case {case} is solvable")))?;
    if zz.is_zero() {
        return Err(Error::Internal("conic point at infinity".into()));
    }
    let x = Rat::new(xx, zz.clone());
    let y = Rat::new(yy, zz);
    let sqrt_big_e = if case == CaseId::B { l.sqrt_e() } else { l.sqrt_d() };
    let t = &l.from_rat(int(big_e) * &y) + &sqrt_big_e.scale(&x);
    GammaFamily::new(t, case, Witness::Conic { x, y })
}

/// Dispatches to [`h8_gamma`] or [`d4_gamma`].
pub fn gamma_for_case(case: CaseId, d: i64, e: i64, height: u64) -> Result<GammaFamily> {
    match case {
        CaseId::A => h8_gamma(d, e, height),
        _ => d4_gamma(case, d, e),
    }
}
