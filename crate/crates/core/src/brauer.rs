//! Hilbert symbols over Q, quaternion algebras (a, b) and their ramification,
//! and equivalence of ternary diagonal quadratic forms via Hasse–Witt invariants.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factor::{is_prime, prime_divisors};
use crate::arith::{square_class_integer, squarefree_part, Rat};
use crate::error::{Error, Result};

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(BigInt),
    Infinite,
}

impl Place {
    pub fn prime(p: impl Into<BigInt>) -> Result<Place> {
        let p = p.into();
        if !is_prime(&p)? {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    pub fn parse(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinite),
            other => {
                let p: BigInt = other
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("not a place: {other:?}")))?;
                Place::prime(p)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }
}

/// Finite primes in ascending order, then ∞.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(p), Place::Finite(q)) => p.cmp(q),
            (Place::Finite(_), Place::Infinite) => Ordering::Less,
            (Place::Infinite, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinite, Place::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

/// Splits `n = p^k * u` with `p ∤ u`.
fn split_valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut k = 0;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(p);
        if !r.is_zero() {
            return (k, u);
        }
        u = q;
        k += 1;
    }
}

/// Legendre symbol (u/p) for an odd prime p not dividing u.
fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let exp = (p - 1u8) >> 1u32;
    let r = u.mod_floor(p).modpow(&exp, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Hilbert symbol of nonzero integers at a finite prime.
fn hilbert_at_prime(a: &BigInt, b: &BigInt, p: &BigInt) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if p == &BigInt::from(2) {
        let residue = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u8().expect("residue mod 8");
        let eps = |r: u8| u32::from(r % 4 == 3);
        let omega = |r: u8| u32::from(r == 3 || r == 5);
        let (ru, rv) = (residue(&u), residue(&v));
        let exponent = eps(ru) * eps(rv) + alpha * omega(rv) + beta * omega(ru);
        if exponent % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s: i8 = 1;
        let half = ((p - 1u8) >> 1u32).is_odd();
        if (alpha * beta) % 2 == 1 && half {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

/// The local Hilbert symbol (a, b)_v in {+1, −1}.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => hilbert_at_prime(&square_class_integer(a), &square_class_integer(b), p),
    })
}

/// The places that can carry a nontrivial symbol for (a, b): 2, primes
/// dividing numerators or denominators, and ∞.
pub fn relevant_places(values: &[&Rat]) -> Result<BTreeSet<Place>> {
    let mut places = BTreeSet::new();
    places.insert(Place::Finite(BigInt::from(2)));
    places.insert(Place::Infinite);
    for q in values {
        if q.is_zero() {
            return Err(Error::ZeroInput);
        }
        for p in prime_divisors(&square_class_integer(q))? {
            places.insert(Place::Finite(p));
        }
    }
    Ok(places)
}

/// The quaternion algebra (a, b) over Q: i² = a, j² = b, ij = −ji.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatAlg {
    a: Rat,
    b: Rat,
}

impl QuatAlg {
    pub fn new(a: Rat, b: Rat) -> Result<QuatAlg> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(QuatAlg { a, b })
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn ramified_places(&self) -> Result<BTreeSet<Place>> {
        ramified_places(&self.a, &self.b)
    }

    pub fn reduced_discriminant(&self) -> Result<BigInt> {
        reduced_discriminant(&self.a, &self.b)
    }

    pub fn is_trivial(&self) -> Result<bool> {
        is_trivial(&self.a, &self.b)
    }
}

/// Places where (a, b) ramifies. Always of even cardinality.
pub fn ramified_places(a: &Rat, b: &Rat) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::new();
    for v in relevant_places(&[a, b])? {
        if hilbert_symbol(a, b, &v)? == -1 {
            out.insert(v);
        }
    }
    if out.len() % 2 != 0 {
        return Err(Error::Internal(format!(
            "odd number of ramified places for ({a}, {b})"
        )));
    }
    Ok(out)
}

/// Product of the finite primes where (a, b) ramifies.
pub fn reduced_discriminant(a: &Rat, b: &Rat) -> Result<BigInt> {
    Ok(ramified_places(a, b)?
        .into_iter()
        .filter_map(|v| match v {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        })
        .product())
}

/// Whether (a, b) splits, i.e. is trivial in Br(Q).
pub fn is_trivial(a: &Rat, b: &Rat) -> Result<bool> {
    let places = ramified_places(a, b)?;
    let by_places = places.is_empty();
    let disc: BigInt = places
        .iter()
        .filter_map(|v| match v {
            Place::Finite(p) => Some(p.clone()),
            Place::Infinite => None,
        })
        .product();
    let by_disc = disc.is_one();
    if by_places != by_disc {
        return Err(Error::Internal(format!(
            "({a}, {b}): ramification set and reduced discriminant disagree"
        )));
    }
    Ok(by_places)
}

/// The diagonal ternary form aX² + bY² + cZ².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryForm {
    coeffs: [Rat; 3],
}

impl TernaryForm {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Result<TernaryForm> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(TernaryForm { coeffs: [a, b, c] })
    }

    /// X² + Y² + Z².
    pub fn sum_of_squares() -> TernaryForm {
        let one = Rat::one();
        TernaryForm { coeffs: [one.clone(), one.clone(), one] }
    }

    /// (1/de)X² + dY² + eZ².
    pub fn s_form(d: &Rat, e: &Rat) -> Result<TernaryForm> {
        if d.is_zero() || e.is_zero() {
            return Err(Error::ZeroInput);
        }
        TernaryForm::new((d * e).recip(), d.clone(), e.clone())
    }

    pub fn coeffs(&self) -> &[Rat; 3] {
        &self.coeffs
    }

    /// Number of positive coefficients.
    pub fn positive_index(&self) -> usize {
        self.coeffs.iter().filter(|c| c.is_positive()).count()
    }

    /// Squarefree representative of the determinant abc.
    pub fn discriminant_class(&self) -> Result<BigInt> {
        let [a, b, c] = &self.coeffs;
        Ok(squarefree_part(&(a * b * c))?.0)
    }
}

/// (a,b)_v (a,c)_v (b,c)_v for the diagonal coefficients.
pub fn hasse_witt(f: &TernaryForm, v: &Place) -> Result<i8> {
    let [a, b, c] = &f.coeffs;
    Ok(hilbert_symbol(a, b, v)? * hilbert_symbol(a, c, v)? * hilbert_symbol(b, c, v)?)
}

/// Rational equivalence of two ternary diagonal forms: signature, discriminant
/// modulo squares, and Hasse–Witt invariants at every place that can differ.
pub fn forms_equivalent(f: &TernaryForm, g: &TernaryForm) -> Result<bool> {
    if f.positive_index() != g.positive_index() {
        return Ok(false);
    }
    if f.discriminant_class()? != g.discriminant_class()? {
        return Ok(false);
    }
    let all: Vec<&Rat> = f.coeffs.iter().chain(g.coeffs.iter()).collect();
    for v in relevant_places(&all)? {
        if hasse_witt(f, &v)? != hasse_witt(g, &v)? {
            return Ok(false);
        }
    }
    Ok(true)
}
