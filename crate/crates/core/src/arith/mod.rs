//! Exact arithmetic over Q, quadratic fields Q(√a) and biquadratic fields
//! Q(√d, √e), together with the Galois group {1, ν, θ, νθ}.

mod biquad;
pub mod factor;
mod quad;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use biquad::{Biquad, BiquadElt};
pub use quad::QuadElt;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// `p` or `p/q` in lowest terms.
pub fn fmt_rat(q: &Rat) -> String {
    q.to_string()
}

/// Integer in the same square class as `q` (numerator times denominator).
pub(crate) fn square_class_integer(q: &Rat) -> BigInt {
    q.numer() * q.denom()
}

fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Nonnegative rational square root of `q`, if it exists.
pub fn rational_sqrt(q: &Rat) -> Option<Rat> {
    let n = integer_sqrt_exact(q.numer())?;
    let d = integer_sqrt_exact(q.denom())?;
    Some(Rat::new(n, d))
}

pub fn is_rational_square(q: &Rat) -> bool {
    rational_sqrt(q).is_some()
}

/// Writes `n = s * r^2` with `s` a squarefree integer.
pub fn squarefree_part(n: &Rat) -> Result<(BigInt, Rat)> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    // n = a/b = (a*b) / b^2
    let ab = square_class_integer(n);
    let mut s = if ab.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut root = BigInt::one();
    for (p, k) in factor::factorize(&ab)? {
        if k.is_odd() {
            s *= &p;
        }
        root *= num_traits::pow(p, (k / 2) as usize);
    }
    let r = Rat::new(root, n.denom().clone());
    Ok((s, r))
}

/// Element of `Gal(Q(√d,√e)/Q) = {1, θ, ν, νθ}` where ν negates √d and θ negates √e.
///
/// The discriminant is the table index: 1, θ, ν, νθ ↦ 0, 1, 2, 3, and the
/// group law is XOR of indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    One = 0,
    Theta = 1,
    Nu = 2,
    NuTheta = 3,
}

impl GroupElem {
    pub const ALL: [GroupElem; 4] = [
        GroupElem::One,
        GroupElem::Theta,
        GroupElem::Nu,
        GroupElem::NuTheta,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> GroupElem {
        Self::ALL[i & 3]
    }

    pub fn mul(self, other: GroupElem) -> GroupElem {
        Self::from_index(self.index() ^ other.index())
    }

    /// Whether this automorphism negates √d.
    pub fn flips_d(self) -> bool {
        self.index() & 2 != 0
    }

    /// Whether this automorphism negates √e.
    pub fn flips_e(self) -> bool {
        self.index() & 1 != 0
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupElem::One => "1",
            GroupElem::Theta => "theta",
            GroupElem::Nu => "nu",
            GroupElem::NuTheta => "nu*theta",
        }
    }

    pub fn parse(s: &str) -> Result<GroupElem> {
        match s.trim() {
            "1" | "id" => Ok(GroupElem::One),
            "theta" | "θ" => Ok(GroupElem::Theta),
            "nu" | "ν" => Ok(GroupElem::Nu),
            "nu*theta" | "nutheta" | "νθ" => Ok(GroupElem::NuTheta),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&int(18)).unwrap(), (BigInt::from(2), int(3)));
        assert_eq!(squarefree_part(&rat(-3, 4)).unwrap(), (BigInt::from(-3), rat(1, 2)));
        assert_eq!(squarefree_part(&int(108)).unwrap(), (BigInt::from(3), int(6)));
        assert_eq!(squarefree_part(&int(-1)).unwrap(), (BigInt::from(-1), int(1)));
        assert_eq!(squarefree_part(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn rational_squares() {
        assert!(is_rational_square(&rat(4, 9)));
        assert!(!is_rational_square(&int(2)));
        // |m| for m = -2
        assert!(!is_rational_square(&int(-2).abs()));
        assert!(!is_rational_square(&int(-4)));
        assert!(is_rational_square(&int(0)));
        assert_eq!(rational_sqrt(&rat(49, 25)), Some(rat(7, 5)));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat(" 17 ").unwrap(), int(17));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(6, -4)), "-3/2");
        assert_eq!(fmt_rat(&int(5)), "5");
    }

    #[test]
    fn group_law() {
        use GroupElem::*;
        for s in GroupElem::ALL {
            assert_eq!(s.mul(s), One);
            assert_eq!(s.mul(One), s);
            for t in GroupElem::ALL {
                assert_eq!(s.mul(t), t.mul(s));
            }
        }
        assert_eq!(Nu.mul(Theta), NuTheta);
        assert!(Nu.flips_d() && !Nu.flips_e());
        assert!(NuTheta.flips_d() && NuTheta.flips_e());
    }

    proptest::proptest! {
        #[test]
        fn squarefree_part_round_trip(n in -100_000i64..100_000, d in 1i64..1000) {
            proptest::prop_assume!(n != 0);
            let q = rat(n, d);
            let (s, r) = squarefree_part(&q).unwrap();
            proptest::prop_assert!(factor::is_squarefree(&s).unwrap());
            proptest::prop_assert_eq!(Rat::from_integer(s) * &r * &r, q);
        }
    }
}
