use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{factor, fmt_rat, int, rational_sqrt, Rat};
use crate::error::{Error, Result};

/// `x + y√disc` in the quadratic field Q(√disc).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElt {
    disc: i64,
    x: Rat,
    y: Rat,
}

pub(crate) fn check_quadratic_disc(a: i64) -> Result<()> {
    if a == 0 || a == 1 {
        return Err(Error::InvalidField(format!("discriminant {a} must not be 0 or 1")));
    }
    if !factor::is_squarefree(&BigInt::from(a))? {
        return Err(Error::InvalidField(format!("discriminant {a} is not squarefree")));
    }
    Ok(())
}

impl QuadElt {
    pub fn new(disc: i64, x: Rat, y: Rat) -> Result<QuadElt> {
        check_quadratic_disc(disc)?;
        Ok(QuadElt { disc, x, y })
    }

    /// Caller guarantees `disc` is squarefree and not 0 or 1.
    pub(crate) fn new_unchecked(disc: i64, x: Rat, y: Rat) -> QuadElt {
        QuadElt { disc, x, y }
    }

    pub fn from_rat(disc: i64, x: Rat) -> Result<QuadElt> {
        QuadElt::new(disc, x, Rat::zero())
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Rational part.
    pub fn x(&self) -> &Rat {
        &self.x
    }

    /// Coefficient of √disc.
    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conj(&self) -> QuadElt {
        QuadElt::new_unchecked(self.disc, self.x.clone(), -self.y.clone())
    }

    pub fn trace(&self) -> Rat {
        &self.x + &self.x
    }

    /// `x^2 - disc * y^2`.
    pub fn norm(&self) -> Rat {
        &self.x * &self.x - int(self.disc) * &self.y * &self.y
    }

    pub fn scale(&self, q: &Rat) -> QuadElt {
        QuadElt::new_unchecked(self.disc, &self.x * q, &self.y * q)
    }

    fn same_field(&self, other: &QuadElt) -> Result<()> {
        if self.disc != other.disc {
            return Err(Error::FieldMismatch(format!(
                "Q(sqrt({})) vs Q(sqrt({}))",
                self.disc, other.disc
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QuadElt) -> Result<QuadElt> {
        self.same_field(other)?;
        Ok(QuadElt::new_unchecked(self.disc, &self.x + &other.x, &self.y + &other.y))
    }

    pub fn checked_mul(&self, other: &QuadElt) -> Result<QuadElt> {
        self.same_field(other)?;
        let a = int(self.disc);
        Ok(QuadElt::new_unchecked(
            self.disc,
            &self.x * &other.x + a * &self.y * &other.y,
            &self.x * &other.y + &self.y * &other.x,
        ))
    }

    pub fn inv(&self) -> Result<QuadElt> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n_inv = n.recip();
        Ok(self.conj().scale(&n_inv))
    }

    pub fn checked_div(&self, other: &QuadElt) -> Result<QuadElt> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// A square root of `self` in Q(√disc), if one exists.
    pub fn sqrt(&self) -> Option<QuadElt> {
        let a = int(self.disc);
        let found = if self.y.is_zero() {
            if let Some(u) = rational_sqrt(&self.x) {
                Some((u, Rat::zero()))
            } else {
                rational_sqrt(&(&self.x / &a)).map(|v| (Rat::zero(), v))
            }
        } else {
            // u^2 + a v^2 = x, 2uv = y, so z = u^2 solves z^2 - x z + a y^2/4 = 0
            let disc = &self.x * &self.x - &a * &self.y * &self.y;
            let root = rational_sqrt(&disc)?;
            let two = int(2);
            [(&self.x + &root) / &two, (&self.x - &root) / &two]
                .into_iter()
                .filter(|z| !z.is_zero())
                .find_map(|z| rational_sqrt(&z))
                .map(|u| {
                    let v = &self.y / (&two * &u);
                    (u, v)
                })
        };
        let (u, v) = found?;
        let s = QuadElt::new_unchecked(self.disc, u, v);
        debug_assert_eq!(&(&s * &s), self);
        Some(s)
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    pub fn one(disc: i64) -> Result<QuadElt> {
        QuadElt::from_rat(disc, Rat::one())
    }
}

impl Add for &QuadElt {
    type Output = QuadElt;

    /// Panics when the fields differ; use [`QuadElt::checked_add`] otherwise.
    fn add(self, rhs: &QuadElt) -> QuadElt {
        self.checked_add(rhs).expect("QuadElt addition across fields")
    }
}

impl Sub for &QuadElt {
    type Output = QuadElt;

    fn sub(self, rhs: &QuadElt) -> QuadElt {
        self.checked_add(&-rhs).expect("QuadElt subtraction across fields")
    }
}

impl Mul for &QuadElt {
    type Output = QuadElt;

    fn mul(self, rhs: &QuadElt) -> QuadElt {
        self.checked_mul(rhs).expect("QuadElt multiplication across fields")
    }
}

impl Neg for &QuadElt {
    type Output = QuadElt;

    fn neg(self) -> QuadElt {
        QuadElt::new_unchecked(self.disc, -self.x.clone(), -self.y.clone())
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", fmt_rat(&self.x), fmt_rat(&self.y), self.disc)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadJson {
    disc: String,
    coeffs: [String; 2],
}

impl Serialize for QuadElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadJson {
            disc: self.disc.to_string(),
            coeffs: [fmt_rat(&self.x), fmt_rat(&self.y)],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QuadJson::deserialize(d)?;
        let disc: i64 = raw
            .disc
            .trim()
            .parse()
            .map_err(|_| D::Error::custom(format!("bad disc {:?}", raw.disc)))?;
        let x = super::parse_rat(&raw.coeffs[0]).map_err(D::Error::custom)?;
        let y = super::parse_rat(&raw.coeffs[1]).map_err(D::Error::custom)?;
        QuadElt::new(disc, x, y).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_traits::Signed;

    fn q(disc: i64, x: i64, y: i64) -> QuadElt {
        QuadElt::new(disc, int(x), int(y)).unwrap()
    }

    #[test]
    fn norms() {
        assert_eq!(q(-2, 1, 1).norm(), int(3));
        assert_eq!(q(5, 7, 0).norm(), int(49));
        assert_eq!(q(6, 18, 6).norm(), int(108));
    }

    #[test]
    fn square_roots() {
        assert_eq!(q(7, 77, 28).sqrt().map(|s| if s.x() < &Rat::zero() { -&s } else { s }), Some(q(7, 7, 2)));
        assert_eq!(q(7, 9, 0).sqrt().unwrap().x().abs(), int(3));
        assert_eq!(q(6, 0, 1).sqrt(), None);
        // 6 = (sqrt 6)^2 with no rational part
        assert_eq!(q(6, 6, 0).sqrt().unwrap().y().abs(), int(1));
        assert_eq!(q(3, -1, 0).sqrt(), None);
        assert_eq!(q(-1, -1, 0).sqrt().unwrap().y().abs(), int(1));
    }

    #[test]
    fn inverse_and_mismatch() {
        let x = QuadElt::new(-2, int(2), int(-1)).unwrap();
        assert_eq!(&x * &x.inv().unwrap(), q(-2, 1, 0));
        assert_eq!(QuadElt::new(3, Rat::zero(), Rat::zero()).unwrap().inv(), Err(Error::DivisionByZero));
        assert!(matches!(q(2, 1, 1).checked_mul(&q(3, 1, 1)), Err(Error::FieldMismatch(_))));
        assert!(QuadElt::new(12, int(1), int(1)).is_err());
        assert!(QuadElt::new(1, int(1), int(1)).is_err());
        assert_eq!(QuadElt::new(-3, rat(1, 2), rat(1, 2)).unwrap().trace(), int(1));
    }

    #[test]
    fn json_round_trip() {
        let x = QuadElt::new(-3, rat(1, 2), rat(-7, 4)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"disc":"-3","coeffs":["1/2","-7/4"]}"#);
        assert_eq!(serde_json::from_str::<QuadElt>(&s).unwrap(), x);
    }

    proptest::proptest! {
        #[test]
        fn norm_is_multiplicative(a in -50i64..50, b in -50i64..50, c in -50i64..50, dd in -50i64..50, den in 1i64..20) {
            for disc in [-7i64, -1, 2, 6, 15] {
                let x = QuadElt::new(disc, rat(a, den), rat(b, den)).unwrap();
                let y = QuadElt::new(disc, rat(c, 1), rat(dd, den)).unwrap();
                proptest::prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
                let sq = &x * &x;
                let s = sq.sqrt().unwrap();
                proptest::prop_assert_eq!(&s * &s, sq);
            }
        }
    }
}
