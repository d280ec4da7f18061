use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::quad::check_quadratic_disc;
use super::{fmt_rat, int, parse_rat, squarefree_part, GroupElem, QuadElt, Rat};
use crate::error::{Error, Result};

/// The biquadratic field L = Q(√d, √e) with d, e squarefree, distinct and not 0 or 1.
///
/// The fourth basis vector is the product √d·√e (so for d = 6, e = 3 it is
/// √18 = 3√2, not √2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Biquad {
    d: i64,
    e: i64,
}

impl Biquad {
    pub fn new(d: i64, e: i64) -> Result<Biquad> {
        check_quadratic_disc(d)?;
        check_quadratic_disc(e)?;
        if d == e {
            return Err(Error::InvalidField(format!(
                "d = e = {d}: Q(sqrt d, sqrt e) is not biquadratic"
            )));
        }
        d.checked_mul(e)
            .ok_or_else(|| Error::InvalidField("d*e overflows".into()))?;
        Ok(Biquad { d, e })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    /// The integer d·e, which is the square of the fourth basis vector.
    pub fn de(&self) -> i64 {
        self.d * self.e
    }

    /// Squarefree representative of d·e, the discriminant of K_de.
    pub fn de_squarefree(&self) -> i64 {
        let (s, _) = squarefree_part(&int(self.de())).expect("de is nonzero");
        i64::try_from(s).expect("squarefree part of an i64 fits in i64")
    }

    pub fn elt(&self, c: [Rat; 4]) -> BiquadElt {
        BiquadElt { field: *self, c }
    }

    pub fn from_ints(&self, c: [i64; 4]) -> BiquadElt {
        self.elt(c.map(int))
    }

    pub fn from_rat(&self, q: Rat) -> BiquadElt {
        self.elt([q, Rat::zero(), Rat::zero(), Rat::zero()])
    }

    pub fn zero(&self) -> BiquadElt {
        self.from_rat(Rat::zero())
    }

    pub fn one(&self) -> BiquadElt {
        self.from_rat(Rat::one())
    }

    pub fn sqrt_d(&self) -> BiquadElt {
        self.from_ints([0, 1, 0, 0])
    }

    pub fn sqrt_e(&self) -> BiquadElt {
        self.from_ints([0, 0, 1, 0])
    }

    /// The basis element √d·√e.
    pub fn sqrt_de(&self) -> BiquadElt {
        self.from_ints([0, 0, 0, 1])
    }

    /// Embeds an element of K = Q(√d), K_e = Q(√e) or K_de = Q(√(de)).
    ///
    /// For K_de, √s with s the squarefree part of d·e maps to √d·√e / r
    /// where d·e = s·r².
    pub fn embed(&self, x: &QuadElt) -> Result<BiquadElt> {
        let (a, b) = (x.x().clone(), x.y().clone());
        let z = Rat::zero;
        if x.disc() == self.d {
            Ok(self.elt([a, b, z(), z()]))
        } else if x.disc() == self.e {
            Ok(self.elt([a, z(), b, z()]))
        } else if x.disc() == self.de_squarefree() {
            let (_, r) = squarefree_part(&int(self.de()))?;
            Ok(self.elt([a, z(), z(), b / r]))
        } else {
            Err(Error::FieldMismatch(format!(
                "Q(sqrt({})) is not a quadratic subfield of Q(sqrt({}), sqrt({}))",
                x.disc(),
                self.d,
                self.e
            )))
        }
    }

    /// Parses a JSON array of four rational strings.
    pub fn parse_json(&self, s: &str) -> Result<BiquadElt> {
        let raw: Vec<String> = serde_json::from_str(s)
            .map_err(|err| Error::InvalidInput(format!("element must be a JSON array of 4 rational strings: {err}")))?;
        self.from_strings(&raw)
    }

    pub fn from_strings(&self, raw: &[String]) -> Result<BiquadElt> {
        if raw.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "element needs 4 coordinates, got {}",
                raw.len()
            )));
        }
        let c = [
            parse_rat(&raw[0])?,
            parse_rat(&raw[1])?,
            parse_rat(&raw[2])?,
            parse_rat(&raw[3])?,
        ];
        Ok(self.elt(c))
    }
}

/// `c1 + c2√d + c3√e + c4√d√e` in L = Q(√d, √e).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiquadElt {
    field: Biquad,
    c: [Rat; 4],
}

impl BiquadElt {
    pub fn field(&self) -> Biquad {
        self.field
    }

    pub fn coeffs(&self) -> &[Rat; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when `self` lies in Q.
    pub fn as_rational(&self) -> Option<&Rat> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    /// `self` as an element of K = Q(√d), when it lies there.
    pub fn as_in_k(&self) -> Option<QuadElt> {
        (self.c[2].is_zero() && self.c[3].is_zero())
            .then(|| QuadElt::new_unchecked(self.field.d, self.c[0].clone(), self.c[1].clone()))
    }

    fn same_field(&self, other: &BiquadElt) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "Q(sqrt({}), sqrt({})) vs Q(sqrt({}), sqrt({}))",
                self.field.d, self.field.e, other.field.d, other.field.e
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BiquadElt) -> Result<BiquadElt> {
        self.same_field(other)?;
        let c = std::array::from_fn(|i| &self.c[i] + &other.c[i]);
        Ok(self.field.elt(c))
    }

    pub fn checked_sub(&self, other: &BiquadElt) -> Result<BiquadElt> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &BiquadElt) -> Result<BiquadElt> {
        self.same_field(other)?;
        let (d, e) = (int(self.field.d), int(self.field.e));
        let de = &d * &e;
        let [a1, a2, a3, a4] = &self.c;
        let [b1, b2, b3, b4] = &other.c;
        let c1 = a1 * b1 + &d * a2 * b2 + &e * a3 * b3 + &de * a4 * b4;
        let c2 = a1 * b2 + a2 * b1 + &e * (a3 * b4 + a4 * b3);
        let c3 = a1 * b3 + a3 * b1 + &d * (a2 * b4 + a4 * b2);
        let c4 = a1 * b4 + a4 * b1 + a2 * b3 + a3 * b2;
        Ok(self.field.elt([c1, c2, c3, c4]))
    }

    pub fn scale(&self, q: &Rat) -> BiquadElt {
        self.field.elt(std::array::from_fn(|i| &self.c[i] * q))
    }

    /// The image of `self` under the automorphism `sigma`.
    pub fn galois_apply(&self, sigma: GroupElem) -> BiquadElt {
        let [c1, c2, c3, c4] = self.c.clone();
        let (fd, fe) = (sigma.flips_d(), sigma.flips_e());
        let c2 = if fd { -c2 } else { c2 };
        let c3 = if fe { -c3 } else { c3 };
        let c4 = if fd != fe { -c4 } else { c4 };
        self.field.elt([c1, c2, c3, c4])
    }

    /// Absolute norm N_{L/Q}.
    pub fn norm(&self) -> Rat {
        let p = GroupElem::ALL
            .iter()
            .fold(self.field.one(), |acc, &s| &acc * &self.galois_apply(s));
        p.as_rational()
            .cloned()
            .expect("product over the Galois orbit is rational")
    }

    pub fn inv(&self) -> Result<BiquadElt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let others = [GroupElem::Theta, GroupElem::Nu, GroupElem::NuTheta]
            .iter()
            .fold(self.field.one(), |acc, &s| &acc * &self.galois_apply(s));
        let n = (self * &others)
            .as_rational()
            .cloned()
            .expect("norm is rational");
        Ok(others.scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &BiquadElt) -> Result<BiquadElt> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, k: u32) -> BiquadElt {
        (0..k).fold(self.field.one(), |acc, _| &acc * self)
    }

    /// Splits `self = P + Q√d` with P, Q in K_e = Q(√e).
    fn split_over_ke(&self) -> (QuadElt, QuadElt) {
        let e = self.field.e;
        (
            QuadElt::new_unchecked(e, self.c[0].clone(), self.c[2].clone()),
            QuadElt::new_unchecked(e, self.c[1].clone(), self.c[3].clone()),
        )
    }

    fn join_over_ke(field: Biquad, a: &QuadElt, b: &QuadElt) -> BiquadElt {
        field.elt([a.x().clone(), b.x().clone(), a.y().clone(), b.y().clone()])
    }

    /// A square root of `self` in L, if one exists.
    ///
    /// Works in the tower L = K_e(√d): with `self = P + Q√d` and a root
    /// `A + B√d`, A² is a root of z² − P z + d Q²/4 over K_e.
    pub fn sqrt(&self) -> Option<BiquadElt> {
        let field = self.field;
        let (p, q) = self.split_over_ke();
        let d = int(field.d);
        let root = if q.is_zero() {
            if let Some(a) = p.sqrt() {
                Some((a, QuadElt::new_unchecked(field.e, Rat::zero(), Rat::zero())))
            } else {
                p.scale(&d.recip())
                    .sqrt()
                    .map(|b| (QuadElt::new_unchecked(field.e, Rat::zero(), Rat::zero()), b))
            }
        } else {
            let disc = &(&p * &p) - &(&q * &q).scale(&d);
            let r = disc.sqrt()?;
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            [(&p + &r).scale(&half), (&p - &r).scale(&half)]
                .into_iter()
                .filter(|z| !z.is_zero())
                .find_map(|z| z.sqrt())
                .map(|a| {
                    let two_a = a.scale(&int(2));
                    let b = q.checked_div(&two_a).expect("a is nonzero");
                    (a, b)
                })
        };
        let (a, b) = root?;
        let s = Self::join_over_ke(field, &a, &b);
        debug_assert_eq!(&(&s * &s), self);
        Some(s)
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.c
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Coordinatewise integrality in the order Z[√d, √e].
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|q| q.is_integer())
    }

    pub fn to_strings(&self) -> [String; 4] {
        std::array::from_fn(|i| fmt_rat(&self.c[i]))
    }
}

impl Add for &BiquadElt {
    type Output = BiquadElt;

    /// Panics when the fields differ; use [`BiquadElt::checked_add`] otherwise.
    fn add(self, rhs: &BiquadElt) -> BiquadElt {
        self.checked_add(rhs).expect("BiquadElt addition across fields")
    }
}

impl Sub for &BiquadElt {
    type Output = BiquadElt;

    fn sub(self, rhs: &BiquadElt) -> BiquadElt {
        self.checked_sub(rhs).expect("BiquadElt subtraction across fields")
    }
}

impl Mul for &BiquadElt {
    type Output = BiquadElt;

    fn mul(self, rhs: &BiquadElt) -> BiquadElt {
        self.checked_mul(rhs).expect("BiquadElt multiplication across fields")
    }
}

impl Neg for &BiquadElt {
    type Output = BiquadElt;

    fn neg(self) -> BiquadElt {
        self.field.elt(std::array::from_fn(|i| -self.c[i].clone()))
    }
}

impl fmt::Display for BiquadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Biquad { d, e } = self.field;
        write!(
            f,
            "{} + {}*sqrt({d}) + {}*sqrt({e}) + {}*sqrt({d})*sqrt({e})",
            fmt_rat(&self.c[0]),
            fmt_rat(&self.c[1]),
            fmt_rat(&self.c[2]),
            fmt_rat(&self.c[3])
        )
    }
}

/// Serializes as the coordinate array `["c1","c2","c3","c4"]`; the field
/// parameters travel separately.
impl Serialize for BiquadElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}
