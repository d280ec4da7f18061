//! Short Weierstrass models y² = x³ + a2x² + a4x + a6 over L = Q(√d, √e),
//! and the Q-curve inputs consumed by the classifier.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::factor::factorize;
use crate::arith::{fmt_rat, int, Biquad, BiquadElt, GroupElem, QuadElt, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    field: Biquad,
    a2: BiquadElt,
    a4: BiquadElt,
    a6: BiquadElt,
}

impl CurveModel {
    pub fn new(a2: BiquadElt, a4: BiquadElt, a6: BiquadElt) -> Result<CurveModel> {
        let field = a2.field();
        if a4.field() != field || a6.field() != field {
            return Err(Error::FieldMismatch("curve coefficients lie in different fields".into()));
        }
        let e = CurveModel { field, a2, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::Singular);
        }
        Ok(e)
    }

    pub fn field(&self) -> Biquad {
        self.field
    }

    pub fn a2(&self) -> &BiquadElt {
        &self.a2
    }

    pub fn a4(&self) -> &BiquadElt {
        &self.a4
    }

    pub fn a6(&self) -> &BiquadElt {
        &self.a6
    }

    /// (b2, b4, b6, b8) for a1 = a3 = 0.
    fn b_invariants(&self) -> [BiquadElt; 4] {
        let b2 = self.a2.scale(&int(4));
        let b4 = self.a4.scale(&int(2));
        let b6 = self.a6.scale(&int(4));
        let b8 = &(&self.a2 * &self.a6).scale(&int(4)) - &(&self.a4 * &self.a4);
        [b2, b4, b6, b8]
    }

    pub fn c4(&self) -> BiquadElt {
        let [b2, b4, _, _] = self.b_invariants();
        &(&b2 * &b2) - &b4.scale(&int(24))
    }

    pub fn c6(&self) -> BiquadElt {
        let [b2, b4, b6, _] = self.b_invariants();
        let b2_cubed = b2.pow(3);
        &(&(&b2 * &b4).scale(&int(36)) - &b2_cubed) - &b6.scale(&int(216))
    }

    pub fn discriminant(&self) -> BiquadElt {
        let [b2, b4, b6, b8] = self.b_invariants();
        let t1 = -&(&(&b2 * &b2) * &b8);
        let t2 = b4.pow(3).scale(&int(8));
        let t3 = (&b6 * &b6).scale(&int(27));
        let t4 = (&(&b2 * &b4) * &b6).scale(&int(9));
        &(&(&t1 - &t2) - &t3) + &t4
    }

    pub fn j_invariant(&self) -> BiquadElt {
        self.c4()
            .pow(3)
            .checked_div(&self.discriminant())
            .expect("models are nonsingular by construction")
    }

    pub fn is_integral(&self) -> bool {
        self.a2.is_integral() && self.a4.is_integral() && self.a6.is_integral()
    }

    /// Parses `{"d": "...", "e": "...", "a2": [...], "a4": [...], "a6": [...]}`.
    /// A missing a2 means 0.
    pub fn from_json(s: &str) -> Result<CurveModel> {
        let raw: CurveJson =
            serde_json::from_str(s).map_err(|err| Error::InvalidInput(format!("bad curve JSON: {err}")))?;
        let parse_i64 = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("not an integer: {x:?}")))
        };
        let l = Biquad::new(parse_i64(&raw.d)?, parse_i64(&raw.e)?)?;
        let a2 = match raw.a2 {
            Some(a) => l.from_strings(&a)?,
            None => l.zero(),
        };
        CurveModel::new(a2, l.from_strings(&raw.a4)?, l.from_strings(&raw.a6)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    d: String,
    e: String,
    #[serde(default)]
    a2: Option<Vec<String>>,
    a4: Vec<String>,
    a6: Vec<String>,
}

impl Serialize for CurveModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveJson {
            d: self.field.d().to_string(),
            e: self.field.e().to_string(),
            a2: Some(self.a2.to_strings().to_vec()),
            a4: self.a4.to_strings().to_vec(),
            a6: self.a6.to_strings().to_vec(),
        }
        .serialize(s)
    }
}

/// (a2, a4, a6) ↦ (γa2, γ²a4, γ³a6).
pub fn quadratic_twist(e: &CurveModel, gamma: &BiquadElt) -> Result<CurveModel> {
    if gamma.field() != e.field {
        return Err(Error::FieldMismatch("twisting element is not in the curve's field".into()));
    }
    if gamma.is_zero() {
        return Err(Error::ZeroInput);
    }
    let g2 = gamma * gamma;
    let g3 = &g2 * gamma;
    CurveModel::new(gamma * &e.a2, &g2 * &e.a4, &g3 * &e.a6)
}

/// (a2, a4, a6) ↦ (u²a2, u⁴a4, u⁶a6), i.e. x ↦ x/u², y ↦ y/u³.
pub fn integral_scale(e: &CurveModel, u: &BigInt) -> Result<CurveModel> {
    if !u.is_positive() {
        return Err(Error::InvalidInput(format!("scale factor must be positive, got {u}")));
    }
    let u2 = Rat::from_integer(u * u);
    let u4 = &u2 * &u2;
    let u6 = &u4 * &u2;
    CurveModel::new(e.a2.scale(&u2), e.a4.scale(&u4), e.a6.scale(&u6))
}

/// The least u ≥ 1 for which [`integral_scale`] yields integral coordinates:
/// each prime p enters with exponent max ⌈v_p(denominator of a_k) / k⌉.
pub fn least_integral_scale(e: &CurveModel) -> Result<BigInt> {
    let mut need: Vec<(BigInt, u32)> = Vec::new();
    for (c, k) in [(&e.a2, 2u32), (&e.a4, 4), (&e.a6, 6)] {
        for (p, f) in factorize(&c.denominator_lcm())? {
            let exp = f.div_ceil(k);
            match need.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 = entry.1.max(exp),
                None => need.push((p, exp)),
            }
        }
    }
    Ok(need
        .into_iter()
        .map(|(p, k)| num_traits::pow(p, k as usize))
        .product())
}

/// Applies σ to every coefficient.
pub fn conjugate(sigma: GroupElem, e: &CurveModel) -> CurveModel {
    CurveModel {
        field: e.field,
        a2: e.a2.galois_apply(sigma),
        a4: e.a4.galois_apply(sigma),
        a6: e.a6.galois_apply(sigma),
    }
}

/// A Q-curve over K = Q(√d) with minimal field of complete definition
/// L = Q(√d, √e), and optionally the integer m = μ_ν ∘ ν(μ_ν).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCurveInput {
    field: Biquad,
    m: Option<Rat>,
    curve: Option<CurveModel>,
}

impl QCurveInput {
    pub fn new(d: i64, e: i64, m: Option<Rat>, curve: Option<CurveModel>) -> Result<QCurveInput> {
        let field = Biquad::new(d, e)?;
        if let Some(m) = &m {
            if m.is_zero() || m.is_one() {
                return Err(Error::InvalidInput(format!("m must not be 0 or 1, got {m}")));
            }
        }
        if let Some(c) = &curve {
            if c.field() != field {
                return Err(Error::FieldMismatch("curve is not defined over Q(sqrt d, sqrt e)".into()));
            }
        }
        Ok(QCurveInput { field, m, curve })
    }

    pub fn field(&self) -> Biquad {
        self.field
    }

    pub fn d(&self) -> i64 {
        self.field.d()
    }

    pub fn e(&self) -> i64 {
        self.field.e()
    }

    pub fn m(&self) -> Option<&Rat> {
        self.m.as_ref()
    }

    pub fn curve(&self) -> Option<&CurveModel> {
        self.curve.as_ref()
    }
}

impl Serialize for QCurveInput {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("d", &self.d().to_string())?;
        map.serialize_entry("e", &self.e().to_string())?;
        map.serialize_entry("m", &self.m.as_ref().map(fmt_rat))?;
        map.serialize_entry("curve", &self.curve)?;
        map.end()
    }
}

/// E_a: y² = x³ − 3√a(4+5√a)x + 2√a(2+14√a+11a), over Q(√a, √3).
pub fn family_ea(a: i64) -> Result<QCurveInput> {
    let l = Biquad::new(a, 3)?;
    // −3√a(4+5√a) = −15a − 12√a; 2√a(2+14√a+11a) = 28a + (4+22a)√a
    let a4 = l.elt([int(-15 * a), int(-12), Rat::zero(), Rat::zero()]);
    let a6 = l.elt([int(28 * a), int(4 + 22 * a), Rat::zero(), Rat::zero()]);
    let curve = CurveModel::new(l.zero(), a4, a6)?;
    QCurveInput::new(a, 3, None, Some(curve))
}

/// y² = x³ + 2x² + bx over Q(√−3, √−2), for b ∈ Q(√−3) of trace 1; m = −2.
pub fn pyl_curve(b: &QuadElt) -> Result<QCurveInput> {
    if b.disc() != -3 {
        return Err(Error::FieldMismatch(format!("b must lie in Q(sqrt(-3)), got {b}")));
    }
    if b.trace() != Rat::one() {
        return Err(Error::InvalidInput(format!("b must have trace 1, got {}", fmt_rat(&b.trace()))));
    }
    let l = Biquad::new(-3, -2)?;
    let curve = CurveModel::new(l.from_ints([2, 0, 0, 0]), l.embed(b)?, l.zero())?;
    QCurveInput::new(-3, -2, Some(int(-2)), Some(curve))
}

/// Smallest u ≥ 1 up to `max_u` for which scaling `e` by u gives exactly
/// `target`.
pub fn find_scale(e: &CurveModel, target: &CurveModel, max_u: u64) -> Result<Option<u64>> {
    for u in 1..=max_u {
        if integral_scale(e, &BigInt::from(u))? == *target {
            return Ok(Some(u));
        }
    }
    Ok(None)
}
