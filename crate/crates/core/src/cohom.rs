//! 2-cocycles of G = {1, θ, ν, νθ} ≅ C2×C2 with values in {±1} (trivial
//! action), the eight classes of H²(G, {±1}), and the Galois type of L(√γ)/Q.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{BiquadElt, GroupElem, Rat};
use crate::error::{Error, Result};

/// A {±1}-valued function on G × G, indexed by [`GroupElem::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CocycleTable {
    c: [[i8; 4]; 4],
}

impl CocycleTable {
    /// Validates entries, normalization and the cocycle condition.
    pub fn new(c: [[i8; 4]; 4]) -> Result<CocycleTable> {
        let t = CocycleTable { c };
        if c.iter().flatten().any(|&x| x != 1 && x != -1) {
            return Err(Error::InvalidInput("cocycle entries must be +1 or -1".into()));
        }
        if !t.is_normalized() {
            return Err(Error::InvalidInput("cocycle table is not normalized".into()));
        }
        if !t.is_cocycle() {
            return Err(Error::InvalidInput("table fails the cocycle condition".into()));
        }
        Ok(t)
    }

    pub fn trivial() -> CocycleTable {
        CocycleTable { c: [[1; 4]; 4] }
    }

    pub fn rows(&self) -> &[[i8; 4]; 4] {
        &self.c
    }

    pub fn get(&self, s: GroupElem, t: GroupElem) -> i8 {
        self.c[s.index()][t.index()]
    }

    pub fn is_normalized(&self) -> bool {
        (0..4).all(|i| self.c[0][i] == 1 && self.c[i][0] == 1)
    }

    pub fn is_cocycle(&self) -> bool {
        use GroupElem as G;
        G::ALL.iter().all(|&s| {
            G::ALL.iter().all(|&t| {
                G::ALL.iter().all(|&r| {
                    self.get(s, t) * self.get(s.mul(t), r) == self.get(t, r) * self.get(s, t.mul(r))
                })
            })
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.c[i][j] == self.c[j][i]))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &CocycleTable) -> CocycleTable {
        let mut c = [[1; 4]; 4];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.c[i][j] * other.c[i][j];
            }
        }
        CocycleTable { c }
    }

    /// δα(σ, τ) = α(σ) α(τ) / α(στ), for α with α(1) = 1.
    pub fn coboundary(alpha: [i8; 4]) -> CocycleTable {
        let mut c = [[1; 4]; 4];
        for s in GroupElem::ALL {
            for t in GroupElem::ALL {
                c[s.index()][t.index()] = alpha[s.index()] * alpha[t.index()] * alpha[s.mul(t).index()];
            }
        }
        CocycleTable { c }
    }

    /// The squares of the lifts: (c(θ,θ), c(ν,ν), c(νθ,νθ)). Determines the class.
    pub fn diagonal(&self) -> [i8; 3] {
        [self.c[1][1], self.c[2][2], self.c[3][3]]
    }

    /// Row-major with +1 before −1.
    fn sort_key(&self) -> [u8; 16] {
        let mut k = [0u8; 16];
        for (i, x) in self.c.iter().flatten().enumerate() {
            k[i] = u8::from(*x == -1);
        }
        k
    }
}

fn normalized_coboundary_maps() -> impl Iterator<Item = [i8; 4]> {
    (0u8..8).map(|bits| {
        let sign = |b: u8| if bits & b != 0 { -1 } else { 1 };
        [1, sign(1), sign(2), sign(4)]
    })
}

/// All tables cohomologous to `t`.
fn coset(t: &CocycleTable) -> Vec<CocycleTable> {
    let mut out: Vec<CocycleTable> = normalized_coboundary_maps()
        .map(|a| t.mul(&CocycleTable::coboundary(a)))
        .collect();
    out.sort_by_key(|x| x.sort_key());
    out.dedup();
    out
}

/// A class in H²(G, {±1}), stored as the least table of its coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CohClass {
    rep: CocycleTable,
}

impl CohClass {
    pub fn of(t: &CocycleTable) -> CohClass {
        let rep = coset(t)[0];
        CohClass { rep }
    }

    pub fn representative(&self) -> &CocycleTable {
        &self.rep
    }

    pub fn members(&self) -> Vec<CocycleTable> {
        coset(&self.rep)
    }

    pub fn name(&self) -> &'static str {
        NAMES
            .iter()
            .find(|(_, rows)| CohClass::of(&CocycleTable { c: *rows }) == *self)
            .map(|(n, _)| *n)
            .expect("every class is named")
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CohClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

const NAMES: [(&str, [[i8; 4]; 4]); 8] = [
    ("triv", [[1; 4]; 4]),
    ("b_d", [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, -1, -1], [1, 1, -1, -1]]),
    ("b_e", [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, 1, 1], [1, -1, 1, -1]]),
    ("b_de", [[1, 1, 1, 1], [1, -1, -1, 1], [1, -1, -1, 1], [1, 1, 1, 1]]),
    ("h0", [[1, 1, 1, 1], [1, -1, -1, 1], [1, 1, -1, -1], [1, -1, 1, -1]]),
    ("h_d", [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, 1, -1], [1, 1, 1, 1]]),
    ("h_e", [[1, 1, 1, 1], [1, 1, 1, 1], [1, -1, -1, 1], [1, -1, -1, 1]]),
    ("h_de", [[1, 1, 1, 1], [1, 1, 1, 1], [1, -1, 1, -1], [1, -1, 1, -1]]),
];

const ETA1: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, 1, 1, 1], [1, 1, -1, -1]];
const ETA2: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, 1, -1, -1], [1, 1, 1, 1]];

/// The table printed for `name`: one of triv, b_d, b_e, b_de, h0, h_d, h_e,
/// h_de, eta1, eta2 (η1, η2 also accepted).
pub fn named_table(name: &str) -> Result<CocycleTable> {
    let rows = match name.trim() {
        "eta1" | "η1" => ETA1,
        "eta2" | "η2" => ETA2,
        other => {
            NAMES
                .iter()
                .find(|(n, _)| *n == other)
                .ok_or_else(|| Error::UnknownName(other.to_string()))?
                .1
        }
    };
    CocycleTable::new(rows)
}

pub fn named_class(name: &str) -> Result<CohClass> {
    Ok(CohClass::of(&named_table(name)?))
}

/// The eight classes, by brute force over the 512 normalized tables.
pub fn enumerate_classes() -> &'static [CohClass] {
    static CLASSES: OnceLock<Vec<CohClass>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        let mut out: Vec<CohClass> = Vec::new();
        for bits in 0u16..512 {
            let mut c = [[1i8; 4]; 4];
            for k in 0..9 {
                if bits & (1 << k) != 0 {
                    c[1 + k / 3][1 + k % 3] = -1;
                }
            }
            let t = CocycleTable { c };
            if t.is_cocycle() {
                let cls = CohClass::of(&t);
                if !out.contains(&cls) {
                    out.push(cls);
                }
            }
        }
        out.sort_by_key(|x| x.rep.sort_key());
        out
    })
}

pub fn multiply(x: &CohClass, y: &CohClass) -> CohClass {
    CohClass::of(&x.rep.mul(&y.rep))
}

/// Whether the class contains a symmetric cocycle. For an abelian group this
/// is the same for every member of the coset.
pub fn is_symmetric(x: &CohClass) -> bool {
    let verdicts: Vec<bool> = x.members().iter().map(|t| t.is_symmetric()).collect();
    assert!(
        verdicts.iter().all(|&v| v == verdicts[0]),
        "symmetry is not constant on the class {x}"
    );
    verdicts[0]
}

/// Isomorphism type of the group extension of G by {±1}, with the subfield
/// over which the C4 piece lives where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExtType {
    #[serde(rename = "C2^3")]
    C2Cubed,
    #[serde(rename = "C4xC2_over_d")]
    C4C2OverD,
    #[serde(rename = "C4xC2_over_e")]
    C4C2OverE,
    #[serde(rename = "C4xC2_over_de")]
    C4C2OverDe,
    #[serde(rename = "D4_over_K")]
    D4OverK,
    #[serde(rename = "D4_over_Ke")]
    D4OverKe,
    #[serde(rename = "D4_over_Kde")]
    D4OverKde,
    H8,
}

impl ExtType {
    pub fn name(self) -> &'static str {
        match self {
            ExtType::C2Cubed => "C2^3",
            ExtType::C4C2OverD => "C4xC2_over_d",
            ExtType::C4C2OverE => "C4xC2_over_e",
            ExtType::C4C2OverDe => "C4xC2_over_de",
            ExtType::D4OverK => "D4_over_K",
            ExtType::D4OverKe => "D4_over_Ke",
            ExtType::D4OverKde => "D4_over_Kde",
            ExtType::H8 => "H8",
        }
    }
}

impl fmt::Display for ExtType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_extension(x: &CohClass) -> ExtType {
    match x.name() {
        "triv" => ExtType::C2Cubed,
        "b_d" => ExtType::C4C2OverD,
        "b_e" => ExtType::C4C2OverE,
        "b_de" => ExtType::C4C2OverDe,
        "h_d" => ExtType::D4OverK,
        "h_e" => ExtType::D4OverKe,
        "h_de" => ExtType::D4OverKde,
        "h0" => ExtType::H8,
        other => unreachable!("unnamed class {other}"),
    }
}

/// The class of L(√γ)/Q as an extension of G by {±1}, or `None` when
/// L(√γ)/Q is not Galois.
pub fn galois_type_of_gamma(gamma: &BiquadElt) -> Result<Option<CohClass>> {
    if gamma.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = gamma.denominator_lcm();
    let gamma = gamma.scale(&Rat::from_integer(&n * &n));
    if gamma.is_square() {
        return Err(Error::Degenerate(format!("{gamma} is a square in L")));
    }
    let mut alpha: Vec<BiquadElt> = Vec::with_capacity(4);
    for s in GroupElem::ALL {
        if s == GroupElem::One {
            alpha.push(gamma.field().one());
            continue;
        }
        let r = gamma.galois_apply(s).checked_div(&gamma)?;
        match r.sqrt() {
            Some(a) => alpha.push(a),
            None => return Ok(None),
        }
    }
    let mut c = [[1i8; 4]; 4];
    for s in GroupElem::ALL {
        for t in GroupElem::ALL {
            let num = alpha[s.index()].checked_mul(&alpha[t.index()].galois_apply(s))?;
            let v = num.checked_div(&alpha[s.mul(t).index()])?;
            c[s.index()][t.index()] = match v.as_rational() {
                Some(q) if q.is_one() => 1,
                Some(q) if (-q).is_one() => -1,
                _ => {
                    return Err(Error::Internal(format!(
                        "cocycle value {v} at ({s}, {t}) is not a sign"
                    )))
                }
            };
        }
    }
    let t = CocycleTable::new(c).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Some(CohClass::of(&t)))
}

/// Sign component of ξ_L for μ_ν² = m: η1 when m > 0, η2 when m < 0.
pub fn xi_sign_class(m: &Rat) -> Result<CohClass> {
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    if m.is_one() {
        return Err(Error::InvalidInput("m must not be 1".into()));
    }
    let s: i8 = if m.is_negative() { -1 } else { 1 };
    // rows θ: (1,1,−1,−1), ν: (1,1,m,m), νθ: (1,1,−m,−m), reduced to signs
    let t = CocycleTable::new([[1, 1, 1, 1], [1, 1, -1, -1], [1, 1, s, s], [1, 1, -s, -s]])?;
    let named = named_table(if s > 0 { "eta1" } else { "eta2" })?;
    debug_assert_eq!(t, named);
    Ok(CohClass::of(&t))
}
