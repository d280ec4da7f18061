//! Which strongly modular twists of a quadratic Q-curve exist over L, where
//! they come from, and whether one is already defined over K.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{fmt_rat, int, is_rational_square, squarefree_part, QuadElt, Rat};
use crate::cohom::{galois_type_of_gamma, is_symmetric, multiply, named_class, xi_sign_class, CohClass};
use crate::embed::{case_solvable, gamma_for_case, CaseId, GammaFamily};
use crate::error::{Error, Result};
use crate::qcurve::QCurveInput;

/// Subfields of L = Q(√d, √e) fixed by a subgroup of order 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subfield {
    Q,
    K,
    Ke,
    Kde,
}

impl Subfield {
    pub fn name(self) -> &'static str {
        match self {
            Subfield::Q => "Q",
            Subfield::K => "K",
            Subfield::Ke => "K_e",
            Subfield::Kde => "K_de",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Primitive,
    InflatedFrom(Subfield),
    Unknown,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Primitive => f.write_str("primitive"),
            Origin::InflatedFrom(s) => write!(f, "inflated_from_{}", s.name()),
            Origin::Unknown => f.write_str("unknown"),
        }
    }
}

impl Serialize for Origin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The cocycle ξ_L attached to E over L, split into its sign class and the
/// squareness of its degree part |m|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiData {
    m: Rat,
    sign_class: CohClass,
    deg_trivial: bool,
    full_table: [[Rat; 4]; 4],
}

impl XiData {
    pub fn m(&self) -> &Rat {
        &self.m
    }

    pub fn sign_class(&self) -> CohClass {
        self.sign_class
    }

    pub fn deg_trivial(&self) -> bool {
        self.deg_trivial
    }

    /// Rows and columns in the order 1, θ, ν, νθ.
    pub fn full_table(&self) -> &[[Rat; 4]; 4] {
        &self.full_table
    }

    /// "eta1" or "eta2".
    pub fn sign_name(&self) -> &'static str {
        if self.m.is_positive() {
            "eta1"
        } else {
            "eta2"
        }
    }
}

impl Serialize for XiData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("m", &fmt_rat(&self.m))?;
        map.serialize_entry("sign_class", self.sign_name())?;
        map.serialize_entry("deg_trivial", &self.deg_trivial)?;
        let table: Vec<Vec<String>> = self.full_table.iter().map(|r| r.iter().map(fmt_rat).collect()).collect();
        map.serialize_entry("table", &table)?;
        map.end()
    }
}

pub fn build_xi(m: &Rat) -> Result<XiData> {
    let sign_class = xi_sign_class(m)?;
    let (one, neg) = (int(1), int(-1));
    let full_table = [
        [one.clone(), one.clone(), one.clone(), one.clone()],
        [one.clone(), one.clone(), neg.clone(), neg],
        [one.clone(), one.clone(), m.clone(), m.clone()],
        [one.clone(), one, -m.clone(), -m.clone()],
    ];
    if is_symmetric(&sign_class) {
        return Err(Error::Internal("sign class of the cocycle of E_L is symmetric".into()));
    }
    Ok(XiData {
        m: m.clone(),
        sign_class,
        deg_trivial: is_rational_square(&m.abs()),
        full_table,
    })
}

fn eta_index(sign_class: &CohClass) -> Result<usize> {
    if *sign_class == named_class("eta1")? {
        Ok(0)
    } else if *sign_class == named_class("eta2")? {
        Ok(1)
    } else {
        Err(Error::InvalidInput(format!("{sign_class} is not a sign class of the form eta1/eta2")))
    }
}

/// Where the twist of `case` comes from, read off the table of origins.
pub fn origin_label(case: CaseId, sign_class: &CohClass, deg_trivial: bool) -> Result<Origin> {
    use Subfield::*;
    let row = eta_index(sign_class)?;
    if !deg_trivial {
        return Ok(match case {
            CaseId::A | CaseId::B => Origin::Primitive,
            CaseId::C | CaseId::D => Origin::InflatedFrom(K),
        });
    }
    const TABLE: [[Subfield; 4]; 2] = [[Kde, Ke, K, Q], [Ke, Kde, Q, K]];
    let col = CaseId::ALL.iter().position(|c| *c == case).expect("case is listed");
    Ok(Origin::InflatedFrom(TABLE[row][col]))
}

/// The same label from the cocycle algebra: the product of the sign class
/// with the class of the case is inflated from Q, K, K_e or K_de.
pub fn origin_from_cohomology(case: CaseId, sign_class: &CohClass) -> Result<Origin> {
    eta_index(sign_class)?;
    let product = multiply(sign_class, &case.expected_class());
    let field = match product.name() {
        "triv" => Subfield::Q,
        "b_d" => Subfield::K,
        "b_e" => Subfield::Ke,
        "b_de" => Subfield::Kde,
        other => return Err(Error::Internal(format!("twisted class {other} is not symmetric"))),
    };
    Ok(Origin::InflatedFrom(field))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case: CaseId,
    pub solvable: bool,
    pub gamma: Option<GammaFamily>,
    /// Absent when the case is not solvable.
    pub origin: Option<Origin>,
    /// Solver failure for a solvable case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub bound_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistOverK {
    pub exists: bool,
    /// Preferred generator: from case C when solvable, else case D.
    pub gamma_in_k: Option<QuadElt>,
    pub candidates: Vec<(CaseId, QuadElt)>,
}

impl Serialize for TwistOverK {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        #[derive(Serialize)]
        struct Candidate<'a> {
            case: CaseId,
            gamma: &'a QuadElt,
        }
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("exists", &self.exists)?;
        map.serialize_entry("gamma_in_K", &self.gamma_in_k)?;
        let cands: Vec<Candidate> = self.candidates.iter().map(|(case, gamma)| Candidate { case: *case, gamma }).collect();
        map.serialize_entry("candidates", &cands)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub input: QCurveInput,
    pub xi: Option<XiData>,
    pub cases: Vec<CaseReport>,
    #[serde(rename = "twist_over_K")]
    pub twist_over_k: TwistOverK,
    /// Whether some twist is primitive over L; absent when m is not known.
    pub has_primitive_twist: Option<bool>,
}

impl ClassificationReport {
    pub fn case(&self, c: CaseId) -> &CaseReport {
        self.cases.iter().find(|r| r.case == c).expect("all four cases are reported")
    }

    pub fn solvable_cases(&self) -> Vec<CaseId> {
        self.cases.iter().filter(|r| r.solvable).map(|r| r.case).collect()
    }

    pub fn any_bound_exceeded(&self) -> bool {
        self.cases.iter().any(|r| r.bound_exceeded)
    }
}

/// Reduces d and e to squarefree integers and checks they give a biquadratic field.
pub fn canonical_field(d: &Rat, e: &Rat) -> Result<(i64, i64)> {
    let sf = |q: &Rat, name: &str| -> Result<i64> {
        if q.is_zero() {
            return Err(Error::InvalidField(format!("{name} must be nonzero")));
        }
        squarefree_part(q)?
            .0
            .to_i64()
            .ok_or_else(|| Error::InvalidField(format!("{name} is too large")))
    };
    let (d, e) = (sf(d, "d")?, sf(e, "e")?);
    if d == 1 || e == 1 {
        return Err(Error::InvalidField("d and e must not be rational squares".into()));
    }
    if d == e {
        return Err(Error::InvalidField(format!(
            "d and e have the same squarefree part {d}; Q(sqrt d, sqrt e) is quadratic"
        )));
    }
    Ok((d, e))
}

fn gamma_in_k(fam: &GammaFamily) -> Result<QuadElt> {
    fam.t()
        .as_in_k()
        .ok_or_else(|| Error::Internal(format!("case {} produced {} outside K", fam.case(), fam.t())))
}

fn twist_from_reports(reports: &[CaseReport]) -> Result<TwistOverK> {
    let mut candidates = Vec::new();
    for r in reports.iter().filter(|r| matches!(r.case, CaseId::C | CaseId::D)) {
        if let Some(fam) = &r.gamma {
            candidates.push((r.case, gamma_in_k(fam)?));
        }
    }
    let exists = reports.iter().any(|r| matches!(r.case, CaseId::C | CaseId::D) && r.solvable);
    Ok(TwistOverK {
        exists,
        gamma_in_k: candidates.first().map(|(_, g)| g.clone()),
        candidates,
    })
}

pub fn classify(input: &QCurveInput, height: u64) -> Result<ClassificationReport> {
    let (d, e) = (input.d(), input.e());
    let xi = input.m().map(build_xi).transpose()?;
    let mut cases = Vec::with_capacity(4);
    for case in CaseId::ALL {
        let solvable = case_solvable(case, d, e)?;
        let mut report = CaseReport {
            case,
            solvable,
            gamma: None,
            origin: None,
            error: None,
            bound_exceeded: false,
        };
        if solvable {
            match gamma_for_case(case, d, e, height) {
                Ok(fam) => report.gamma = Some(fam),
                Err(err @ Error::SolverBoundExceeded { .. }) => {
                    report.bound_exceeded = true;
                    report.error = Some(err.to_string());
                }
                Err(err) => return Err(err),
            }
            report.origin = Some(match &xi {
                None => Origin::Unknown,
                Some(xi) => {
                    let label = origin_label(case, &xi.sign_class, xi.deg_trivial)?;
                    if xi.deg_trivial && label != origin_from_cohomology(case, &xi.sign_class)? {
                        return Err(Error::Internal(format!("origin table and cocycle algebra disagree for case {case}")));
                    }
                    label
                }
            });
            if let (Some(xi), Some(fam)) = (&xi, &report.gamma) {
                let class = galois_type_of_gamma(fam.t())?
                    .ok_or_else(|| Error::Internal("solver output is not Galois".into()))?;
                if !is_symmetric(&multiply(&xi.sign_class, &class)) {
                    return Err(Error::Internal(format!("twisted cocycle for case {case} is not symmetric")));
                }
            }
        }
        cases.push(report);
    }
    let twist_over_k = twist_from_reports(&cases)?;
    let has_primitive_twist = xi.as_ref().map(|_| {
        cases
            .iter()
            .any(|r| r.solvable && r.origin == Some(Origin::Primitive))
    });
    Ok(ClassificationReport {
        input: input.clone(),
        xi,
        cases,
        twist_over_k,
        has_primitive_twist,
    })
}

/// Strongly modular twists over K exist iff case C or D is solvable; the
/// generator then lies in K = Q(√d).
pub fn twist_over_k(input: &QCurveInput) -> Result<TwistOverK> {
    let (d, e) = (input.d(), input.e());
    let mut reports = Vec::new();
    for case in [CaseId::C, CaseId::D] {
        let solvable = case_solvable(case, d, e)?;
        let gamma = if solvable { Some(gamma_for_case(case, d, e, crate::embed::DEFAULT_HEIGHT)?) } else { None };
        reports.push(CaseReport {
            case,
            solvable,
            gamma,
            origin: None,
            error: None,
            bound_exceeded: false,
        });
    }
    twist_from_reports(&reports)
}
