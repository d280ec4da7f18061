//! Command-line front end. Every command prints one JSON document on stdout
//! (`paper-examples` prints one per check); errors go to stderr as JSON.

use std::io::Write;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::factor::set_trial_division_bound;
use crate::arith::{fmt_rat, int, parse_rat, rat, Biquad, BiquadElt, QuadElt};
use crate::brauer::{hilbert_symbol, ramified_places, reduced_discriminant, Place};
use crate::classify::{canonical_field, classify, ClassificationReport};
use crate::cohom::{classify_extension, galois_type_of_gamma, named_class};
use crate::embed::{case_solvable, d4_gamma, gamma_for_case, h8_gamma, CaseId, DEFAULT_HEIGHT};
use crate::error::{Error, Result};
use crate::qcurve::{family_ea, integral_scale, least_integral_scale, pyl_curve, quadratic_twist, CurveModel, QCurveInput};

pub const SCHEMA: &str = "1";

/// Overrides the trial-division bound used by factorization.
pub const FACTOR_BOUND_VAR: &str = "QTWIST_FACTOR_BOUND";

#[derive(Debug, Parser)]
#[command(name = "qtwist", version, about = "Strongly modular quadratic twists of quadratic Q-curves")]
pub struct Cli {
    /// Indented JSON instead of one line.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local Hilbert symbol (a, b)_v.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime, or "inf".
        #[arg(long)]
        place: String,
    },
    /// Ramification of the quaternion algebra (a, b) over Q.
    Quaternion {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Which strongly modular twists exist over Q(√d, √e) and where they come from.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// The integer m with μ_ν ∘ ν(μ_ν) = m.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
        /// Accepted for symmetry with --pretty; JSON is the default.
        #[arg(long)]
        json: bool,
    },
    /// Generator t of the family L(√(q·t)) for one case.
    Gamma {
        #[arg(long)]
        case: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
    },
    /// Group-extension type of L(√γ)/Q.
    GaloisType {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// JSON array of four rational strings.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Quadratic twist of a curve, rescaled to an integral model.
    Twist {
        /// Curve JSON, inline or a path to a file.
        #[arg(long)]
        curve: String,
        /// JSON array of four rational strings.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// Scale factor u; defaults to the least u giving integral coefficients.
        #[arg(long)]
        scale: Option<String>,
    },
    /// Replays the worked examples and reports one line per check.
    PaperExamples,
}

fn parse_i64_field(d: &str, e: &str) -> Result<Biquad> {
    let (d, e) = canonical_field(&parse_rat(d)?, &parse_rat(e)?)?;
    Biquad::new(d, e)
}

fn field_json(l: Biquad) -> (String, String) {
    (l.d().to_string(), l.e().to_string())
}

/// The classification report in its JSON form.
pub fn report_json(r: &ClassificationReport) -> Value {
    let mut solvable = serde_json::Map::new();
    for c in &r.cases {
        solvable.insert(c.case.to_string(), Value::Bool(c.solvable));
    }
    json!({
        "schema": SCHEMA,
        "input": r.input,
        "xi": r.xi,
        "cases": solvable,
        "details": r.cases,
        "twist_over_K": r.twist_over_k,
        "has_primitive_twist": r.has_primitive_twist,
    })
}

fn gamma_json(l: Biquad, fam: &crate::embed::GammaFamily) -> Value {
    let class = fam.case().expected_class();
    let (d, e) = field_json(l);
    json!({
        "schema": SCHEMA,
        "d": d,
        "e": e,
        "case": fam.case(),
        "t": fam.t(),
        "witness": fam.witness(),
        "family": "q*t, q in Q^x",
        "class": class,
        "extension": classify_extension(&class),
    })
}

/// Runs one command, returning the JSON documents to print and the exit code
/// that goes with them.
pub fn execute(cmd: &Command) -> Result<(Vec<Value>, i32)> {
    match cmd {
        Command::Hilbert { a, b, place } => {
            let (a, b) = (parse_rat(a)?, parse_rat(b)?);
            let v = Place::parse(place)?;
            let s = hilbert_symbol(&a, &b, &v)?;
            let out = json!({"schema": SCHEMA, "a": fmt_rat(&a), "b": fmt_rat(&b), "place": v.to_string(), "symbol": s});
            Ok((vec![out], 0))
        }
        Command::Quaternion { a, b } => {
            let (a, b) = (parse_rat(a)?, parse_rat(b)?);
            let ram: Vec<String> = ramified_places(&a, &b)?.iter().map(Place::to_string).collect();
            let disc = reduced_discriminant(&a, &b)?;
            let out = json!({
                "schema": SCHEMA,
                "a": fmt_rat(&a),
                "b": fmt_rat(&b),
                "ramified": ram,
                "reduced_discriminant": disc.to_string(),
                "trivial": ram.is_empty(),
            });
            Ok((vec![out], 0))
        }
        Command::Classify { d, e, m, height, .. } => {
            let l = parse_i64_field(d, e)?;
            let m = m.as_deref().map(parse_rat).transpose()?;
            let input = QCurveInput::new(l.d(), l.e(), m, None)?;
            let report = classify(&input, *height)?;
            let code = if report.any_bound_exceeded() { 3 } else { 0 };
            Ok((vec![report_json(&report)], code))
        }
        Command::Gamma { case, d, e, height } => {
            let l = parse_i64_field(d, e)?;
            let case = CaseId::parse(case)?;
            let fam = gamma_for_case(case, l.d(), l.e(), *height)?;
            Ok((vec![gamma_json(l, &fam)], 0))
        }
        Command::GaloisType { d, e, gamma } => {
            let l = parse_i64_field(d, e)?;
            let g = l.parse_json(gamma)?;
            let class = galois_type_of_gamma(&g)?;
            let out = json!({
                "schema": SCHEMA,
                "galois": class.is_some(),
                "class": class,
                "extension": class.map(|c| classify_extension(&c)),
            });
            Ok((vec![out], 0))
        }
        Command::Twist { curve, gamma, scale } => {
            let text = if curve.trim_start().starts_with('{') {
                curve.clone()
            } else {
                std::fs::read_to_string(curve)
                    .map_err(|err| Error::InvalidInput(format!("cannot read curve file {curve:?}: {err}")))?
            };
            let c = CurveModel::from_json(&text)?;
            let g = c.field().parse_json(gamma)?;
            let tw = quadratic_twist(&c, &g)?;
            let u = match scale {
                Some(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("scale must be a positive integer, got {s:?}")))?,
                None => least_integral_scale(&tw)?,
            };
            let model = integral_scale(&tw, &u)?;
            let out = json!({
                "schema": SCHEMA,
                "scale": u.to_string(),
                "curve": model,
                "integral": model.is_integral(),
                "j": model.j_invariant(),
            });
            Ok((vec![out], 0))
        }
        Command::PaperExamples => {
            let checks = worked_examples();
            let failed = checks.iter().filter(|c| !c.pass).count();
            let mut docs: Vec<Value> = checks
                .iter()
                .map(|c| json!({"check": c.name, "pass": c.pass, "detail": c.detail}))
                .collect();
            docs.push(json!({"schema": SCHEMA, "checks": checks.len(), "failed": failed}));
            Ok((docs, i32::from(failed > 0)))
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    if let Ok(raw) = std::env::var(FACTOR_BOUND_VAR) {
        match raw.trim().parse::<u64>() {
            Ok(b) => set_trial_division_bound(b),
            Err(_) => {
                let e = Error::InvalidInput(format!("{FACTOR_BOUND_VAR} must be a positive integer, got {raw:?}"));
                return report_error(&e, err);
            }
        }
    }
    match execute(&cli.command) {
        Ok((docs, code)) => {
            for doc in docs {
                let text = if cli.pretty {
                    serde_json::to_string_pretty(&doc)
                } else {
                    serde_json::to_string(&doc)
                }
                .expect("JSON values serialize");
                let _ = writeln!(out, "{text}");
            }
            code
        }
        Err(e) => report_error(&e, err),
    }
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    let doc = json!({"schema": SCHEMA, "error": e.to_string(), "exit_code": e.exit_code()});
    let _ = writeln!(err, "{doc}");
    e.exit_code()
}

/// One regression check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &str, result: Result<bool>) {
    let (pass, detail) = match result {
        Ok(true) => (true, String::new()),
        Ok(false) => (false, "value mismatch".to_string()),
        Err(e) => (false, e.to_string()),
    };
    out.push(Check { name: name.to_string(), pass, detail });
}

fn rd_is(a: i64, b: i64, expected: i64) -> Result<bool> {
    Ok(reduced_discriminant(&int(a), &int(b))? == BigInt::from(expected))
}

fn elt(l: Biquad, c: [i64; 4]) -> BiquadElt {
    l.from_ints(c)
}

/// The published values for the four fields Q(√−3,√−2), Q(√6,√3),
/// Q(√7,√3) and Q(√5,√3), recomputed from scratch.
pub fn worked_examples() -> Vec<Check> {
    let mut out = Vec::new();
    let c = &mut out;

    // Q(√−3, √−2), y² = x³ + 2x² + bx with b of trace 1, m = −2
    let l1 = Biquad::new(-3, -2).expect("valid field");
    check(c, "Q(sqrt-3,sqrt-2): (3,-2) has reduced discriminant 1", rd_is(3, -2, 1));
    check(c, "Q(sqrt-3,sqrt-2): case B generator is -2+sqrt(-2)", (|| {
        let fam = d4_gamma(CaseId::B, -3, -2)?;
        Ok(*fam.t() == elt(l1, [-2, 0, 1, 0]) && fam.member(&int(-1))? == elt(l1, [2, 0, -1, 0]))
    })());
    check(c, "Q(sqrt-3,sqrt-2): 2-sqrt(-2) gives D4 with C4 over K", (|| {
        let class = galois_type_of_gamma(&elt(l1, [2, 0, -1, 0]))?;
        Ok(class == Some(named_class("h_d")?))
    })());
    check(c, "Q(sqrt-3,sqrt-2): r + r/sqrt(-2) at r = 2 is the family member -t", (|| {
        let r = l1.from_rat(int(2));
        let g = &r + &(&r * &l1.sqrt_e().inv()?);
        Ok(g == d4_gamma(CaseId::B, -3, -2)?.member(&int(-1))?)
    })());
    check(c, "Q(sqrt-3,sqrt-2): twisted model coefficients", (|| {
        let b = QuadElt::new(-3, rat(1, 2), rat(1, 2))?;
        let input = pyl_curve(&b)?;
        let curve = input.curve().ok_or_else(|| Error::Internal("missing curve".into()))?;
        let tw = quadratic_twist(curve, &elt(l1, [2, 0, -1, 0]))?;
        let bl = l1.embed(&b)?;
        Ok(*tw.a2() == elt(l1, [4, 0, -2, 0]) && *tw.a4() == &bl * &elt(l1, [2, 0, -4, 0]) && tw.a6().is_zero())
    })());
    check(c, "Q(sqrt-3,sqrt-2): only case B, primitive, no twist over K", (|| {
        let b = QuadElt::new(-3, rat(1, 2), rat(1, 2))?;
        let r = classify(&pyl_curve(&b)?, DEFAULT_HEIGHT)?;
        Ok(r.solvable_cases() == vec![CaseId::B]
            && r.case(CaseId::B).origin == Some(crate::classify::Origin::Primitive)
            && !r.twist_over_k.exists)
    })());

    // Q(√6, √3), the curve E_6
    let l2 = Biquad::new(6, 3).expect("valid field");
    check(c, "Q(sqrt6,sqrt3): j(E_6) = (27625536+10768896 sqrt6)/125", (|| {
        let e6 = family_ea(6)?;
        let j = e6.curve().ok_or_else(|| Error::Internal("missing curve".into()))?.j_invariant();
        Ok(j == l2.elt([rat(27625536, 125), rat(10768896, 125), int(0), int(0)]))
    })());
    for (a, b, v) in [(-2, -3, 2), (-6, -3, 2), (-6, 3, 6), (6, -3, 6), (6, -18, 1)] {
        check(c, &format!("Q(sqrt6,sqrt3): ({a},{b}) has reduced discriminant {v}"), rd_is(a, b, v));
    }
    check(c, "Q(sqrt6,sqrt3): H8 generator 1+2/sqrt6-1/sqrt3-1/sqrt2", (|| {
        let fam = h8_gamma(6, 3, DEFAULT_HEIGHT)?;
        let expected = l2.elt([int(1), rat(1, 3), rat(-1, 3), rat(-1, 6)]);
        let class = galois_type_of_gamma(fam.t())?;
        Ok(*fam.t() == expected && class == Some(named_class("h0")?))
    })());
    check(c, "Q(sqrt6,sqrt3): 6y^2-x^2=18 solved by (6,3), t=18+6sqrt6", (|| {
        let fam = d4_gamma(CaseId::D, 6, 3)?;
        let w = crate::embed::Witness::Conic { x: int(6), y: int(3) };
        Ok(*fam.t() == elt(l2, [18, 6, 0, 0]) && *fam.witness() == w)
    })());
    check(c, "Q(sqrt6,sqrt3): integral model of the twist by gamma'=(18+6sqrt6)/6", (|| {
        let e6 = family_ea(6)?;
        let curve = e6.curve().ok_or_else(|| Error::Internal("missing curve".into()))?;
        let tw = quadratic_twist(curve, &elt(l2, [18, 6, 0, 0]).scale(&rat(1, 6)))?;
        let model = integral_scale(&tw, &BigInt::from(2))?;
        Ok(*model.a4() == elt(l2, [-28512, -11520, 0, 0]) && *model.a6() == elt(l2, [2594304, 1059840, 0, 0]))
    })());
    check(c, "Q(sqrt6,sqrt3): cases A and D only", (|| {
        let r = classify(&family_ea(6)?, DEFAULT_HEIGHT)?;
        Ok(r.solvable_cases() == vec![CaseId::A, CaseId::D])
    })());

    // Q(√7, √3), the curve E_7
    let l3 = Biquad::new(7, 3).expect("valid field");
    for (a, b, v) in [(7, -3, 1), (-7, -3, 3), (-7, 3, 21)] {
        check(c, &format!("Q(sqrt7,sqrt3): ({a},{b}) has reduced discriminant {v}"), rd_is(a, b, v));
    }
    check(c, "Q(sqrt7,sqrt3): case C generator 7+2sqrt7", (|| {
        Ok(*d4_gamma(CaseId::C, 7, 3)?.t() == elt(l3, [7, 2, 0, 0]))
    })());
    check(c, "Q(sqrt7,sqrt3): integral model with u = 2", (|| {
        let e7 = family_ea(7)?;
        let curve = e7.curve().ok_or_else(|| Error::Internal("missing curve".into()))?;
        let tw = quadratic_twist(curve, &elt(l3, [7, 2, 0, 0]))?;
        let model = integral_scale(&tw, &BigInt::from(2))?;
        Ok(*model.a4() == elt(l3, [-166992, -61824, 0, 0]) && *model.a6() == elt(l3, [36452864, 13804672, 0, 0]))
    })());
    check(c, "Q(sqrt7,sqrt3): case C only, twist over K by 7+2sqrt7", (|| {
        let r = classify(&family_ea(7)?, DEFAULT_HEIGHT)?;
        Ok(r.solvable_cases() == vec![CaseId::C]
            && r.twist_over_k.gamma_in_k == Some(QuadElt::new(7, int(7), int(2))?))
    })());

    // Q(√5, √3), the curve E_5
    for (a, b, v) in [(3, -5, 10), (-3, -5, 5), (5, -3, 15), (5, -15, 15)] {
        check(c, &format!("Q(sqrt5,sqrt3): ({a},{b}) has reduced discriminant {v}"), rd_is(a, b, v));
    }
    check(c, "Q(sqrt5,sqrt3): no strongly modular twists", (|| {
        let solvable: Result<Vec<bool>> = CaseId::ALL.iter().map(|&k| case_solvable(k, 5, 3)).collect();
        let r = classify(&family_ea(5)?, DEFAULT_HEIGHT)?;
        Ok(solvable?.iter().all(|s| !s) && r.solvable_cases().is_empty())
    })());
    out
}
