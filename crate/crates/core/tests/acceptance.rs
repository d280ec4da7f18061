//! Acceptance gate: ten criteria, exact values, one pass/fail line each.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qtwist::arith::{factor::is_squarefree, int, rat, Biquad, BiquadElt, QuadElt, Rat};
use qtwist::brauer::{hilbert_symbol, is_trivial, reduced_discriminant, relevant_places};
use qtwist::classify::{classify, Origin};
use qtwist::cohom::{enumerate_classes, galois_type_of_gamma, is_symmetric, multiply, named_class};
use qtwist::embed::{case_solvable, conic_point, d4_gamma, gamma_for_case, h8_gamma, CaseId, DEFAULT_HEIGHT};
use qtwist::qcurve::{family_ea, integral_scale, pyl_curve, quadratic_twist, QCurveInput};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn runner(seed: u8) -> TestRunner {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    TestRunner::new_with_rng(Config::default(), rng)
}

fn criterion_1() -> Outcome {
    let table = [
        ((-2, -3), 2),
        ((-6, 3), 6),
        ((6, -3), 6),
        ((6, -18), 1),
        ((7, -3), 1),
        ((-7, -3), 3),
        ((-7, 3), 21),
        ((3, -5), 10),
        ((-3, -5), 5),
        ((5, -3), 15),
        ((5, -15), 15),
        ((3, -2), 1),
    ];
    for ((a, b), want) in table {
        let got = reduced_discriminant(&int(a), &int(b)).map_err(|e| e.to_string())?;
        ensure(got == BigInt::from(want), || format!("({a},{b}): got {got}, want {want}"))?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut r = runner(2);
    let part = (-10_000i64..=10_000)
        .prop_filter("nonzero", |n| *n != 0)
        .prop_flat_map(|n| (proptest::strategy::Just(n), 1i64..=10_000))
        .prop_map(|(n, d)| rat(n, d));
    let pair = (part.clone(), part);
    for _ in 0..500 {
        let (a, b) = pair.new_tree(&mut r).map_err(|e| e.to_string())?.current();
        let mut prod = 1;
        for v in relevant_places(&[&a, &b]).map_err(|e| e.to_string())? {
            prod *= hilbert_symbol(&a, &b, &v).map_err(|e| e.to_string())?;
        }
        ensure(prod == 1, || format!("product formula fails for ({a}, {b})"))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let all = enumerate_classes();
    ensure(all.len() == 8, || format!("{} classes", all.len()))?;
    let sym = all.iter().filter(|c| is_symmetric(c)).count();
    ensure(sym == 4, || format!("{sym} symmetric classes"))
}

fn criterion_4() -> Outcome {
    let table = [
        ("eta1", "h0", "b_de"),
        ("eta1", "h_d", "b_e"),
        ("eta1", "h_e", "b_d"),
        ("eta1", "h_de", "triv"),
        ("eta2", "h0", "b_e"),
        ("eta2", "h_d", "b_de"),
        ("eta2", "h_e", "triv"),
        ("eta2", "h_de", "b_d"),
    ];
    for (x, y, z) in table {
        let c = |n| named_class(n).map_err(|e| e.to_string());
        let got = multiply(&c(x)?, &c(y)?);
        ensure(got == c(z)?, || format!("[{x}][{y}] = {got}, want {z}"))?;
    }
    Ok(())
}

fn same_square_class(a: &BiquadElt, b: &BiquadElt) -> Result<bool, String> {
    let ratio = a.checked_div(b).map_err(|e| e.to_string())?;
    Ok(ratio.sqrt().is_some())
}

fn criterion_5() -> Outcome {
    let l = Biquad::new(6, 3).unwrap();
    let t = h8_gamma(6, 3, DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
    // 1 + 2/√6 − 1/√3 − 1/√2 with 1/√2 = 3/√18 = √18/6
    let printed = l.elt([int(1), rat(1, 3), rat(-1, 3), rat(-1, 6)]);
    ensure(same_square_class(t.t(), &printed)?, || format!("H8 t = {}", t.t()))?;

    let l1 = Biquad::new(-3, -2).unwrap();
    let t = d4_gamma(CaseId::B, -3, -2).map_err(|e| e.to_string())?;
    let q = l1.from_ints([2, 0, -1, 0]).checked_div(t.t()).map_err(|e| e.to_string())?;
    ensure(q.as_rational().is_some(), || format!("case B t = {} is not a rational multiple of 2-sqrt(-2)", t.t()))?;

    let t = d4_gamma(CaseId::D, 6, 3).map_err(|e| e.to_string())?;
    ensure(same_square_class(t.t(), &l.from_ints([18, 6, 0, 0]))?, || format!("case D t = {}", t.t()))?;

    let l3 = Biquad::new(7, 3).unwrap();
    let t = d4_gamma(CaseId::C, 7, 3).map_err(|e| e.to_string())?;
    ensure(same_square_class(t.t(), &l3.from_ints([7, 2, 0, 0]))?, || format!("case C t = {}", t.t()))
}

fn squarefree_range(bound: i64) -> Vec<i64> {
    (-bound..=bound)
        .filter(|&n| n != 0 && n != 1 && is_squarefree(&BigInt::from(n)).unwrap())
        .collect()
}

fn criterion_6() -> Outcome {
    let vals = squarefree_range(20);
    let mut pairs = 0;
    let mut solved = 0;
    for &d in &vals {
        for &e in &vals {
            if d == e {
                continue;
            }
            pairs += 1;
            for case in CaseId::ALL {
                if !case_solvable(case, d, e).map_err(|x| x.to_string())? {
                    continue;
                }
                let fam = gamma_for_case(case, d, e, DEFAULT_HEIGHT)
                    .map_err(|x| format!("({d},{e}) case {case}: {x}"))?;
                let class = galois_type_of_gamma(fam.t()).map_err(|x| x.to_string())?;
                ensure(class == Some(case.expected_class()), || {
                    format!("({d},{e}) case {case}: class {class:?}")
                })?;
                solved += 1;
            }
        }
    }
    ensure(pairs == 600, || format!("{pairs} pairs"))?;
    ensure(solved > 0, || "no solvable case".into())
}

fn criterion_7() -> Outcome {
    let l1 = Biquad::new(-3, -2).unwrap();
    let b = QuadElt::new(-3, rat(1, 2), rat(1, 2)).unwrap();
    let input = pyl_curve(&b).map_err(|e| e.to_string())?;
    let tw = quadratic_twist(input.curve().unwrap(), &l1.from_ints([2, 0, -1, 0])).map_err(|e| e.to_string())?;
    let bl = l1.embed(&b).unwrap();
    ensure(*tw.a2() == l1.from_ints([4, 0, -2, 0]), || format!("a2 = {}", tw.a2()))?;
    ensure(*tw.a4() == &bl * &l1.from_ints([2, 0, -4, 0]), || format!("a4 = {}", tw.a4()))?;
    ensure(tw.a6().is_zero(), || format!("a6 = {}", tw.a6()))?;

    let l2 = Biquad::new(6, 3).unwrap();
    let e6 = family_ea(6).unwrap();
    let gp = l2.from_ints([18, 6, 0, 0]).scale(&rat(1, 6));
    let tw = quadratic_twist(e6.curve().unwrap(), &gp).map_err(|e| e.to_string())?;
    let m = integral_scale(&tw, &BigInt::from(2)).map_err(|e| e.to_string())?;
    ensure(*m.a4() == l2.from_ints([-28512, -11520, 0, 0]), || format!("a4 = {}", m.a4()))?;
    ensure(*m.a6() == l2.from_ints([2594304, 1059840, 0, 0]), || format!("a6 = {}", m.a6()))?;

    let l3 = Biquad::new(7, 3).unwrap();
    let e7 = family_ea(7).unwrap();
    let tw = quadratic_twist(e7.curve().unwrap(), &l3.from_ints([7, 2, 0, 0])).map_err(|e| e.to_string())?;
    let m = integral_scale(&tw, &BigInt::from(2)).map_err(|e| e.to_string())?;
    ensure(*m.a4() == l3.from_ints([-166992, -61824, 0, 0]), || format!("a4 = {}", m.a4()))?;
    ensure(*m.a6() == l3.from_ints([36452864, 13804672, 0, 0]), || format!("a6 = {}", m.a6()))
}

fn criterion_8() -> Outcome {
    let l = Biquad::new(6, 3).unwrap();
    let e6 = family_ea(6).unwrap().curve().unwrap().clone();
    let j = e6.j_invariant();
    let want = l.elt([rat(27625536, 125), rat(10768896, 125), Rat::zero(), Rat::zero()]);
    ensure(j == want, || format!("j(E_6) = {j}"))?;
    let mut r = runner(8);
    let coords = proptest::array::uniform4((-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d)));
    let mut done = 0;
    while done < 100 {
        let c = coords.new_tree(&mut r).map_err(|e| e.to_string())?.current();
        let g = l.elt(c);
        if g.is_zero() {
            continue;
        }
        let tw = quadratic_twist(&e6, &g).map_err(|e| e.to_string())?;
        ensure(tw.j_invariant() == j, || format!("j changes under the twist by {g}"))?;
        done += 1;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let b = QuadElt::new(-3, rat(1, 2), rat(1, 2)).unwrap();
    let r = classify(&pyl_curve(&b).unwrap(), DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
    ensure(r.solvable_cases() == vec![CaseId::B], || format!("(-3,-2): {:?}", r.solvable_cases()))?;
    ensure(r.case(CaseId::B).origin == Some(Origin::Primitive), || "(-3,-2): origin".into())?;
    ensure(!r.twist_over_k.exists, || "(-3,-2): twist over K".into())?;

    let r = classify(&family_ea(6).unwrap(), DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
    ensure(r.solvable_cases() == vec![CaseId::A, CaseId::D], || format!("(6,3): {:?}", r.solvable_cases()))?;

    let r = classify(&family_ea(7).unwrap(), DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
    ensure(r.solvable_cases() == vec![CaseId::C], || format!("(7,3): {:?}", r.solvable_cases()))?;
    let no_primitive = r.cases.iter().filter(|c| c.solvable).all(|c| matches!(c.case, CaseId::C | CaseId::D));
    ensure(no_primitive, || "(7,3): a primitive case is solvable".into())?;
    // with any m the only solvable case is inflated from K or Q
    for m in [-2, 2, 3, -4, 9] {
        let input = QCurveInput::new(7, 3, Some(int(m)), None).unwrap();
        let r = classify(&input, DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
        ensure(r.has_primitive_twist == Some(false), || format!("(7,3), m = {m}: primitive twist reported"))?;
    }

    let r = classify(&family_ea(5).unwrap(), DEFAULT_HEIGHT).map_err(|e| e.to_string())?;
    ensure(r.solvable_cases().is_empty(), || format!("(5,3): {:?}", r.solvable_cases()))
}

fn criterion_10() -> Outcome {
    let range: Vec<i64> = (-20..=20).filter(|&x| x != 0).collect();
    for &a in &range {
        for &b in &range {
            for &c in &range {
                let point = conic_point(a, b, c).map_err(|e| format!("({a},{b},{c}): {e}"))?;
                let local = is_trivial(&int(-a * c), &int(-b * c)).map_err(|e| e.to_string())?;
                ensure(point.is_some() == local, || format!("({a},{b},{c}): point {point:?}, local {local}"))?;
                if let Some([x, y, z]) = point {
                    let q = BigInt::from(a) * &x * &x + BigInt::from(b) * &y * &y + BigInt::from(c) * &z * &z;
                    ensure(q.is_zero() && !(x.is_zero() && y.is_zero() && z.is_zero()), || {
                        format!("({a},{b},{c}): bad point ({x},{y},{z})")
                    })?;
                }
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        (1, "reduced discriminants of the worked examples", criterion_1, Duration::from_secs(1)),
        (2, "Hilbert product formula on 500 random pairs", criterion_2, Duration::from_secs(5)),
        (3, "8 cohomology classes, 4 symmetric", criterion_3, Duration::from_secs(1)),
        (4, "eta x h multiplication table", criterion_4, Duration::from_secs(1)),
        (5, "embedding solvers reproduce the printed generators", criterion_5, Duration::from_secs(5)),
        (6, "oracle soundness for all squarefree |d|,|e| <= 20", criterion_6, Duration::from_secs(30)),
        (7, "twisted and integral models", criterion_7, Duration::from_secs(5)),
        (8, "j(E_6) and j-invariance under 100 twists", criterion_8, Duration::from_secs(5)),
        (9, "end-to-end classification", criterion_9, Duration::from_secs(5)),
        (10, "conic decision procedure on [-20,20]^3", criterion_10, Duration::from_secs(20)),
    ];
    let mut failures = Vec::new();
    for (n, name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= budget, || format!("took {elapsed:?}, budget {budget:?}"))
        });
        match &outcome {
            Ok(()) => println!("criterion {n:>2} PASS  {name} ({elapsed:.2?})"),
            Err(msg) => {
                println!("criterion {n:>2} FAIL  {name} ({elapsed:.2?}): {msg}");
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
