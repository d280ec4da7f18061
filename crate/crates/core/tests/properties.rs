use proptest::prelude::*;

use qtwist::arith::{rat, Biquad, Rat};
use qtwist::classify::classify;
use qtwist::cohom::galois_type_of_gamma;
use qtwist::embed::{case_solvable, gamma_for_case, CaseId, DEFAULT_HEIGHT};
use qtwist::qcurve::QCurveInput;

const FIELDS: [(i64, i64); 8] = [(6, 3), (7, 3), (-3, -2), (2, 3), (-1, 2), (5, 3), (-2, 7), (10, 3)];

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (-200i64..=200, 1i64..=50).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_members_share_the_class(idx in 0..FIELDS.len(), q in nonzero_rat()) {
        let (d, e) = FIELDS[idx];
        for case in CaseId::ALL {
            if !case_solvable(case, d, e).unwrap() {
                continue;
            }
            let fam = gamma_for_case(case, d, e, DEFAULT_HEIGHT).unwrap();
            let g = fam.member(&q).unwrap();
            prop_assert_eq!(galois_type_of_gamma(&g).unwrap(), Some(case.expected_class()));
        }
    }

    #[test]
    fn class_ignores_square_factors(
        idx in 0..FIELDS.len(),
        s in proptest::array::uniform4(-6i64..=6),
    ) {
        let (d, e) = FIELDS[idx];
        let l = Biquad::new(d, e).unwrap();
        let s = l.from_ints(s);
        prop_assume!(!s.is_zero());
        let s2 = &s * &s;
        for case in CaseId::ALL {
            if !case_solvable(case, d, e).unwrap() {
                continue;
            }
            let t = gamma_for_case(case, d, e, DEFAULT_HEIGHT).unwrap().t().clone();
            prop_assert_eq!(galois_type_of_gamma(&(&t * &s2)).unwrap(), Some(case.expected_class()));
        }
    }

    #[test]
    fn report_is_consistent(idx in 0..FIELDS.len(), m in -30i64..=30) {
        prop_assume!(m != 0 && m != 1);
        let (d, e) = FIELDS[idx];
        let r = classify(&QCurveInput::new(d, e, Some(rat(m, 1)), None).unwrap(), DEFAULT_HEIGHT).unwrap();
        prop_assert_eq!(r.cases.len(), 4);
        for c in &r.cases {
            prop_assert_eq!(c.solvable, case_solvable(c.case, r.input.d(), r.input.e()).unwrap());
            prop_assert_eq!(c.solvable, c.gamma.is_some());
            prop_assert_eq!(c.solvable, c.origin.is_some());
        }
        let any_primitive = r.cases.iter().any(|c| c.origin == Some(qtwist::classify::Origin::Primitive));
        prop_assert_eq!(r.has_primitive_twist, Some(any_primitive));
    }
}
