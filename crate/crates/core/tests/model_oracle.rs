//! Cross-checks the production evaluator against the plain oracle in
//! `common`: axiom verdicts, witnesses, schema instances, desugaring, and
//! randomly generated formulas over randomly assembled structures.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::{naive_eval, naive_holds, naive_witness};
use hflab_core::formula::{builtin, separation_instance, AxiomId, Formula, Term};
use hflab_core::hf::HfSet;
use hflab_core::model::{
    axiom_audit, satisfies, standard_battery, AuditOptions, Assignment, Structure, Verdict,
};

fn stage(k: u32) -> Structure {
    let mut v = HfSet::empty();
    for _ in 0..k {
        v = v.powerset().unwrap();
    }
    Structure::from_set(&v)
}

fn audit_formulas() -> Vec<(String, Formula)> {
    let mut out: Vec<(String, Formula)> = AxiomId::ALL
        .iter()
        .map(|id| (id.label().to_string(), builtin(*id)))
        .collect();
    for item in standard_battery() {
        out.push((
            format!("Z2/{}", item.id),
            separation_instance(&item.phi, &item.var),
        ));
    }
    out
}

#[test]
fn axiom_verdicts_match_the_oracle() {
    for k in 0..=3 {
        let m = stage(k);
        for (label, f) in audit_formulas() {
            let expected = naive_holds(m.universe(), &f);
            let got = satisfies(&m, &f, &Assignment::new()).unwrap();
            assert_eq!(got, expected, "stage {k}, axiom {label}");
        }
    }
}

#[test]
fn audit_witnesses_match_the_oracle() {
    for k in 0..=3 {
        let m = stage(k);
        let report = axiom_audit(&m, &standard_battery(), &AuditOptions::default()).unwrap();
        for row in &report.rows {
            if row.label == "Z2" {
                continue;
            }
            let f = Formula::parse(row.formula.as_ref().unwrap()).unwrap();
            match (&row.verdict, naive_witness(m.universe(), &f)) {
                (Verdict::Holds, None) => {}
                (Verdict::Fails(w), Some((oracle_asg, oracle_residual))) => {
                    assert_eq!(w.assignment, oracle_asg, "stage {k}, {}", row.label);
                    assert_eq!(w.residual, oracle_residual, "stage {k}, {}", row.label);
                }
                (got, oracle) => panic!(
                    "stage {k}, {}: verdict {} but oracle witness {:?}",
                    row.label,
                    got.status(),
                    oracle.map(|(a, _)| a)
                ),
            }
        }
    }
}

#[test]
fn desugaring_preserves_truth_values() {
    for k in 0..=3 {
        let m = stage(k);
        for (label, f) in audit_formulas() {
            let desugared = f.desugar();
            assert_eq!(
                naive_holds(m.universe(), &f),
                naive_holds(m.universe(), &desugared),
                "oracle disagrees after desugaring: stage {k}, {label}"
            );
            assert_eq!(
                satisfies(&m, &f, &Assignment::new()).unwrap(),
                satisfies(&m, &desugared, &Assignment::new()).unwrap(),
                "evaluator disagrees after desugaring: stage {k}, {label}"
            );
        }
    }
}

#[test]
fn enumerated_formulas_agree_with_the_oracle() {
    let formulas = hflab_core::model::enumerate_formulas(1, &["a", "b"]);
    for k in 2..=3 {
        let m = stage(k);
        for x in m.universe() {
            for y in m.universe() {
                let mut asg = Assignment::new();
                asg.insert("a".to_string(), x.clone());
                asg.insert("b".to_string(), y.clone());
                let mut env = vec![
                    ("a".to_string(), x.clone()),
                    ("b".to_string(), y.clone()),
                ];
                for f in &formulas {
                    let expected =
                        naive_eval(m.universe(), &BTreeMap::new(), f, &mut env);
                    let got = satisfies(&m, f, &asg).unwrap();
                    assert_eq!(got, expected, "stage {k}, {f} at a={x}, b={y}");
                }
            }
        }
    }
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop_oneof![Just("x0"), Just("x1"), Just("x2")].prop_map(Term::var),
        (0u32..2).prop_map(Term::ConstC),
        (0u64..64).prop_map(|c| Term::Literal(HfSet::decode(c))),
    ]
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::member(a, b)),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::equal(a, b)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.and(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.or(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.implies(q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| p.iff(q)),
            (prop_oneof![Just("x0"), Just("x1"), Just("x2")], inner.clone())
                .prop_map(|(v, p)| Formula::forall(v, p)),
            (prop_oneof![Just("x0"), Just("x1"), Just("x2")], inner.clone())
                .prop_map(|(v, p)| Formula::exists(v, p)),
            (
                prop_oneof![Just("x0"), Just("x1"), Just("x2")],
                arb_term(),
                inner.clone()
            )
                .prop_map(|(v, t, p)| Formula::forall_in(v, t, p)),
            (
                prop_oneof![Just("x0"), Just("x1"), Just("x2")],
                arb_term(),
                inner
            )
                .prop_map(|(v, t, p)| Formula::exists_in(v, t, p)),
        ]
    })
}

fn arb_structure() -> impl Strategy<Value = Structure> {
    (
        proptest::collection::vec(0u64..64, 0..6),
        0u64..16,
        0u64..16,
    )
        .prop_map(|(codes, t0, t1)| {
            let elements: Vec<HfSet> = codes.into_iter().map(HfSet::decode).collect();
            let mut tiers = BTreeMap::new();
            tiers.insert(0, HfSet::decode(t0));
            tiers.insert(1, HfSet::decode(t1));
            Structure::with_tiers(elements, tiers)
        })
}

proptest! {
    #[test]
    fn random_formulas_agree_with_the_oracle(
        f in arb_formula(),
        m in arb_structure(),
        v0 in 0u64..16,
        v1 in 0u64..16,
        v2 in 0u64..16,
    ) {
        let values = [
            ("x0", HfSet::decode(v0)),
            ("x1", HfSet::decode(v1)),
            ("x2", HfSet::decode(v2)),
        ];
        let asg: Assignment = values
            .iter()
            .map(|(v, x)| (v.to_string(), x.clone()))
            .collect();
        let mut env: Vec<(String, HfSet)> = values
            .iter()
            .map(|(v, x)| (v.to_string(), x.clone()))
            .collect();
        let expected = naive_eval(m.universe(), m.tiers(), &f, &mut env);
        let got = satisfies(&m, &f, &asg).unwrap();
        prop_assert_eq!(got, expected, "{} over {}", f, m);
    }

    #[test]
    fn random_desugaring_agrees(f in arb_formula(), m in arb_structure()) {
        let asg: Assignment = ["x0", "x1", "x2"]
            .iter()
            .map(|v| (v.to_string(), HfSet::empty()))
            .collect();
        let got = satisfies(&m, &f, &asg).unwrap();
        let desugared = satisfies(&m, &f.desugar(), &asg).unwrap();
        prop_assert_eq!(got, desugared);
    }
}
