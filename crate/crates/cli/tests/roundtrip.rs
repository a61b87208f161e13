use proptest::prelude::*;
use zetaform_cli::parse::parse_form;
use zetaform_core::exactalg::{rat, MultiLaurent};
use zetaform_core::forms::ZetaIntegrand;
use zetaform_core::golden::suite;

const CORPUS: &str = include_str!("corpus.txt");

fn round_trip(w: &ZetaIntegrand) -> Result<(), String> {
    let printed = w.to_string();
    let back = parse_form(&printed, None).map_err(|e| format!("{printed}: {e}"))?;
    if &back != w {
        return Err(format!("{printed} reparsed as {back}"));
    }
    if back.to_string() != printed {
        return Err(format!("{printed} reprinted as {back}"));
    }
    Ok(())
}

#[test]
fn corpus_round_trips() {
    let exprs: Vec<&str> = CORPUS.lines().filter(|l| !l.trim().is_empty()).collect();
    assert!(exprs.len() >= 50);
    for e in exprs {
        let w = parse_form(e, None).unwrap_or_else(|err| panic!("{e:?}: {err}"));
        round_trip(&w).unwrap();
    }
}

#[test]
fn golden_forms_round_trip() {
    for g in suite() {
        round_trip(&g.form).unwrap_or_else(|e| panic!("{}: {e}", g.name));
    }
}

#[test]
fn corpus_values() {
    let w = parse_form("x1\t*x2/(1 - x1*x2)", None).unwrap();
    assert_eq!(w.numerator(), &MultiLaurent::monomial(2, vec![1, 1], rat(1, 1)));
    let w = parse_form("-1/2/(1-x1*x2)^2", None).unwrap();
    assert_eq!(w.numerator(), &MultiLaurent::constant(2, rat(-1, 2)));
    assert_eq!(w.pole_order(), 2);
    let w = parse_form("x1^2^3", None).unwrap();
    assert_eq!(w.numerator(), &MultiLaurent::monomial(1, vec![6], rat(1, 1)));
}

fn laurent(n: usize) -> impl Strategy<Value = MultiLaurent> {
    let term = (proptest::collection::vec(-3i32..=4, n), -20i64..=20, 1i64..=7);
    proptest::collection::vec(term, 0..=6)
        .prop_map(move |ts| MultiLaurent::from_terms(n, ts.into_iter().map(|(e, a, b)| (e, rat(a, b)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn random_forms_round_trip(
        w in (1usize..=6, 0u32..=6).prop_flat_map(|(n, big_n)| laurent(n).prop_map(move |p| ZetaIntegrand::new(p, big_n)))
    ) {
        prop_assert_eq!(round_trip(&w), Ok(()));
    }
}
