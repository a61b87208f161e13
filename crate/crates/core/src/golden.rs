//! A fixed suite of integrable forms with `n <= 5` used by tests, the
//! acceptance run and benchmarks.
//!
//! Only values known independently of the pipeline are recorded as expected
//! coefficients (Eulerian forms integrate to a single zeta value, the Beukers
//! integrand, a telescoping series). The remaining entries are checked
//! numerically.

use std::collections::BTreeMap;

use crate::exactalg::{int, parse_rational, MultiLaurent, Rational};
use crate::forms::{ball_rivoal_form, eulerian_form, ZetaIntegrand};
use crate::zeta_coeffs::ZetaCoefficients;

#[derive(Clone, Debug)]
pub struct GoldenForm {
    pub name: String,
    pub form: ZetaIntegrand,
    pub expected: Option<ZetaCoefficients>,
    /// Ball-Rivoal parameters when the form is of that shape.
    pub ball_rivoal: Option<(Vec<u32>, Vec<u32>, u32)>,
}

fn coeffs(n: usize, a0: Rational, a: &[(u32, Rational)]) -> ZetaCoefficients {
    ZetaCoefficients::new(n, a0, a.iter().cloned().collect::<BTreeMap<_, _>>()).expect("valid indices")
}

fn br(name: &str, u: &[u32], v: &[u32], big_n: u32, expected: Option<ZetaCoefficients>) -> GoldenForm {
    GoldenForm {
        name: name.to_string(),
        form: ball_rivoal_form(u, v, big_n).expect("valid parameters"),
        expected,
        ball_rivoal: Some((u.to_vec(), v.to_vec(), big_n)),
    }
}

pub fn suite() -> Vec<GoldenForm> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for k in 2..=n {
            out.push(GoldenForm {
                name: format!("eulerian-{n}-{k}"),
                form: eulerian_form(n, k).expect("valid range"),
                expected: Some(coeffs(n, int(0), &[(k as u32, int(1))])),
                ball_rivoal: None,
            });
        }
    }
    out.push(br("beukers-zeta2", &[2, 2], &[2, 2], 2, Some(coeffs(2, int(5), &[(2, int(-3))]))));
    out.push(GoldenForm {
        name: "telescoping".into(),
        form: ZetaIntegrand::new(MultiLaurent::var(2, 0), 1),
        expected: Some(coeffs(2, int(1), &[])),
        ball_rivoal: None,
    });
    out.push(br("br-222-222-3", &[2, 2, 2], &[2, 2, 2], 3, None));
    out.push(br("br-121-312-4", &[1, 2, 1], &[3, 1, 2], 4, None));
    out.push(br("br-2121-1212-3", &[2, 1, 2, 1], &[1, 2, 1, 2], 3, None));
    out.push(br("wp-111-222-3", &[1, 1, 1], &[2, 2, 2], 3, None));
    out.push(br("wp-2222-2222-5", &[2, 2, 2, 2], &[2, 2, 2, 2], 5, None));
    out.push(br("wp-22222-22222-5", &[2, 2, 2, 2, 2], &[2, 2, 2, 2, 2], 5, None));
    out.push(br("br-11111-22222-3", &[1, 1, 1, 1, 1], &[2, 2, 2, 2, 2], 3, None));
    out.push(br("drop-12-22-3", &[1, 2], &[2, 2], 3, None));

    let x = |n, i| MultiLaurent::var(n, i);
    let one = MultiLaurent::one;
    let sum = &x(2, 0) + &x(2, 1);
    let damp = &(&one(2) - &x(2, 0)) * &(&one(2) - &x(2, 1));
    out.push(GoldenForm {
        name: "mixed-2".into(),
        form: ZetaIntegrand::new(&sum * &damp, 2),
        expected: None,
        ball_rivoal: None,
    });
    let half = parse_rational("1/2").expect("literal");
    let p = &MultiLaurent::constant(3, half) + &MultiLaurent::monomial(3, vec![1, 1, 0], int(3));
    out.push(GoldenForm { name: "rational-3".into(), form: ZetaIntegrand::new(p, 2), expected: None, ball_rivoal: None });
    out
}
