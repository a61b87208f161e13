//! Serializable records shared by the text and JSON outputs.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use zetaform_core::exactalg::format_rational;
use zetaform_core::forms::{ball_rivoal_form, is_integrable, tau_symmetry, ZetaIntegrand};
use zetaform_core::numeric::VerificationReport;
use zetaform_core::zeta_coeffs::{coefficients, predict_vanishing, ZetaCoefficients};

/// `a_2..a_n` keyed by index, zeros included.
pub fn coeff_map(c: &ZetaCoefficients) -> BTreeMap<String, String> {
    (2..=c.n() as u32).map(|r| (r.to_string(), format_rational(&c.get(r)))).collect()
}

/// One line of scan output.
///
/// `weight_drop` records whether `a_n` vanished; `weight_drop_forced` whether
/// some `u_i + v_i <= N`, which forces it. Both are false for `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n: usize,
    pub integrable: bool,
    pub a0: Option<String>,
    pub coeffs: Option<BTreeMap<String, String>>,
    pub tau: String,
    pub predicted_zeros: Vec<u32>,
    pub weight_drop: bool,
    pub weight_drop_forced: bool,
}

impl ScanRecord {
    pub fn evaluate(u: &[u32], v: &[u32], big_n: u32) -> zetaform_core::Result<Self> {
        let w = ball_rivoal_form(u, v, big_n)?;
        Self::from_form(u, v, &w)
    }

    fn from_form(u: &[u32], v: &[u32], w: &ZetaIntegrand) -> zetaform_core::Result<Self> {
        let n = w.n();
        let big_n = w.pole_order();
        let integrable = is_integrable(w)?;
        let c = if integrable { Some(coefficients(w)?) } else { None };
        let forced = n >= 2 && u.iter().zip(v).any(|(a, b)| a + b <= big_n);
        let dropped = n >= 2 && c.as_ref().is_some_and(|c| c.get(n as u32).is_zero());
        Ok(ScanRecord {
            u: u.to_vec(),
            v: v.to_vec(),
            big_n,
            n,
            integrable,
            a0: c.as_ref().map(|c| format_rational(c.a0())),
            coeffs: c.as_ref().map(coeff_map),
            tau: tau_symmetry(w).as_str().to_string(),
            predicted_zeros: predict_vanishing(w).into_iter().collect(),
            weight_drop: dropped,
            weight_drop_forced: forced,
        })
    }

    /// The parameter tuple, which identifies the record within a scan.
    pub fn key(&self) -> (u32, &[u32], &[u32]) {
        (self.big_n, &self.u, &self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub mid: String,
    pub rad: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub form: String,
    pub pass: bool,
    #[serde(rename = "K")]
    pub k_terms: u64,
    pub digits: u32,
    pub a0: String,
    pub coeffs: BTreeMap<String, String>,
    pub series: IntervalRecord,
    pub zeta: IntervalRecord,
}

impl CheckRecord {
    pub fn from_report(w: &ZetaIntegrand, c: &ZetaCoefficients, r: &VerificationReport) -> Self {
        let iv = |d: &zetaform_core::DecimalInterval| IntervalRecord {
            mid: d.midpoint_string(r.digits),
            rad: d.radius_string(),
        };
        CheckRecord {
            form: w.to_string(),
            pass: r.pass,
            k_terms: r.k_terms,
            digits: r.digits,
            a0: format_rational(c.a0()),
            coeffs: coeff_map(c),
            series: iv(&r.lhs),
            zeta: iv(&r.rhs),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallRivoalRecord {
    pub form: String,
    #[serde(flatten)]
    pub scan: ScanRecord,
    pub well_poised: bool,
    pub check: Option<CheckRecord>,
}

impl BallRivoalRecord {
    pub fn evaluate(u: &[u32], v: &[u32], big_n: u32) -> zetaform_core::Result<Self> {
        let w = ball_rivoal_form(u, v, big_n)?;
        let scan = ScanRecord::from_form(u, v, &w)?;
        Ok(BallRivoalRecord { form: w.to_string(), scan, well_poised: false, check: None })
    }
}
