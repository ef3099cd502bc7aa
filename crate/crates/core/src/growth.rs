//! Eisenstein nearest-integer growth analysis: the succession rules for
//! digits following j·ρᵏ or 2·ρᵏ, and the exponential growth bound
//! |q_{n+1}/q_{n-1}| > 3/2, audited with exact integer arithmetic
//! (every "> 3/2" comparison is squared into 4|q_{n+1}|² > 9|q_{n-1}|²).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::cf_core::ExpansionReport;
use crate::real::{cmp_sqrt_sum, ExactReal};
use crate::rings::{RingElement, RingSpec};
use crate::{Error, Result};

/// Which succession rule applied to the pair (a_n, a_{n+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuccessionRule {
    /// a_n = j·ρᵏ: writing a_{n+1}·ρᵏ = ½(x + y·j), require |x| ≤ 4 − 3y.
    AfterJ,
    /// a_n = 2·ρᵏ: writing a_{n+1}·ρᵏ = ½(x + y·j), require x ≥ −2.
    AfterTwo,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuccessionVerdict {
    pub rule: SuccessionRule,
    pub pass: bool,
    /// (k, x, y) of the decomposition when a rule applied.
    pub detail: Option<(u8, String, String)>,
}

fn eis(x: i64, y: i64) -> RingElement {
    RingElement::new(RingSpec::eisenstein(), x, y)
}

fn rho_pow(k: u8) -> RingElement {
    let rho = eis(0, 1);
    let mut acc = RingElement::one(RingSpec::eisenstein());
    for _ in 0..k {
        acc = acc.mul(&rho);
    }
    acc
}

/// Half-j coordinates of an Eisenstein integer: w = ½(x + y·j) with
/// x + y even; from w = wx + wy·θ this is x = 2wx + wy, y = wy.
fn half_j_coords(w: &RingElement) -> (BigInt, BigInt) {
    (BigInt::from(2) * &w.x + &w.y, w.y.clone())
}

/// Checks the restriction on a digit following j·ρᵏ or 2·ρᵏ.
pub fn succession_check(a_n: &RingElement, a_next: &RingElement) -> Result<SuccessionVerdict> {
    if a_n.ring != RingSpec::eisenstein() || a_next.ring != RingSpec::eisenstein() {
        return Err(Error::Precondition(
            "succession rules are stated for the Eisenstein ring".into(),
        ));
    }
    let j = eis(-1, 2);
    let two = eis(2, 0);
    for k in 0..6u8 {
        let rk = rho_pow(k);
        if *a_n == j.mul(&rk) {
            // rotate back: w = a_{n+1}·ρᵏ
            let w = a_next.mul(&rk);
            let (x, y) = half_j_coords(&w);
            // |x/2| ≤ 2 − (3/2)y, cleared of halves: |x| ≤ 4 − 3y
            let bound = BigInt::from(4) - BigInt::from(3) * &y;
            let pass = bound >= BigInt::zero() && num_traits::Signed::abs(&x) <= bound;
            return Ok(SuccessionVerdict {
                rule: SuccessionRule::AfterJ,
                pass,
                detail: Some((k, x.to_string(), y.to_string())),
            });
        }
        if *a_n == two.mul(&rk) {
            let w = a_next.mul(&rk);
            let (x, y) = half_j_coords(&w);
            let pass = x >= BigInt::from(-2);
            return Ok(SuccessionVerdict {
                rule: SuccessionRule::AfterTwo,
                pass,
                detail: Some((k, x.to_string(), y.to_string())),
            });
        }
    }
    Ok(SuccessionVerdict { rule: SuccessionRule::NotApplicable, pass: true, detail: None })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    /// |q_{n+1}|²/|q_{n-1}|² as an exact rational string.
    pub ratio_sq: String,
    /// 4|q_{n+1}|² > 9|q_{n-1}|², exactly.
    pub exceeds_nine_fourths: bool,
    /// (|a_n·a_{n+1} + 1| − |a_{n+1}|)², when |q_{n-2}| ≤ |q_{n-1}|.
    pub remark_bound_sq: Option<String>,
    /// ratio ≥ remark bound, decided by nested squaring.
    pub remark_chain_ok: Option<bool>,
    pub succession: SuccessionVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub min_ratio_sq: Option<String>,
    pub all_exceed_nine_fourths: bool,
    pub succession_all_pass: bool,
    /// |q_n|² ≥ (9/4)^⌊n/2⌋ · min(|q₀|², |q₁|²) along the run.
    pub telescoped_ok: bool,
}

impl GrowthReport {
    /// CSV per the report interface: n, ratio², remark bound², rule.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,ratio_sq,remark63_bound_sq,succession_rule_applied\n");
        for r in &self.rows {
            let rule = match r.succession.rule {
                SuccessionRule::AfterJ => "after-j",
                SuccessionRule::AfterTwo => "after-2",
                SuccessionRule::NotApplicable => "none",
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.n,
                r.ratio_sq,
                r.remark_bound_sq.as_deref().unwrap_or(""),
                rule
            ));
        }
        out
    }
}

/// Audits an Eisenstein nearest-integer expansion: exact ratio² sequence,
/// the Remark lower bound |a_n·a_{n+1}+1| − |a_{n+1}| where it applies,
/// and the succession rules.
pub fn growth_check(report: &ExpansionReport) -> Result<GrowthReport> {
    if report.ring != RingSpec::eisenstein() {
        return Err(Error::Precondition(
            "growth audit requires the Eisenstein ring".into(),
        ));
    }
    if !report.algorithm.starts_with("nearest-integer") {
        return Err(Error::Precondition(
            "growth audit requires the nearest-integer algorithm".into(),
        ));
    }
    let steps = &report.steps;
    let mut rows = Vec::new();
    let mut min_ratio: Option<BigRational> = None;
    let mut all_exceed = true;
    let mut succession_all = true;

    for n in 1..steps.len().saturating_sub(1) {
        let q_next_sq = steps[n + 1].q_norm_sq.clone();
        let q_prev_sq = steps[n - 1].q_norm_sq.clone();
        let ratio = BigRational::new(q_next_sq.clone(), q_prev_sq.clone());
        let exceeds = BigInt::from(4) * &q_next_sq > BigInt::from(9) * &q_prev_sq;
        all_exceed &= exceeds;
        min_ratio = Some(match min_ratio {
            None => ratio.clone(),
            Some(m) => m.min(ratio.clone()),
        });

        // Remark bound applies when |q_{n-2}| ≤ |q_{n-1}| (q_{-1} = 0)
        let q_nm2_sq = if n >= 2 { steps[n - 2].q_norm_sq.clone() } else { BigInt::zero() };
        let q_nm1_sq = steps[n - 1].q_norm_sq.clone();
        // careful with offsets: row n compares q_{n+1} to q_{n-1}, and the
        // remark's premise is about the two q's before q_{n+1}'s recurrence,
        // i.e. |q_{n-2}| ≤ |q_{n-1}|… with q indices matching steps[i].q = q_i
        let (bound_sq, chain_ok) = if q_nm2_sq <= q_nm1_sq {
            let a_n = &steps[n].a;
            let a_next = &steps[n + 1].a;
            let m = a_n
                .mul(a_next)
                .add(&RingElement::one(RingSpec::eisenstein()))
                .norm_sq();
            let nn = a_next.norm_sq();
            let m_r = ExactReal::from_rational(BigRational::from(m.clone()));
            let n_r = ExactReal::from_rational(BigRational::from(nn.clone()));
            let sm = ExactReal::sqrt_rational(&BigRational::from(m)).unwrap();
            let sn = ExactReal::sqrt_rational(&BigRational::from(nn)).unwrap();
            let bound = sm.sub(&sn);
            let bound_sq = bound.square();
            // ratio ≥ bound ⟺ √ratio² + √N ≥ √M
            let ratio_er = ExactReal::from_rational(ratio.clone());
            let ok = cmp_sqrt_sum(&ratio_er, &n_r, &m_r) != Ordering::Less;
            let _ = m_r;
            (Some(bound_sq.to_string()), Some(ok))
        } else {
            (None, None)
        };

        let succession = succession_check(&steps[n].a, &steps[n + 1].a)?;
        succession_all &= succession.pass;

        rows.push(GrowthRow {
            n,
            ratio_sq: ratio.to_string(),
            exceeds_nine_fourths: exceeds,
            remark_bound_sq: bound_sq,
            remark_chain_ok: chain_ok,
            succession,
        });
    }

    // telescoped bound: |q_n|² ≥ (9/4)^⌊n/2⌋ · min(|q₀|², |q₁|²)
    let telescoped_ok = if steps.len() >= 2 {
        let base = steps[0].q_norm_sq.clone().min(steps[1].q_norm_sq.clone());
        steps.iter().all(|s| {
            let pow = s.n / 2;
            let lhs = BigRational::from(s.q_norm_sq.clone());
            let rhs = BigRational::new(
                BigInt::from(9).pow(pow as u32) * &base,
                BigInt::from(4).pow(pow as u32),
            );
            lhs >= rhs
        })
    } else {
        true
    };

    Ok(GrowthReport {
        min_ratio_sq: min_ratio.map(|m| m.to_string()),
        all_exceed_nine_fourths: all_exceed,
        succession_all_pass: succession_all,
        telescoped_ok,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmSpec;
    use crate::cf_core::{expand_surd, ExpansionLimits};
    use crate::exact_surd::{RootSelector, SurdContext};

    #[test]
    fn succession_examples() {
        let j = eis(-1, 2);
        // a_n = j, a_{n+1} = −2j: x = 0, y = −4 → |0| ≤ 16, pass
        let v = succession_check(&j, &j.mul(&eis(-2, 0))).unwrap();
        assert_eq!(v.rule, SuccessionRule::AfterJ);
        assert!(v.pass);
        assert_eq!(v.detail, Some((0, "0".into(), "-4".into())));

        // a_n = j, a_{n+1} = j: x = 0, y = 2 → 0 ≤ 4−6 fails, so this
        // succession never occurs in a nearest-integer expansion
        let v = succession_check(&j, &j).unwrap();
        assert_eq!(v.rule, SuccessionRule::AfterJ);
        assert!(!v.pass);
        assert_eq!(v.detail, Some((0, "0".into(), "2".into())));

        // a_n = 2, a_{n+1} = −2: x = −4 → fails
        let v = succession_check(&eis(2, 0), &eis(-2, 0)).unwrap();
        assert_eq!(v.rule, SuccessionRule::AfterTwo);
        assert!(!v.pass);

        // a_n = 3 matches neither form
        let v = succession_check(&eis(3, 0), &eis(2, 0)).unwrap();
        assert_eq!(v.rule, SuccessionRule::NotApplicable);
        assert!(v.pass);
    }

    #[test]
    fn silver_ratio_growth() {
        // stream [2,2,…]: q_{n+1} = 2q_n + q_{n-1} gives ratios ≥ 5 > 3/2
        let e = RingSpec::eisenstein();
        let ctx = SurdContext::new(
            e,
            RingElement::one(e),
            eis(-2, 0),
            eis(-1, 0),
            RootSelector::PosRe,
        )
        .unwrap();
        let alg = AlgorithmSpec::nearest(e);
        let rep = expand_surd(&ctx, &alg, &ExpansionLimits { max_steps: 14, ..Default::default() })
            .unwrap();
        // 1+√2 really expands with all digits 2 under nearest-integer
        assert!(rep.quotients().iter().all(|a| *a == eis(2, 0)));
        let g = growth_check(&rep).unwrap();
        assert!(g.all_exceed_nine_fourths);
        assert!(g.succession_all_pass);
        assert!(g.telescoped_ok);
        for row in &g.rows {
            let r: BigRational = row.ratio_sq.parse::<BigRational>().unwrap();
            assert!(r >= BigRational::from(BigInt::from(25)));
            assert_eq!(row.remark_chain_ok, Some(true));
        }
        let csv = g.to_csv();
        assert!(csv.starts_with("n,ratio_sq,remark63_bound_sq,succession_rule_applied"));
    }

    #[test]
    fn refuses_wrong_ring() {
        let g = RingSpec::gaussian();
        let ctx = SurdContext::new(
            g,
            RingElement::one(g),
            RingElement::zero(g),
            RingElement::new(g, 2, 0),
            RootSelector::PosIm,
        )
        .unwrap();
        let alg = AlgorithmSpec::nearest(g);
        let rep = expand_surd(&ctx, &alg, &ExpansionLimits { max_steps: 6, ..Default::default() })
            .unwrap();
        assert!(growth_check(&rep).is_err());
    }
}
