//! Q-pair recurrences, iteration sequences, identity checks, Condition C,
//! monotonicity verdicts, and the expansion drivers.
//!
//! Three evaluation modes share the bookkeeping:
//! * exact surd iteration in a quadratic quotient algebra,
//! * exact point iteration for inputs with rational coordinates
//!   (the value then lives in ℚ(√d)² and every digit decision is exact),
//! * rational box iteration, which aborts with `DigitUnresolved` when the
//!   input box cannot commit to a digit.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algorithms::{AlgorithmSpec, Digit};
use crate::exact_surd::{SurdContext, SurdElement};
use crate::interval::ComplexBox;
use crate::real::{ExactComplex, ExactReal};
use crate::rings::{FieldElement, RingElement, RingSpec};
use crate::{Error, Result};

/// Rolling window of the recurrences p_{n+1} = a_{n+1}p_n + p_{n-1},
/// q_{n+1} = a_{n+1}q_n + q_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPairState {
    pub p_prev: RingElement,
    pub p: RingElement,
    pub q_prev: RingElement,
    pub q: RingElement,
    pub n: usize,
}

impl QPairState {
    /// p₋₁ = 1, p₀ = a₀, q₋₁ = 0, q₀ = 1.
    pub fn init(a0: &RingElement) -> Self {
        let ring = a0.ring;
        QPairState {
            p_prev: RingElement::one(ring),
            p: a0.clone(),
            q_prev: RingElement::zero(ring),
            q: RingElement::one(ring),
            n: 0,
        }
    }

    pub fn step(&self, a: &RingElement) -> Self {
        QPairState {
            p_prev: self.p.clone(),
            p: a.mul(&self.p).add(&self.p_prev),
            q_prev: self.q.clone(),
            q: a.mul(&self.q).add(&self.q_prev),
            n: self.n + 1,
        }
    }

    /// p_n·q_{n-1} − q_n·p_{n-1} = (−1)^{n−1}, exactly.
    pub fn det_identity_ok(&self) -> bool {
        let det = self.p.mul(&self.q_prev).sub(&self.q.mul(&self.p_prev));
        let expect = if self.n % 2 == 0 {
            RingElement::one(self.p.ring).neg()
        } else {
            RingElement::one(self.p.ring)
        };
        det == expect
    }

    /// The convergent p_n/q_n as a field element (requires q_n ≠ 0).
    pub fn convergent(&self) -> FieldElement {
        FieldElement::from_ring(&self.p).div(&FieldElement::from_ring(&self.q))
    }
}

/// Per-pair Condition C classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CondC {
    Holds,
    Fails,
    /// |a_n| ≤ 1 somewhere: the sequence already violates the premise.
    PremiseViolated,
}

/// Condition C for the consecutive pair (a_n, a_{n+1}), n ≥ 1:
/// either |a_{n+1}| ≥ 2 or |(|a_{n+1}|²−1)·a_n + conj(a_{n+1})| ≥ |a_{n+1}|².
/// All comparisons are exact on squared moduli.
pub fn condition_c_pair(a_prev: &RingElement, a_next: &RingElement) -> CondC {
    let one = BigInt::one();
    if a_prev.norm_sq() <= one || a_next.norm_sq() <= one {
        return CondC::PremiseViolated;
    }
    let m = a_next.norm_sq();
    if m >= BigInt::from(4) {
        return CondC::Holds;
    }
    // |(m−1)·a_prev + conj(a_next)|² ≥ m²
    let scaled = a_prev
        .mul(&RingElement::new(a_prev.ring, m.clone() - &one, BigInt::zero()))
        .add(&a_next.conj());
    if scaled.norm_sq() >= &m * &m {
        CondC::Holds
    } else {
        CondC::Fails
    }
}

/// Spec-facing wrapper with the precondition |a_prev| > 1, |a_next| > 1.
pub fn condition_c_check(a_prev: &RingElement, a_next: &RingElement) -> Result<bool> {
    match condition_c_pair(a_prev, a_next) {
        CondC::Holds => Ok(true),
        CondC::Fails => Ok(false),
        CondC::PremiseViolated => Err(Error::Precondition(
            "Condition C requires |a_n| > 1 on both quotients".into(),
        )),
    }
}

/// The constant r/(1−r) squared, inside the multi-radical field, when the
/// certified radius is the square root of a rational.
pub fn error_constant_sq(alg: &AlgorithmSpec) -> Option<ExactReal> {
    let r_sq = alg.cell_radius_sq().as_rational()?;
    if r_sq >= BigRational::one() {
        return None;
    }
    let r = ExactReal::sqrt_rational(&r_sq)?;
    let denom = ExactReal::one().sub(&r);
    Some(r.square().mul(&denom.inv()).mul(&denom.inv()))
}

/// r/(1−r) itself, for display and reports.
pub fn error_constant(alg: &AlgorithmSpec) -> Option<ExactReal> {
    let r_sq = alg.cell_radius_sq().as_rational()?;
    if r_sq >= BigRational::one() {
        return None;
    }
    let r = ExactReal::sqrt_rational(&r_sq)?;
    Some(r.mul(&ExactReal::one().sub(&r).inv()))
}

/// Theorem-style error bound at one step: (r/(1−r))·|q_n|⁻², defined when
/// |q_{n-1}| < |q_n| and r < 1. Returns the squared bound.
pub fn error_bound_sq(alg: &AlgorithmSpec, qpair: &QPairState) -> Option<ExactReal> {
    if qpair.q_prev.norm_sq() >= qpair.q.norm_sq() {
        return None;
    }
    let c_sq = error_constant_sq(alg)?;
    let q4 = BigRational::from(qpair.q.norm_sq());
    Some(c_sq.mul_rational(&(BigRational::one() / (&q4 * &q4))))
}

/// The sharper bound |q_n|⁻²·(|z_{n+1}| − |q_{n-1}/q_n|)⁻¹ as a rational
/// upper bound, from interval data for |z_{n+1}|.
pub fn sharper_bound_hi(
    z_next_abs_sq_lo: &BigRational,
    qpair: &QPairState,
    bits: u32,
) -> Option<BigRational> {
    let qn = BigRational::from(qpair.q.norm_sq());
    let qp = BigRational::from(qpair.q_prev.norm_sq());
    if qp >= qn {
        return None;
    }
    // |z_{n+1}| ≥ √lo and |q_{n-1}/q_n| = √(qp/qn)
    let z_lo = crate::real::sqrt_interval(z_next_abs_sq_lo, bits).lo().clone();
    let ratio_hi = crate::real::sqrt_interval(&(&qp / &qn), bits).hi().clone();
    let gap = &z_lo - &ratio_hi;
    if !gap.is_positive() {
        return None;
    }
    Some(BigRational::one() / (&qn * gap))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    StepLimit,
    ErrorTarget,
    PeriodDetected,
    DigitUnresolved { step: usize, reason: String },
    ValueInField { step: usize },
}

#[derive(Clone, Debug)]
pub struct ExpansionLimits {
    pub max_steps: usize,
    /// Stop once the certified squared error bound drops below this.
    pub error_target_sq: Option<BigRational>,
    pub precision_cap: u32,
}

impl Default for ExpansionLimits {
    fn default() -> Self {
        ExpansionLimits { max_steps: 10_000, error_target_sq: None, precision_cap: 4096 }
    }
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub n: usize,
    pub a: RingElement,
    pub p: RingElement,
    pub q: RingElement,
    pub q_norm_sq: BigInt,
    pub tie_broken: bool,
    /// Condition C verdict for the pair (a_{n-1}, a_n); set for n ≥ 2.
    pub cond_c_with_prev: Option<CondC>,
    /// Certified |z_n| > 1 (n ≥ 1).
    pub z_modulus_gt_one: Option<bool>,
    /// Squared theorem bound (r/(1−r))²·|q_n|⁻⁴ when applicable.
    pub error_bound_sq: Option<ExactReal>,
    /// Whether |z − p_n/q_n| ≤ (r/(1−r))·|q_n|⁻² was certified.
    pub error_bound_certified: Option<bool>,
    /// Exact residual identity q_n·z − p_n = (−1)ⁿ·(z₁⋯z_{n+1})⁻¹.
    pub residual_identity_ok: Option<bool>,
    /// Exact Möbius identity (z_{n+1}q_n + q_{n-1})·z = z_{n+1}p_n + p_{n-1}.
    pub mobius_identity_ok: Option<bool>,
    pub det_identity_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    ExactSurd,
    ExactPoint,
    Box,
}

#[derive(Clone, Debug)]
pub struct PeriodSummary {
    pub preperiod: usize,
    pub period: usize,
    pub cycle: Vec<RingElement>,
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub ring: RingSpec,
    pub algorithm: String,
    pub mode: ExpansionMode,
    pub steps: Vec<StepRecord>,
    /// All Condition C pairs hold (None when fewer than two quotients).
    pub condition_c_all: Option<bool>,
    /// |q_{n+1}| > |q_n| for all n ≥ 1 along the run.
    pub monotonic_from_1: bool,
    pub first_monotonicity_violation: Option<usize>,
    pub identities_all_ok: Option<bool>,
    pub error_bounds_all_certified: Option<bool>,
    pub tie_events: usize,
    pub fundamental_radius_sq: String,
    /// Premises of the periodicity theorem verified on this run:
    /// certified contraction (r < 1) plus Condition C at every pair.
    pub hypothesis_verified: bool,
    pub period: Option<PeriodSummary>,
    pub termination: Termination,
}

impl ExpansionReport {
    pub fn quotients(&self) -> Vec<RingElement> {
        self.steps.iter().map(|s| s.a.clone()).collect()
    }

    pub(crate) fn finalize(&mut self) {
        let verdicts: Vec<CondC> = self
            .steps
            .iter()
            .filter_map(|s| s.cond_c_with_prev)
            .collect();
        self.condition_c_all = if verdicts.is_empty() {
            None
        } else {
            Some(verdicts.iter().all(|v| *v == CondC::Holds))
        };
        self.monotonic_from_1 = true;
        self.first_monotonicity_violation = None;
        for w in self.steps.windows(2) {
            if w[0].n >= 1 && w[1].q_norm_sq <= w[0].q_norm_sq {
                self.monotonic_from_1 = false;
                self.first_monotonicity_violation = Some(w[1].n);
                break;
            }
        }
        let id_checks: Vec<bool> = self
            .steps
            .iter()
            .flat_map(|s| {
                [
                    s.residual_identity_ok,
                    s.mobius_identity_ok,
                    Some(s.det_identity_ok),
                ]
            })
            .flatten()
            .collect();
        self.identities_all_ok = if id_checks.is_empty() { None } else { Some(id_checks.iter().all(|b| *b)) };
        let certs: Vec<bool> = self
            .steps
            .iter()
            .filter_map(|s| s.error_bound_certified)
            .collect();
        self.error_bounds_all_certified =
            if certs.is_empty() { None } else { Some(certs.iter().all(|b| *b)) };
        self.tie_events = self.steps.iter().filter(|s| s.tie_broken).count();
        self.hypothesis_verified = self.condition_c_all == Some(true)
            && self.fundamental_radius_lt_one();
    }

    fn fundamental_radius_lt_one(&self) -> bool {
        self.fundamental_radius_sq
            .parse::<ExactReal>()
            .map(|r| r.cmp_rational(&BigRational::one()) == Ordering::Less)
            .unwrap_or(false)
    }
}

/// One step of an exact surd expansion.
pub struct SurdStep {
    pub n: usize,
    pub digit: Digit,
    pub qpair: QPairState,
    pub z_next: SurdElement,
    pub residual_ok: bool,
    pub mobius_ok: bool,
    pub z_next_modulus_gt_one: bool,
}

/// Exact surd iterator: z₀ = the context root, z_{n+1} = (z_n − a_n)⁻¹.
pub struct SurdExpander {
    pub alg: AlgorithmSpec,
    z: SurdElement,
    qpair: Option<QPairState>,
    /// z₁·z₂⋯z_{n+1} after step n, for the residual identity.
    z_product: Option<SurdElement>,
    n: usize,
    pub check_identities: bool,
}

impl SurdExpander {
    pub fn new(ctx: &Arc<SurdContext>, alg: AlgorithmSpec) -> Self {
        SurdExpander {
            alg,
            z: SurdElement::generator(ctx),
            qpair: None,
            z_product: None,
            n: 0,
            check_identities: true,
        }
    }

    pub fn current_z(&self) -> &SurdElement {
        &self.z
    }

    pub fn index(&self) -> usize {
        self.n
    }

    pub fn step(&mut self) -> Result<SurdStep> {
        let n = self.n;
        let digit = self.alg.apply_surd(&self.z)?;
        let qpair = match &self.qpair {
            None => QPairState::init(&digit.value),
            Some(prev) => prev.step(&digit.value),
        };
        let w = self.z.sub_ring(&digit.value);
        // w ≠ 0: z generates the quotient algebra and β stays nonzero
        let z_next = w.inv()?;
        let ctx = &self.z.ctx;

        let product = match &self.z_product {
            None => z_next.clone(),
            Some(p) => p.mul(&z_next),
        };

        let (residual_ok, mobius_ok) = if self.check_identities {
            let zsym = SurdElement::generator(ctx);
            // (q_n·z − p_n)·(z₁⋯z_{n+1}) = (−1)ⁿ
            let residual = zsym
                .mul_field(&FieldElement::from_ring(&qpair.q))
                .sub(&SurdElement::from_ring(ctx, &qpair.p))
                .mul(&product);
            let expect = if n % 2 == 0 {
                SurdElement::one(ctx)
            } else {
                SurdElement::one(ctx).neg()
            };
            let residual_ok = residual == expect;
            // (z_{n+1}·q_n + q_{n-1})·z = z_{n+1}·p_n + p_{n-1}
            let lhs = z_next
                .mul_field(&FieldElement::from_ring(&qpair.q))
                .add(&SurdElement::from_ring(ctx, &qpair.q_prev))
                .mul(&zsym);
            let rhs = z_next
                .mul_field(&FieldElement::from_ring(&qpair.p))
                .add(&SurdElement::from_ring(ctx, &qpair.p_prev));
            (residual_ok, lhs == rhs)
        } else {
            (true, true)
        };

        let z_next_modulus_gt_one =
            z_next.cmp_abs_sq(&BigRational::one()) == Ordering::Greater;

        self.z = z_next.clone();
        self.qpair = Some(qpair.clone());
        self.z_product = Some(product);
        self.n += 1;

        Ok(SurdStep {
            n,
            digit,
            qpair,
            z_next,
            residual_ok,
            mobius_ok,
            z_next_modulus_gt_one,
        })
    }
}

fn record_from_surd_step(
    alg: &AlgorithmSpec,
    step: &SurdStep,
    prev_digit: Option<&RingElement>,
) -> StepRecord {
    let cond_c = if step.n >= 2 {
        prev_digit.map(|p| condition_c_pair(p, &step.digit.value))
    } else {
        None
    };
    StepRecord {
        n: step.n,
        a: step.digit.value.clone(),
        p: step.qpair.p.clone(),
        q: step.qpair.q.clone(),
        q_norm_sq: step.qpair.q.norm_sq(),
        tie_broken: step.digit.tie_broken,
        cond_c_with_prev: cond_c,
        z_modulus_gt_one: Some(step.z_next_modulus_gt_one),
        error_bound_sq: error_bound_sq(alg, &step.qpair),
        error_bound_certified: None,
        residual_identity_ok: Some(step.residual_ok),
        mobius_identity_ok: Some(step.mobius_ok),
        det_identity_ok: step.qpair.det_identity_ok(),
    }
}

/// Exact surd expansion for `limits.max_steps` steps (period detection is
/// the `lagrange` module's driver; this one records the raw run).
pub fn expand_surd(
    ctx: &Arc<SurdContext>,
    alg: &AlgorithmSpec,
    limits: &ExpansionLimits,
) -> Result<ExpansionReport> {
    let mut expander = SurdExpander::new(ctx, alg.clone());
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut prev_digit: Option<RingElement> = None;
    let mut termination = Termination::StepLimit;
    let zsym = SurdElement::generator(ctx);

    for _ in 0..limits.max_steps {
        let step = expander.step()?;
        let mut rec = record_from_surd_step(alg, &step, prev_digit.as_ref());
        // certify the theorem bound against the exact residual when it applies
        if let Some(bound_sq) = &rec.error_bound_sq {
            rec.error_bound_certified = certify_surd_error_bound(
                &zsym,
                &step.qpair,
                bound_sq,
                limits.precision_cap,
            );
        }
        prev_digit = Some(rec.a.clone());
        let stop_on_target = match (&limits.error_target_sq, &rec.error_bound_sq) {
            (Some(target), Some(b)) => b.cmp_rational(target) != Ordering::Greater,
            _ => false,
        };
        steps.push(rec);
        if stop_on_target {
            termination = Termination::ErrorTarget;
            break;
        }
    }

    let mut report = ExpansionReport {
        ring: ctx.ring,
        algorithm: alg.describe(),
        mode: ExpansionMode::ExactSurd,
        steps,
        condition_c_all: None,
        monotonic_from_1: true,
        first_monotonicity_violation: None,
        identities_all_ok: None,
        error_bounds_all_certified: None,
        tie_events: 0,
        fundamental_radius_sq: alg.cell_radius_sq().to_string(),
        hypothesis_verified: false,
        period: None,
        termination,
    };
    report.finalize();
    Ok(report)
}

/// Interval certification of |z − p_n/q_n|²·|q_n|² ≤ (r/(1−r))² using the
/// exact residual w = q_n·z − p_n; `None` when undecided at the cap.
fn certify_surd_error_bound(
    z: &SurdElement,
    qpair: &QPairState,
    bound_sq: &ExactReal,
    precision_cap: u32,
) -> Option<bool> {
    let ctx = &z.ctx;
    let w = z
        .mul_field(&FieldElement::from_ring(&qpair.q))
        .sub(&SurdElement::from_ring(ctx, &qpair.p));
    let q_sq = BigRational::from(qpair.q.norm_sq());
    let target = bound_sq.mul_rational(&(&q_sq * &q_sq));
    let mut bits = 64u32;
    loop {
        let w_sq = w.embed_box(bits).abs_sq().mul_rational(&q_sq);
        let t_iv = target.to_interval(bits);
        if w_sq.hi() <= t_iv.lo() {
            return Some(true);
        }
        if w_sq.lo() > t_iv.hi() {
            return Some(false);
        }
        if bits >= precision_cap {
            return None;
        }
        bits = (bits * 2).min(precision_cap.max(64));
    }
}

/// Exact-point expansion: the orbit of a point with rational coordinates
/// stays inside ℚ(√d)², so digits, identities, and error bounds are all
/// decided exactly.
pub fn expand_exact_point(
    start: &ExactComplex,
    ring: RingSpec,
    alg: &AlgorithmSpec,
    limits: &ExpansionLimits,
) -> Result<ExpansionReport> {
    let mut z = start.clone();
    let mut qpair: Option<QPairState> = None;
    let mut product: Option<ExactComplex> = None;
    let mut prev_digit: Option<RingElement> = None;
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut termination = Termination::StepLimit;
    let c_sq = error_constant_sq(alg);

    for n in 0..limits.max_steps {
        let digit = alg.apply_exact(&z)?;
        let w = z.sub(&digit.value.embed());
        if w.is_zero() {
            termination = Termination::ValueInField { step: n };
            break;
        }
        let z_next = w.inv();
        let qp = match &qpair {
            None => QPairState::init(&digit.value),
            Some(prev) => prev.step(&digit.value),
        };
        let prod = match &product {
            None => z_next.clone(),
            Some(p) => p.mul(&z_next),
        };

        // identities, exactly in ℚ(√d)
        let qz_minus_p = start
            .mul(&qp.q.embed())
            .sub(&qp.p.embed());
        let residual = qz_minus_p.mul(&prod);
        let expect_re = if n % 2 == 0 { ExactReal::one() } else { ExactReal::one().neg() };
        let residual_ok =
            residual.re == expect_re && residual.im.is_zero();
        let lhs = z_next
            .mul(&qp.q.embed())
            .add(&qp.q_prev.embed())
            .mul(start);
        let rhs = z_next.mul(&qp.p.embed()).add(&qp.p_prev.embed());
        let mobius_ok = lhs == rhs;

        let gt_one = z_next.norm_sq().cmp_rational(&BigRational::one()) == Ordering::Greater;

        let bound_sq = if qp.q_prev.norm_sq() < qp.q.norm_sq() {
            c_sq.as_ref().map(|c| {
                let q4 = BigRational::from(qp.q.norm_sq());
                c.mul_rational(&(BigRational::one() / (&q4 * &q4)))
            })
        } else {
            None
        };
        let certified = bound_sq.as_ref().map(|b| {
            // |z − p_n/q_n|² ≤ bound², exactly
            let conv = qp.convergent().embed();
            let err_sq = start.sub(&conv).norm_sq();
            err_sq.cmp_exact(b) != Ordering::Greater
        });

        let cond_c = if n >= 2 {
            prev_digit.as_ref().map(|p| condition_c_pair(p, &digit.value))
        } else {
            None
        };

        let stop_on_target = match (&limits.error_target_sq, &bound_sq) {
            (Some(target), Some(b)) => b.cmp_rational(target) != Ordering::Greater,
            _ => false,
        };

        steps.push(StepRecord {
            n,
            a: digit.value.clone(),
            p: qp.p.clone(),
            q: qp.q.clone(),
            q_norm_sq: qp.q.norm_sq(),
            tie_broken: digit.tie_broken,
            cond_c_with_prev: cond_c,
            z_modulus_gt_one: Some(gt_one),
            error_bound_sq: bound_sq,
            error_bound_certified: certified,
            residual_identity_ok: Some(residual_ok),
            mobius_identity_ok: Some(mobius_ok),
            det_identity_ok: qp.det_identity_ok(),
        });

        prev_digit = Some(digit.value);
        z = z_next;
        qpair = Some(qp);
        product = Some(prod);
        if stop_on_target {
            termination = Termination::ErrorTarget;
            break;
        }
    }

    let mut report = ExpansionReport {
        ring,
        algorithm: alg.describe(),
        mode: ExpansionMode::ExactPoint,
        steps,
        condition_c_all: None,
        monotonic_from_1: true,
        first_monotonicity_violation: None,
        identities_all_ok: None,
        error_bounds_all_certified: None,
        tie_events: 0,
        fundamental_radius_sq: alg.cell_radius_sq().to_string(),
        hypothesis_verified: false,
        period: None,
        termination,
    };
    report.finalize();
    Ok(report)
}

/// Box-mode expansion: runs while the (rounded) boxes resolve digits and
/// reports `DigitUnresolved` in the termination otherwise.
pub fn expand_box(
    start: &ComplexBox,
    ring: RingSpec,
    alg: &AlgorithmSpec,
    limits: &ExpansionLimits,
) -> Result<ExpansionReport> {
    if start.is_point() {
        let z = ExactComplex::from_rationals(start.re.lo().clone(), start.im.lo().clone());
        return expand_exact_point(&z, ring, alg, limits);
    }
    let mut z = start.clone();
    let mut qpair: Option<QPairState> = None;
    let mut prev_digit: Option<RingElement> = None;
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut termination = Termination::StepLimit;

    for n in 0..limits.max_steps {
        let digit = match alg.apply_box(&z, n) {
            Ok(d) => d,
            Err(Error::DigitUnresolved { step, reason }) => {
                termination = Termination::DigitUnresolved { step, reason };
                break;
            }
            Err(e) => return Err(e),
        };
        let w = z.sub(&digit.value.embed_box(limits.precision_cap.min(256)));
        if !w.abs_sq().lo().is_positive() {
            termination = Termination::DigitUnresolved {
                step: n,
                reason: "box may contain its own digit (value may lie in K)".into(),
            };
            break;
        }
        let z_next = w.recip().round_out(limits.precision_cap.min(4096));
        let qp = match &qpair {
            None => QPairState::init(&digit.value),
            Some(prev) => prev.step(&digit.value),
        };
        let gt_one = z_next.abs_sq().lo() > &BigRational::one();
        let cond_c = if n >= 2 {
            prev_digit.as_ref().map(|p| condition_c_pair(p, &digit.value))
        } else {
            None
        };
        steps.push(StepRecord {
            n,
            a: digit.value.clone(),
            p: qp.p.clone(),
            q: qp.q.clone(),
            q_norm_sq: qp.q.norm_sq(),
            tie_broken: digit.tie_broken,
            cond_c_with_prev: cond_c,
            z_modulus_gt_one: Some(gt_one),
            error_bound_sq: error_bound_sq(alg, &qp),
            error_bound_certified: None,
            residual_identity_ok: None,
            mobius_identity_ok: None,
            det_identity_ok: qp.det_identity_ok(),
        });
        prev_digit = Some(digit.value);
        z = z_next;
        qpair = Some(qp);
    }

    let mut report = ExpansionReport {
        ring,
        algorithm: alg.describe(),
        mode: ExpansionMode::Box,
        steps,
        condition_c_all: None,
        monotonic_from_1: true,
        first_monotonicity_violation: None,
        identities_all_ok: None,
        error_bounds_all_certified: None,
        tie_events: 0,
        fundamental_radius_sq: alg.cell_radius_sq().to_string(),
        hypothesis_verified: false,
        period: None,
        termination,
    };
    report.finalize();
    Ok(report)
}

/// Iterates z with a forced digit stream: z_{n+1} = (z_n − a_n)⁻¹ with the
/// given quotients, returning every z_n (z₀ first). Fails if some z_n
/// equals its digit (the stream ends in K).
pub fn forced_iteration(
    ctx: &Arc<SurdContext>,
    digits: &[RingElement],
) -> Result<Vec<SurdElement>> {
    let mut zs = vec![SurdElement::generator(ctx)];
    for (i, a) in digits.iter().enumerate() {
        let w = zs.last().unwrap().sub_ring(a);
        if w.is_zero() {
            return Err(Error::DigitUnresolved {
                step: i,
                reason: "forced stream reached an exact digit (value in K)".into(),
            });
        }
        zs.push(w.inv()?);
    }
    Ok(zs)
}

/// Q-pair trace of a digit stream, one state per digit.
pub fn qpair_trace(digits: &[RingElement]) -> Vec<QPairState> {
    let mut out: Vec<QPairState> = Vec::with_capacity(digits.len());
    for a in digits {
        let next = match out.last() {
            None => QPairState::init(a),
            Some(prev) => prev.step(a),
        };
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_surd::RootSelector;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn gauss(x: i64, y: i64) -> RingElement {
        RingElement::new(RingSpec::gaussian(), x, y)
    }

    #[test]
    fn qpair_recurrence_example() {
        // a₀ = i, a₁ = −2i, a₂ = 2i over the Gaussians
        let s0 = QPairState::init(&gauss(0, 1));
        assert_eq!(s0.p, gauss(0, 1));
        assert_eq!(s0.q, gauss(1, 0));
        assert!(s0.det_identity_ok());

        let s1 = s0.step(&gauss(0, -2));
        // p₁ = −2i·i + 1 = 3, q₁ = −2i
        assert_eq!(s1.p, gauss(3, 0));
        assert_eq!(s1.q, gauss(0, -2));
        assert!(s1.det_identity_ok());

        let s2 = s1.step(&gauss(0, 2));
        // p₂ = 2i·3 + i = 7i, q₂ = 2i·(−2i) + 1 = 5
        assert_eq!(s2.p, gauss(0, 7));
        assert_eq!(s2.q, gauss(5, 0));
        assert_eq!(s2.q.norm_sq(), BigInt::from(25));
        assert!(s2.det_identity_ok());
    }

    #[test]
    fn condition_c_examples() {
        // |a_next| ≥ 2 short-circuits
        assert_eq!(
            condition_c_pair(&gauss(1, 1), &gauss(2, 0)),
            CondC::Holds
        );
        // a_prev = 1+i, a_next = 1−i: |a+conj(a')| = |2+2i| = 2√2 ≥ 2
        assert_eq!(
            condition_c_pair(&gauss(1, 1), &gauss(1, -1)),
            CondC::Holds
        );
        assert!(condition_c_check(&gauss(1, 1), &gauss(1, -1)).unwrap());
        // a_prev = 1+i, a_next = −1−i: |(1+i) + (−1+i)| = |2i| = 2 ≥ 2
        assert_eq!(
            condition_c_pair(&gauss(1, 1), &gauss(-1, -1)),
            CondC::Holds
        );
        // a_prev = 1+i, a_next = −1+i: (1+i)+(−1−i) = 0 < 2 → fails
        assert_eq!(
            condition_c_pair(&gauss(1, 1), &gauss(-1, 1)),
            CondC::Fails
        );
        // premise violations
        assert_eq!(
            condition_c_pair(&gauss(1, 0), &gauss(1, 1)),
            CondC::PremiseViolated
        );
        assert!(condition_c_check(&gauss(1, 0), &gauss(1, 1)).is_err());
    }

    #[test]
    fn eisenstein_error_constant() {
        // r = 1/√3 gives r/(1−r) = (√3+1)/2
        let alg = AlgorithmSpec::nearest(RingSpec::eisenstein());
        let c = error_constant(&alg).unwrap();
        let expected = ExactReal::from_rational(rat(1, 2)).add(
            &ExactReal::sqrt_rational(&rat(3, 1))
                .unwrap()
                .mul_rational(&rat(1, 2)),
        );
        assert_eq!(c, expected);
        let c_sq = error_constant_sq(&alg).unwrap();
        assert_eq!(c_sq, expected.square());
        // Zi3 has r = 1: no constant
        assert!(error_constant(&AlgorithmSpec::nearest(RingSpec::Sqrt(3))).is_none());
    }

    fn sqrt2i_ctx() -> Arc<SurdContext> {
        let g = RingSpec::gaussian();
        SurdContext::new(
            g,
            RingElement::one(g),
            RingElement::zero(g),
            RingElement::new(g, 2, 0),
            RootSelector::PosIm,
        )
        .unwrap()
    }

    #[test]
    fn gaussian_sqrt2_expansion() {
        let ctx = sqrt2i_ctx();
        let alg = AlgorithmSpec::nearest(RingSpec::gaussian());
        let limits = ExpansionLimits { max_steps: 7, ..Default::default() };
        let rep = expand_surd(&ctx, &alg, &limits).unwrap();
        let quotients = rep.quotients();
        let expect: Vec<RingElement> = vec![
            gauss(0, 1),
            gauss(0, -2),
            gauss(0, 2),
            gauss(0, -2),
            gauss(0, 2),
            gauss(0, -2),
            gauss(0, 2),
        ];
        assert_eq!(quotients, expect);
        assert_eq!(rep.identities_all_ok, Some(true));
        assert!(rep.monotonic_from_1);
        assert_eq!(rep.condition_c_all, Some(true));
        assert!(rep.steps.iter().all(|s| s.z_modulus_gt_one == Some(true)));
        // error bound at n = 2: (r/(1−r))²/25² with r = 1/√2
        let s2 = &rep.steps[2];
        assert_eq!(s2.q_norm_sq, BigInt::from(25));
        let b = s2.error_bound_sq.as_ref().unwrap();
        // (r/(1−r))² for r = 1/√2 is ( (√2+… ) )² = (1/(√2−1))² = 3+2√2
        let expected = ExactReal::from_rational(rat(3, 1)).add(
            &ExactReal::sqrt_rational(&rat(2, 1)).unwrap().mul_rational(&rat(2, 1)),
        );
        assert_eq!(b, &expected.mul_rational(&rat(1, 625)));
        assert_eq!(rep.error_bounds_all_certified, Some(true));
    }

    #[test]
    fn forced_silver_stream_over_eisenstein() {
        // z = 1+√2 with forced digits [2,2,2,…]: convergents approach it
        // and |q_n| is strictly increasing
        let e = RingSpec::eisenstein();
        let ctx = SurdContext::new(
            e,
            RingElement::one(e),
            RingElement::new(e, -2, 0),
            RingElement::new(e, -1, 0),
            RootSelector::PosRe,
        )
        .unwrap();
        let digits: Vec<RingElement> =
            (0..12).map(|_| RingElement::new(e, 2, 0)).collect();
        let zs = forced_iteration(&ctx, &digits).unwrap();
        // purely periodic: every z_n equals z₀
        for z in &zs {
            assert_eq!(z, &zs[0]);
        }
        let trace = qpair_trace(&digits);
        let mut prev = BigInt::zero();
        for st in &trace {
            assert!(st.det_identity_ok());
            assert!(st.q.norm_sq() > prev);
            prev = st.q.norm_sq();
        }
        // convergent error shrinks: |z − p/q|² at the last step is tiny
        let last = trace.last().unwrap();
        let conv = last.convergent().embed();
        let z_val = ctx.exact_root().unwrap();
        let err = z_val.sub(&conv).norm_sq();
        assert!(err.cmp_rational(&rat(1, 1_000_000)).is_le());
    }

    #[test]
    fn exact_point_mode_certifies_bounds() {
        // 1.23 + 0.77i over the Eisenstein nearest-integer algorithm
        let e = RingSpec::eisenstein();
        let alg = AlgorithmSpec::nearest(e);
        let z = ExactComplex::from_rationals(rat(123, 100), rat(77, 100));
        let limits = ExpansionLimits { max_steps: 25, ..Default::default() };
        let rep = expand_exact_point(&z, e, &alg, &limits).unwrap();
        assert_eq!(rep.mode, ExpansionMode::ExactPoint);
        assert_eq!(rep.identities_all_ok, Some(true));
        assert_eq!(rep.error_bounds_all_certified, Some(true));
        assert!(rep.steps.len() >= 20);
        assert!(rep.steps.iter().skip(1).all(|s| s.z_modulus_gt_one == Some(true)));
    }

    #[test]
    fn exact_point_detects_field_values() {
        // 1/2 + 1/3·i ∈ ℚ(i): the Gaussian expansion must terminate
        let g = RingSpec::gaussian();
        let alg = AlgorithmSpec::nearest(g);
        let z = ExactComplex::from_rationals(rat(1, 2), rat(1, 3));
        let rep = expand_exact_point(&z, g, &alg, &ExpansionLimits::default()).unwrap();
        assert!(matches!(rep.termination, Termination::ValueInField { .. }));
    }

    #[test]
    fn box_mode_unresolved_on_wide_box() {
        let g = RingSpec::gaussian();
        let alg = AlgorithmSpec::nearest(g);
        let wide = ComplexBox::new(
            crate::interval::RatInterval::new(rat(2, 5), rat(3, 5)),
            crate::interval::RatInterval::new(rat(1, 10), rat(1, 5)),
        );
        let rep = expand_box(&wide, g, &alg, &ExpansionLimits::default()).unwrap();
        assert!(matches!(
            rep.termination,
            Termination::DigitUnresolved { step: 0, .. }
        ));
    }

    #[test]
    fn error_target_stops_expansion() {
        let e = RingSpec::eisenstein();
        let alg = AlgorithmSpec::nearest(e);
        let z = ExactComplex::from_rationals(rat(123, 100), rat(77, 100));
        let limits = ExpansionLimits {
            max_steps: 1000,
            error_target_sq: Some(rat(1, 1_000_000_000_000)),
            precision_cap: 4096,
        };
        let rep = expand_exact_point(&z, e, &alg, &limits).unwrap();
        assert_eq!(rep.termination, Termination::ErrorTarget);
        assert!(rep.steps.len() < 1000);
    }

    #[test]
    fn nonvanishing_lemma_along_runs() {
        // if |p_n| > |z₁|⁻¹ then q_n ≠ 0: with |z₁| > 1 every |p_n| ≥ 1
        // witness forces q_n ≠ 0; checked along the i√2 run
        let ctx = sqrt2i_ctx();
        let alg = AlgorithmSpec::nearest(RingSpec::gaussian());
        let limits = ExpansionLimits { max_steps: 12, ..Default::default() };
        let rep = expand_surd(&ctx, &alg, &limits).unwrap();
        for s in &rep.steps {
            if s.p.norm_sq() >= BigInt::one() {
                assert!(!s.q.is_zero());
            }
        }
    }
}
