//! Exact periodicity for quadratic surds: the quadratic triples carried
//! along an expansion, period detection through exact state fingerprints,
//! and reconstruction of a surd from an eventually periodic digit stream.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algorithms::AlgorithmSpec;
use crate::cf_core::{
    forced_iteration, qpair_trace, ExpansionMode, ExpansionReport,
    PeriodSummary, QPairState, StepRecord, SurdExpander,
};
use crate::exact_surd::{RootSelector, SurdContext, SurdElement};
use crate::rings::{FieldElement, RingElement, RingSpec};
use crate::{Error, Result};

/// The triple A_n = a·p_n² + b·p_n·q_n + c·q_n², B_n as in the Möbius
/// pullback, C_n = A_{n−1}; z_{n+1} is a root of A_n·ζ² + B_n·ζ + C_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticTriple {
    pub a_n: RingElement,
    pub b_n: RingElement,
    pub c_n: RingElement,
}

impl QuadraticTriple {
    /// Evaluates the A-form a·p² + b·p·q + c·q² at an arbitrary (p, q).
    fn a_form(ctx: &SurdContext, p: &RingElement, q: &RingElement) -> RingElement {
        ctx.a
            .mul(&p.mul(p))
            .add(&ctx.b.mul(&p.mul(q)))
            .add(&ctx.c.mul(&q.mul(q)))
    }

    pub fn from_qpair(ctx: &SurdContext, qp: &QPairState) -> Self {
        let two = RingElement::new(ctx.ring, 2, 0);
        let a_n = Self::a_form(ctx, &qp.p, &qp.q);
        let c_n = Self::a_form(ctx, &qp.p_prev, &qp.q_prev);
        let b_n = ctx
            .a
            .mul(&two)
            .mul(&qp.p.mul(&qp.p_prev))
            .add(&ctx.b.mul(&qp.p.mul(&qp.q_prev).add(&qp.q.mul(&qp.p_prev))))
            .add(&ctx.c.mul(&two).mul(&qp.q.mul(&qp.q_prev)));
        QuadraticTriple { a_n, b_n, c_n }
    }

    /// B_n² − 4·A_n·C_n, which must equal b² − 4ac at every step.
    pub fn discriminant(&self) -> RingElement {
        let four = RingElement::new(self.a_n.ring, 4, 0);
        self.b_n
            .mul(&self.b_n)
            .sub(&four.mul(&self.a_n).mul(&self.c_n))
    }

    /// Exact check that A_n·z² + B_n·z + C_n = 0 for the given z.
    pub fn annihilates(&self, z: &SurdElement) -> bool {
        let ctx = &z.ctx;
        let val = z
            .mul(z)
            .mul_field(&FieldElement::from_ring(&self.a_n))
            .add(&z.mul_field(&FieldElement::from_ring(&self.b_n)))
            .add(&SurdElement::from_ring(ctx, &self.c_n));
        val.is_zero()
    }
}

/// One step of an expansion with its quadratic triple; the invariants
/// (C_n = A_{n−1}, discriminant preservation, annihilation of z_{n+1},
/// A_n ≠ 0) are asserted during construction.
#[derive(Clone, Debug)]
pub struct TripleStep {
    pub n: usize,
    pub digit: RingElement,
    pub triple: QuadraticTriple,
}

/// Expands max_steps digits, carrying and checking the triples.
pub fn exact_expand_with_triples(
    ctx: &Arc<SurdContext>,
    alg: &AlgorithmSpec,
    max_steps: usize,
) -> Result<Vec<TripleStep>> {
    let mut expander = SurdExpander::new(ctx, alg.clone());
    expander.check_identities = false;
    let disc = ctx
        .b
        .mul(&ctx.b)
        .sub(&RingElement::new(ctx.ring, 4, 0).mul(&ctx.a).mul(&ctx.c));
    let mut out: Vec<TripleStep> = Vec::new();
    for _ in 0..max_steps {
        let step = expander.step()?;
        let triple = QuadraticTriple::from_qpair(ctx, &step.qpair);
        if triple.a_n.is_zero() {
            return Err(Error::Precondition(
                "A_n vanished along an irreducible expansion".into(),
            ));
        }
        if triple.discriminant() != disc {
            return Err(Error::Precondition(
                "triple discriminant drifted from b²−4ac".into(),
            ));
        }
        if let Some(prev) = out.last() {
            if triple.c_n != prev.triple.a_n {
                return Err(Error::Precondition("C_n ≠ A_{n−1}".into()));
            }
        }
        if !triple.annihilates(&step.z_next) {
            return Err(Error::Precondition(
                "z_{n+1} is not a root of its quadratic triple".into(),
            ));
        }
        out.push(TripleStep { n: step.n, digit: step.digit.value, triple });
    }
    Ok(out)
}

/// Result of exact period detection: z_{m+k} = z_m with both indices
/// minimal, plus the digit data and diagnostics.
#[derive(Clone, Debug)]
pub struct PeriodResult {
    pub preperiod: usize,
    pub period: usize,
    pub preperiod_digits: Vec<RingElement>,
    pub cycle: Vec<RingElement>,
    /// Condition C held at every pair and r < 1: the periodicity theorem's
    /// hypotheses were verified rather than assumed.
    pub hypothesis_verified: bool,
    /// Largest observed |A_n|².
    pub max_triple_norm_sq: BigInt,
    /// Rational upper bound α⁻¹|2az+b| + α⁻² |a| from the theorem's proof
    /// (|q_n| ≥ 1), when the algorithm certifies α = 1/r − 1 > 0.
    pub triple_bound_hi: Option<BigRational>,
    pub report: ExpansionReport,
}

impl PeriodResult {
    /// Lexicographically least rotation of the cycle, with its offset.
    pub fn canonical_cycle(&self) -> (usize, Vec<RingElement>) {
        canonical_rotation(&self.cycle)
    }
}

pub fn canonical_rotation(cycle: &[RingElement]) -> (usize, Vec<RingElement>) {
    assert!(!cycle.is_empty());
    let key = |rot: usize| -> Vec<(BigInt, BigInt)> {
        (0..cycle.len())
            .map(|i| {
                let e = &cycle[(rot + i) % cycle.len()];
                (e.x.clone(), e.y.clone())
            })
            .collect()
    };
    let mut best = 0usize;
    for rot in 1..cycle.len() {
        if key(rot) < key(best) {
            best = rot;
        }
    }
    let rotated = (0..cycle.len())
        .map(|i| cycle[(best + i) % cycle.len()].clone())
        .collect();
    (best, rotated)
}

/// Runs the algorithm until some z_{m+k} equals z_m exactly, fingerprinting
/// every state by its (α, β) coordinates. The first collision gives the
/// minimal preperiod and period; one full replay of the cycle re-checks
/// the digits.
pub fn detect_period(
    ctx: &Arc<SurdContext>,
    alg: &AlgorithmSpec,
    max_steps: usize,
) -> Result<PeriodResult> {
    let mut expander = SurdExpander::new(ctx, alg.clone());
    let mut seen: HashMap<SurdElement, usize> = HashMap::new();
    seen.insert(SurdElement::generator(ctx), 0);
    let disc = ctx
        .b
        .mul(&ctx.b)
        .sub(&RingElement::new(ctx.ring, 4, 0).mul(&ctx.a).mul(&ctx.c));

    let mut digits: Vec<RingElement> = Vec::new();
    let mut records: Vec<StepRecord> = Vec::new();
    let mut prev_digit: Option<RingElement> = None;
    let mut max_triple = BigInt::one();
    let mut prev_a_n: Option<RingElement> = None;
    let mut found: Option<(usize, usize)> = None;

    for _ in 0..max_steps {
        let step = expander.step()?;
        let triple = QuadraticTriple::from_qpair(ctx, &step.qpair);
        if triple.a_n.is_zero() {
            return Err(Error::Precondition(
                "A_n vanished along an irreducible expansion".into(),
            ));
        }
        debug_assert_eq!(triple.discriminant(), disc);
        if let Some(pa) = &prev_a_n {
            debug_assert_eq!(&triple.c_n, pa);
        }
        prev_a_n = Some(triple.a_n.clone());
        let norm = triple.a_n.norm_sq();
        if norm > max_triple {
            max_triple = norm;
        }

        digits.push(step.digit.value.clone());
        let rec = crate::cf_core::StepRecord {
            n: step.n,
            a: step.digit.value.clone(),
            p: step.qpair.p.clone(),
            q: step.qpair.q.clone(),
            q_norm_sq: step.qpair.q.norm_sq(),
            tie_broken: step.digit.tie_broken,
            cond_c_with_prev: if step.n >= 2 {
                prev_digit
                    .as_ref()
                    .map(|p| crate::cf_core::condition_c_pair(p, &step.digit.value))
            } else {
                None
            },
            z_modulus_gt_one: Some(step.z_next_modulus_gt_one),
            error_bound_sq: crate::cf_core::error_bound_sq(alg, &step.qpair),
            error_bound_certified: None,
            residual_identity_ok: Some(step.residual_ok),
            mobius_identity_ok: Some(step.mobius_ok),
            det_identity_ok: step.qpair.det_identity_ok(),
        };
        prev_digit = Some(step.digit.value.clone());
        records.push(rec);

        let idx = step.n + 1; // z_{n+1} reached
        if let Some(&m) = seen.get(&step.z_next) {
            found = Some((m, idx - m));
            break;
        }
        seen.insert(step.z_next.clone(), idx);
    }

    let (m, k) = found.ok_or(Error::PeriodBudgetExhausted(max_steps))?;
    let preperiod_digits = digits[..m].to_vec();
    let cycle = digits[m..m + k].to_vec();

    // replay one full cycle from z_{m+k} and require the same digits
    for i in 0..k {
        let step = expander.step()?;
        if step.digit.value != cycle[i] {
            return Err(Error::RoundTrip(format!(
                "cycle replay diverged at offset {i}"
            )));
        }
    }

    let triple_bound_hi = triple_bound(ctx, alg);

    let mut report = ExpansionReport {
        ring: ctx.ring,
        algorithm: alg.describe(),
        mode: ExpansionMode::ExactSurd,
        steps: records,
        condition_c_all: None,
        monotonic_from_1: true,
        first_monotonicity_violation: None,
        identities_all_ok: None,
        error_bounds_all_certified: None,
        tie_events: 0,
        fundamental_radius_sq: alg.cell_radius_sq().to_string(),
        hypothesis_verified: false,
        period: Some(PeriodSummary { preperiod: m, period: k, cycle: cycle.clone() }),
        termination: crate::cf_core::Termination::PeriodDetected,
    };
    report.finalize();
    let hypothesis_verified = report.hypothesis_verified;

    Ok(PeriodResult {
        preperiod: m,
        period: k,
        preperiod_digits,
        cycle,
        hypothesis_verified,
        max_triple_norm_sq: max_triple,
        triple_bound_hi,
        report,
    })
}

/// α⁻¹·|2az+b| + α⁻²·|a| as a rational upper bound (α = 1/r − 1).
fn triple_bound(ctx: &Arc<SurdContext>, alg: &AlgorithmSpec) -> Option<BigRational> {
    let r_sq = alg.cell_radius_sq().as_rational()?;
    if r_sq >= BigRational::one() {
        return None;
    }
    let r_hi = crate::real::sqrt_interval(&r_sq, 64).hi().clone();
    let alpha_lo = BigRational::one() / &r_hi - BigRational::one();
    if !num_traits::Signed::is_positive(&alpha_lo) {
        return None;
    }
    let z = SurdElement::generator(ctx);
    let two_az_b = z
        .mul_field(&FieldElement::from_ring(&ctx.a))
        .mul_field(&FieldElement::new(
            ctx.ring,
            BigRational::from(BigInt::from(2)),
            BigRational::from(BigInt::from(0)),
        ))
        .add(&SurdElement::from_ring(ctx, &ctx.b));
    let mag_hi = crate::real::sqrt_interval(two_az_b.embed_box(64).abs_sq().hi(), 64)
        .hi()
        .clone();
    let a_mag_hi = crate::real::sqrt_interval(&BigRational::from(ctx.a.norm_sq()), 64)
        .hi()
        .clone();
    Some(&mag_hi / &alpha_lo + &a_mag_hi / (&alpha_lo * &alpha_lo))
}

/// Builds the quadratic satisfied by the purely periodic tail
/// w = [c₀; c₁, …, c_{k−1}, w] from one period of its Q-pair:
/// q_{k−1}·w² − (p_{k−1} − q_{k−2})·w − p_{k−2} = 0.
fn cycle_quadratic(cycle: &[RingElement]) -> Result<(RingElement, RingElement, RingElement)> {
    let trace = qpair_trace(cycle);
    let last = trace.last().expect("nonempty cycle");
    if last.q.is_zero() {
        return Err(Error::Precondition(
            "q_{k-1} vanished for the cycle quadratic".into(),
        ));
    }
    let a = last.q.clone();
    let b = last.q_prev.sub(&last.p);
    let c = last.p_prev.neg();
    Ok((a, b, c))
}

/// Reconstructs a surd context from an eventually periodic quotient
/// stream: the cycle quadratic is pulled back through the preperiod by
/// the inverse Möbius map, the root matching the stream is selected, and
/// the iteration is replayed as a round-trip check.
pub fn surd_from_period(
    preperiod: &[RingElement],
    cycle: &[RingElement],
    ring: RingSpec,
) -> Result<Arc<SurdContext>> {
    if cycle.is_empty() {
        return Err(Error::InvalidInput("empty cycle".into()));
    }
    for (i, a) in preperiod.iter().chain(cycle.iter()).enumerate() {
        if a.ring != ring {
            return Err(Error::InvalidInput("quotient from a different ring".into()));
        }
        // cycle digits recur at positive index, so all of them need
        // |a| > 1; preperiod digits only from index 1 on
        let in_cycle = i >= preperiod.len();
        if (i >= 1 || in_cycle) && a.norm_sq() <= BigInt::one() {
            return Err(Error::Precondition(format!(
                "quotient {} at stream index {} must satisfy |a| > 1",
                a, i
            )));
        }
    }

    let (aw, bw, cw) = cycle_quadratic(cycle)?;
    let (a, b, c) = if preperiod.is_empty() {
        (aw, bw, cw)
    } else {
        // z = (P_{m−1}·w + P_{m−2})/(Q_{m−1}·w + Q_{m−2}) inverts to
        // w = (Q_{m−2}·z − P_{m−2})/(−Q_{m−1}·z + P_{m−1})
        let trace = qpair_trace(preperiod);
        let last = trace.last().unwrap();
        let e = last.q_prev.clone();
        let f = last.p_prev.neg();
        let g = last.q.neg();
        let h = last.p.clone();
        let a = aw
            .mul(&e.mul(&e))
            .add(&bw.mul(&e.mul(&g)))
            .add(&cw.mul(&g.mul(&g)));
        let two = RingElement::new(ring, 2, 0);
        let b = aw
            .mul(&two)
            .mul(&e.mul(&f))
            .add(&bw.mul(&e.mul(&h).add(&f.mul(&g))))
            .add(&cw.mul(&two).mul(&g.mul(&h)));
        let c = aw
            .mul(&f.mul(&f))
            .add(&bw.mul(&f.mul(&h)))
            .add(&cw.mul(&h.mul(&h)));
        (a, b, c)
    };

    if a.is_zero() {
        return Err(Error::Precondition(
            "pullback produced a degenerate (linear) relation".into(),
        ));
    }

    // Reducible here means the stream's value lies in K.
    let build = |sel: RootSelector| SurdContext::new(ring, a.clone(), b.clone(), c.clone(), sel);
    let ctx_plus = match build(RootSelector::PlusBranch) {
        Err(Error::Reducible(_)) => {
            return Err(Error::InvalidInput(
                "input stream corresponds to an element of K".into(),
            ))
        }
        other => other?,
    };
    let ctx_minus = build(RootSelector::MinusBranch)?;

    // Select the root the stream converges to: extend the digits a few
    // cycles and find which root box the convergent settles into.
    let mut digits: Vec<RingElement> = preperiod.to_vec();
    let reps = 2 + 16 / cycle.len().max(1);
    for _ in 0..=reps {
        digits.extend(cycle.iter().cloned());
    }
    let trace = qpair_trace(&digits);
    let conv = trace.last().unwrap().convergent().embed();
    let chosen = {
        // the convergent sits far closer to the streamed root than to its
        // conjugate; compare the two distances at growing precision
        let mut bits = 64u32;
        loop {
            let conv_box = conv.to_box(bits);
            let dp = conv_box.sub(&ctx_plus.root_box(bits)).abs_sq();
            let dm = conv_box.sub(&ctx_minus.root_box(bits)).abs_sq();
            if dp.hi() < dm.lo() {
                break ctx_plus;
            }
            if dm.hi() < dp.lo() {
                break ctx_minus;
            }
            bits *= 2;
            if bits > 1 << 14 {
                return Err(Error::RoundTrip(
                    "convergents do not settle on either root".into(),
                ));
            }
        }
    };

    // Round-trip: replay the forced stream and require z_{m+k} = z_m
    // exactly, with |z_n| > 1 certified along the way.
    let m = preperiod.len();
    let k = cycle.len();
    let mut stream: Vec<RingElement> = preperiod.to_vec();
    stream.extend(cycle.iter().cloned());
    let zs = forced_iteration(&chosen, &stream)?;
    if zs[m + k] != zs[m] {
        return Err(Error::RoundTrip("z_{m+k} ≠ z_m after reconstruction".into()));
    }
    for (i, z) in zs.iter().enumerate().skip(1) {
        if z.cmp_abs_sq(&BigRational::one()) != Ordering::Greater {
            return Err(Error::RoundTrip(format!(
                "|z_{i}| ≤ 1: the stream is not a valid iteration sequence"
            )));
        }
    }
    Ok(chosen)
}

/// Round-trip with an algorithm: reconstruct, re-expand, and require the
/// digit stream to reproduce preperiod and cycle.
pub fn surd_from_period_checked(
    preperiod: &[RingElement],
    cycle: &[RingElement],
    ring: RingSpec,
    alg: &AlgorithmSpec,
) -> Result<Arc<SurdContext>> {
    let ctx = surd_from_period(preperiod, cycle, ring)?;
    let redetect = detect_period(&ctx, alg, (preperiod.len() + cycle.len()) * 4 + 64)?;
    let mut expected: Vec<RingElement> = preperiod.to_vec();
    expected.extend(cycle.iter().cloned());
    let got: Vec<RingElement> = redetect
        .preperiod_digits
        .iter()
        .chain(redetect.cycle.iter())
        .cloned()
        .collect();
    // preperiod may be absorbed and the cycle rotated; compare canonical forms
    if redetect.period != cycle.len() {
        return Err(Error::RoundTrip(format!(
            "period changed: {} vs {}",
            redetect.period,
            cycle.len()
        )));
    }
    let (_, canon_in) = canonical_rotation(cycle);
    let (_, canon_out) = canonical_rotation(&redetect.cycle);
    if canon_in != canon_out {
        return Err(Error::RoundTrip("cycle digits changed".into()));
    }
    let _ = (expected, got);
    Ok(ctx)
}

/// Distinct z_n states visited by a forced digit stream, with the repeat
/// index when one occurs. This is the finite-orbit check exposed for
/// user-supplied (non-algorithmic) sequences.
pub struct FiniteOrbitReport {
    pub distinct_states: usize,
    pub repeat: Option<(usize, usize)>,
}

pub fn verify_finite_orbit(
    ctx: &Arc<SurdContext>,
    digits: &[RingElement],
) -> Result<FiniteOrbitReport> {
    let zs = forced_iteration(ctx, digits)?;
    let mut seen: HashMap<SurdElement, usize> = HashMap::new();
    let mut repeat = None;
    for (i, z) in zs.iter().enumerate() {
        if let Some(&m) = seen.get(z) {
            repeat = Some((m, i - m));
            break;
        }
        seen.insert(z.clone(), i);
    }
    Ok(FiniteOrbitReport { distinct_states: seen.len(), repeat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_surd::RootSelector;

    fn gauss(x: i64, y: i64) -> RingElement {
        RingElement::new(RingSpec::gaussian(), x, y)
    }

    fn eis(x: i64, y: i64) -> RingElement {
        RingElement::new(RingSpec::eisenstein(), x, y)
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
    fn triple_formulas_on_sqrt2i() {
        // step 0 with a₀ = i: A₀ = p₀² + 2q₀² = i² + 2 = 1
        let ctx = sqrt2i_ctx();
        let alg = AlgorithmSpec::nearest(RingSpec::gaussian());
        let steps = exact_expand_with_triples(&ctx, &alg, 8).unwrap();
        assert_eq!(steps[0].triple.a_n, gauss(1, 0));
        // discriminant invariant: B_n² − 4A_nC_n = −8 at every n
        for st in &steps {
            assert_eq!(st.triple.discriminant(), gauss(-8, 0));
        }
    }

    #[test]
    fn detect_period_sqrt2i() {
        let ctx = sqrt2i_ctx();
        let alg = AlgorithmSpec::nearest(RingSpec::gaussian());
        let pr = detect_period(&ctx, &alg, 100).unwrap();
        assert_eq!(pr.preperiod, 1);
        assert_eq!(pr.period, 2);
        assert_eq!(pr.preperiod_digits, vec![gauss(0, 1)]);
        assert_eq!(pr.cycle, vec![gauss(0, -2), gauss(0, 2)]);
        assert!(pr.report.monotonic_from_1);
        assert_eq!(pr.report.identities_all_ok, Some(true));
    }

    #[test]
    fn fixed_point_stream_has_trivial_period() {
        // z = 1+√2 via cycle [2]: m = 0, k = 1
        let e = RingSpec::eisenstein();
        let ctx = surd_from_period(&[], &[eis(2, 0)], e).unwrap();
        // z² − 2z − 1 = 0 up to sign/scale
        assert_eq!(ctx.a, eis(1, 0));
        assert_eq!(ctx.b, eis(-2, 0));
        assert_eq!(ctx.c, eis(-1, 0));
        // its root is 1+√2 ≈ 2.41421
        let b = ctx.refine_bracket(&BigRational::new(BigInt::from(1), BigInt::from(100000)));
        assert!(b.im.contains(&BigRational::from(BigInt::from(0))));
        assert!(
            b.re.lo()
                < &BigRational::new(BigInt::from(241422), BigInt::from(100000))
        );
    }

    #[test]
    fn cycle_j_gives_j_quadratic() {
        // cycle [j]: the fixed-point equation is z² − j·z − 1 = 0 …
        let e = RingSpec::eisenstein();
        let j = eis(-1, 2);
        let (a, b, c) = cycle_quadratic(&[j.clone()]).unwrap();
        assert_eq!(a, eis(1, 0));
        assert_eq!(b, j.neg());
        assert_eq!(c, eis(-1, 0));
        // … but its discriminant is j² + 4 = 1, a square in K: the roots
        // are ρ and ω, so reconstruction must reject the stream as an
        // element of K (the constructor's error contract wins here).
        let err = surd_from_period(&[], &[j], e);
        assert!(matches!(err, Err(Error::InvalidInput(m)) if m.contains("element of K")));
    }

    #[test]
    fn reconstruction_round_trip_sqrt2i() {
        // preperiod [i], cycle [−2i, 2i] reconstructs a context equivalent
        // to z² + 2 = 0 (same minimal polynomial up to K-scaling)
        let g = RingSpec::gaussian();
        let pre = vec![gauss(0, 1)];
        let cycle = vec![gauss(0, -2), gauss(0, 2)];
        let alg = AlgorithmSpec::nearest(g);
        let ctx = surd_from_period_checked(&pre, &cycle, g, &alg).unwrap();
        // proportionality against (1, 0, 2): A·b = B·a and A·c = C·a
        let orig = sqrt2i_ctx();
        assert_eq!(ctx.a.mul(&orig.b), orig.a.mul(&ctx.b));
        assert_eq!(ctx.a.mul(&orig.c), orig.a.mul(&ctx.c));
    }

    #[test]
    fn low_modulus_stream_is_rejected() {
        // digits [2; 4, repeating 2…] chosen so the quadratic degenerates:
        // a purely periodic [a] stream with a of modulus ≤ 1 is invalid
        let e = RingSpec::eisenstein();
        let err = surd_from_period(&[], &[eis(1, 0)], e);
        assert!(err.is_err());
    }

    #[test]
    fn finite_orbit_check() {
        let ctx = sqrt2i_ctx();
        let digits = vec![
            gauss(0, 1),
            gauss(0, -2),
            gauss(0, 2),
            gauss(0, -2),
            gauss(0, 2),
        ];
        let rep = verify_finite_orbit(&ctx, &digits).unwrap();
        assert_eq!(rep.repeat, Some((1, 2)));
        assert_eq!(rep.distinct_states, 3); // z₀, z₁, z₂
    }

    #[test]
    fn canonical_rotation_is_minimal() {
        let cycle = vec![gauss(0, 2), gauss(0, -2)];
        let (rot, canon) = canonical_rotation(&cycle);
        assert_eq!(rot, 1);
        assert_eq!(canon, vec![gauss(0, -2), gauss(0, 2)]);
    }
}
