//! Exact arithmetic for quadratic surds over K: the quotient algebra
//! K[z]/(az² + bz + c) with a certified complex root bracket.
//!
//! Elements are pairs (α, β) ∈ K² representing α + β·z. Because the
//! minimal polynomial is irreducible over K, {1, z} is a K-basis, so
//! coordinate equality is value equality and every nonzero element is
//! invertible.
//!
//! Real quantities attached to a surd (Re, Im, |·|²) are compared
//! exactly: first by interval refinement of the bracket, and when the
//! value may actually equal the comparison target, through an
//! annihilating polynomial over ℚ built from resultants of the element's
//! quadratic over K against its complex-conjugate quadratic. A Cauchy
//! root gap around the target then makes equality decidable.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::{BoxRepr, ComplexBox, RatInterval};
use crate::real::{rational_sqrt_exact, sqrt_interval, ExactComplex, ExactReal};
use crate::rings::{FieldElement, RingElement, RingSpec};
use crate::{Error, Result};

/// Which root of aζ² + bζ + c the context tracks: the principal square
/// root branch `(−b + √disc)/(2a)` or its mirror.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootBranch {
    Plus,
    Minus,
}

/// How the caller names the root at construction time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSelector {
    PlusBranch,
    MinusBranch,
    PosIm,
    NegIm,
    PosRe,
    NegRe,
}

impl FromStr for RootSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+br" | "plus" => Ok(RootSelector::PlusBranch),
            "-br" | "minus" => Ok(RootSelector::MinusBranch),
            "+im" => Ok(RootSelector::PosIm),
            "-im" => Ok(RootSelector::NegIm),
            "+re" => Ok(RootSelector::PosRe),
            "-re" => Ok(RootSelector::NegRe),
            _ => Err(format!(
                "unknown root selector `{s}` (expected +im, -im, +re, -re, plus, minus)"
            )),
        }
    }
}

/// Decides whether e has a square root in K by solving (p+qθ)² = e over
/// the rationals; returns one root if so.
pub fn sqrt_in_field(e: &FieldElement) -> Option<FieldElement> {
    let ring = e.ring;
    let (m0i, m1i) = theta_sq_pair(ring);
    let m0 = BigRational::from(BigInt::from(m0i));
    let m1 = BigRational::from(BigInt::from(m1i));
    let s = &e.u;
    let t = &e.v;
    let two = BigRational::from(BigInt::from(2));
    let four = BigRational::from(BigInt::from(4));

    let verify = |p: BigRational, q: BigRational| -> Option<FieldElement> {
        let cand = FieldElement::new(ring, p, q);
        if cand.mul(&cand) == *e {
            Some(cand)
        } else {
            None
        }
    };

    if t.is_zero() {
        // q = 0 branch: p² = s
        if let Some(p) = rational_sqrt_exact(s) {
            if let Some(r) = verify(p, BigRational::zero()) {
                return Some(r);
            }
        }
        // 2p = −m1·q branch: q²·(m0 + m1²/4) = s
        let denom = &m0 + &m1 * &m1 / &four;
        if !denom.is_zero() {
            let q_sq = s / denom;
            if let Some(q) = rational_sqrt_exact(&q_sq) {
                let p = -&m1 * &q / &two;
                if let Some(r) = verify(p, q) {
                    return Some(r);
                }
            }
        }
        return None;
    }

    // t ≠ 0: q ≠ 0 and p = (t/q − m1·q)/2; substituting gives a
    // quadratic in Y = q²:  (m1²+4m0)·Y² − (2m1t+4s)·Y + t² = 0.
    let d4 = &m1 * &m1 + &four * &m0;
    let lin = &two * &m1 * t + &four * s;
    let delta = &lin * &lin - &four * &d4 * t * t;
    let sqrt_delta = rational_sqrt_exact(&delta)?;
    for sign in [BigRational::one(), -BigRational::one()] {
        if d4.is_zero() {
            break;
        }
        let y = (&lin + &sign * &sqrt_delta) / (&two * &d4);
        if y.is_negative() {
            continue;
        }
        if let Some(q) = rational_sqrt_exact(&y) {
            for qq in [q.clone(), -q] {
                if qq.is_zero() {
                    continue;
                }
                let p = (t / &qq - &m1 * &qq) / &two;
                if let Some(r) = verify(p, qq) {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn theta_sq_pair(ring: RingSpec) -> (i64, i64) {
    match ring {
        RingSpec::Sqrt(k) => (-(k as i64), 0),
        RingSpec::Half(t) => (-((t as i64 + 1) / 4), 1),
    }
}

/// Principal complex square root, as a containment-correct box.
/// Convention: Re ≥ 0, and for real negative input the root with Im > 0.
fn principal_sqrt_box(d: &ExactComplex, bits: u32) -> ComplexBox {
    let zero = BigRational::zero();
    let two = BigRational::from(BigInt::from(2));
    let sign_im = d.im.sign();
    if sign_im == 0 {
        let sign_re = d.re.sign();
        return if sign_re >= 0 {
            ComplexBox::new(
                sqrt_iv(&d.re.to_interval(bits), bits),
                RatInterval::point(zero),
            )
        } else {
            ComplexBox::new(
                RatInterval::point(zero),
                sqrt_iv(&d.re.neg().to_interval(bits), bits),
            )
        };
    }
    let norm_iv = d.norm_sq().to_interval(bits);
    let abs_iv = sqrt_iv(&norm_iv, bits);
    let re_iv = d.re.to_interval(bits);
    let u_sq = abs_iv.add(&re_iv).mul_rational(&two.recip());
    let v_sq = abs_iv.sub(&re_iv).mul_rational(&two.recip());
    let u = sqrt_iv(&u_sq, bits);
    let v_mag = sqrt_iv(&v_sq, bits);
    let v = if sign_im > 0 { v_mag } else { v_mag.neg() };
    ComplexBox::new(u, v)
}

/// √ of a rational interval, clamping a slightly-negative lower endpoint
/// (interval slack around a nonnegative quantity) to zero.
fn sqrt_iv(iv: &RatInterval, bits: u32) -> RatInterval {
    let zero = BigRational::zero();
    let lo = if iv.lo().is_negative() { zero.clone() } else { iv.lo().clone() };
    let hi = if iv.hi().is_negative() { zero.clone() } else { iv.hi().clone() };
    RatInterval::new(
        sqrt_interval(&lo, bits).lo().clone(),
        sqrt_interval(&hi, bits).hi().clone(),
    )
}

/// Quadratic context: the algebra K[z]/(az²+bz+c) together with a
/// bracket isolating the tracked root.
#[derive(Debug)]
pub struct SurdContext {
    pub ring: RingSpec,
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
    pub branch: RootBranch,
    pub bracket: ComplexBox,
    /// b/a and c/a, precomputed for the quotient-algebra reductions.
    b_over_a: FieldElement,
    c_over_a: FieldElement,
    /// Memoized root enclosures per precision.
    root_cache: std::sync::Mutex<std::collections::BTreeMap<u32, ComplexBox>>,
}

impl Clone for SurdContext {
    fn clone(&self) -> Self {
        SurdContext {
            ring: self.ring,
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            branch: self.branch,
            bracket: self.bracket.clone(),
            b_over_a: self.b_over_a.clone(),
            c_over_a: self.c_over_a.clone(),
            root_cache: std::sync::Mutex::new(
                self.root_cache.lock().unwrap().clone(),
            ),
        }
    }
}

impl PartialEq for SurdContext {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.a == other.a
            && self.b == other.b
            && self.c == other.c
            && self.branch == other.branch
    }
}

impl Eq for SurdContext {}

impl SurdContext {
    /// Builds a context, rejecting reducible polynomials (a root in K).
    pub fn new(
        ring: RingSpec,
        a: RingElement,
        b: RingElement,
        c: RingElement,
        selector: RootSelector,
    ) -> Result<Arc<Self>> {
        if a.ring != ring || b.ring != ring || c.ring != ring {
            return Err(Error::InvalidInput("minimal polynomial coefficients from a different ring".into()));
        }
        if a.is_zero() {
            return Err(Error::InvalidInput("leading coefficient a must be nonzero".into()));
        }
        let disc = b.mul(&b).sub(&a.mul(&c).mul(&RingElement::new(ring, 4, 0)));
        if sqrt_in_field(&FieldElement::from_ring(&disc)).is_some() {
            return Err(Error::Reducible(format!(
                "discriminant {} is a square in K",
                disc
            )));
        }
        let branch = match selector {
            RootSelector::PlusBranch => RootBranch::Plus,
            RootSelector::MinusBranch => RootBranch::Minus,
            _ => Self::select_branch(ring, &a, &b, &c, selector)?,
        };
        let mut ctx = Self::assemble(ring, a, b, c, branch);
        ctx.bracket = ctx.isolating_bracket();
        Ok(Arc::new(ctx))
    }

    fn assemble(
        ring: RingSpec,
        a: RingElement,
        b: RingElement,
        c: RingElement,
        branch: RootBranch,
    ) -> SurdContext {
        let fa = FieldElement::from_ring(&a);
        let b_over_a = FieldElement::from_ring(&b).div(&fa);
        let c_over_a = FieldElement::from_ring(&c).div(&fa);
        SurdContext {
            ring,
            a,
            b,
            c,
            branch,
            bracket: ComplexBox::point(BigRational::zero(), BigRational::zero()),
            b_over_a,
            c_over_a,
            root_cache: std::sync::Mutex::new(std::collections::BTreeMap::new()),
        }
    }

    /// Picks the branch whose root satisfies a strict sign selector,
    /// deciding signs exactly; errors when no or both roots qualify.
    fn select_branch(
        ring: RingSpec,
        a: &RingElement,
        b: &RingElement,
        c: &RingElement,
        selector: RootSelector,
    ) -> Result<RootBranch> {
        let mut qualifying = Vec::new();
        for branch in [RootBranch::Plus, RootBranch::Minus] {
            let mut ctx = Self::assemble(ring, a.clone(), b.clone(), c.clone(), branch);
            ctx.bracket = ctx.isolating_bracket();
            let ctx = Arc::new(ctx);
            let z = SurdElement::generator(&ctx);
            let ok = match selector {
                RootSelector::PosIm => z.im_sign() > 0,
                RootSelector::NegIm => z.im_sign() < 0,
                RootSelector::PosRe => z.cmp_re(&BigRational::zero()) == Ordering::Greater,
                RootSelector::NegRe => z.cmp_re(&BigRational::zero()) == Ordering::Less,
                _ => unreachable!(),
            };
            if ok {
                qualifying.push(branch);
            }
        }
        match qualifying.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::RootSelection("no root matches the selector".into())),
            _ => Err(Error::RootSelection(
                "both roots match the selector; use an explicit branch".into(),
            )),
        }
    }

    /// Box around the tracked root at roughly `bits` of precision.
    pub fn root_box(&self, bits: u32) -> ComplexBox {
        if let Some(hit) = self.root_cache.lock().unwrap().get(&bits) {
            return hit.clone();
        }
        let computed = self.root_box_uncached(bits);
        self.root_cache
            .lock()
            .unwrap()
            .insert(bits, computed.clone());
        computed
    }

    fn root_box_uncached(&self, bits: u32) -> ComplexBox {
        let disc = self
            .b
            .mul(&self.b)
            .sub(&self.a.mul(&self.c).mul(&RingElement::new(self.ring, 4, 0)));
        let sqrt_box = principal_sqrt_box(&disc.embed(), bits);
        let sqrt_box = match self.branch {
            RootBranch::Plus => sqrt_box,
            RootBranch::Minus => sqrt_box.neg(),
        };
        let minus_b = self.b.neg().embed_box(bits);
        let two_a = self
            .a
            .mul(&RingElement::new(self.ring, 2, 0))
            .embed_box(bits.max(32));
        minus_b.add(&sqrt_box).div(&two_a)
    }

    /// Initial bracket: refined until the two root boxes are disjoint, so
    /// the bracket isolates exactly one root.
    fn isolating_bracket(&self) -> ComplexBox {
        let mut bits = 32;
        loop {
            let own = self.root_box(bits);
            let other = Self::assemble(
                self.ring,
                self.a.clone(),
                self.b.clone(),
                self.c.clone(),
                match self.branch {
                    RootBranch::Plus => RootBranch::Minus,
                    RootBranch::Minus => RootBranch::Plus,
                },
            )
            .root_box(bits);
            if !own.intersects(&other) {
                return own;
            }
            bits *= 2;
            assert!(bits <= 1 << 16, "roots failed to separate (degenerate discriminant?)");
        }
    }

    /// Containment-correct bracket of width ≤ `target_width`.
    pub fn refine_bracket(&self, target_width: &BigRational) -> ComplexBox {
        assert!(target_width.is_positive(), "target width must be positive");
        let mut bits = 64;
        loop {
            let b = self.root_box(bits);
            if &b.width() <= target_width {
                return b;
            }
            bits *= 2;
            assert!(bits <= 1 << 22, "bracket refinement runaway");
        }
    }

    /// Exact complex value of the tracked root whenever the discriminant
    /// is a real number (its θ-coordinate vanishes); `None` otherwise.
    pub fn exact_root(&self) -> Option<ExactComplex> {
        let disc = self
            .b
            .mul(&self.b)
            .sub(&self.a.mul(&self.c).mul(&RingElement::new(self.ring, 4, 0)));
        if !disc.y.is_zero() {
            return None;
        }
        let x = BigRational::from(disc.x.clone());
        let s = if x.is_negative() {
            ExactComplex::new(
                ExactReal::zero(),
                ExactReal::sqrt_rational(&-x).unwrap(),
            )
        } else {
            ExactComplex::new(ExactReal::sqrt_rational(&x).unwrap(), ExactReal::zero())
        };
        let s = match self.branch {
            RootBranch::Plus => s,
            RootBranch::Minus => s.neg(),
        };
        let two_a = self
            .a
            .mul(&RingElement::new(self.ring, 2, 0))
            .embed();
        Some(self.b.neg().embed().add(&s).div(&two_a))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring.tag(),
            "minpoly": [
                self.a.serialize_str(),
                self.b.serialize_str(),
                self.c.serialize_str(),
            ],
            "branch": if self.branch == RootBranch::Plus { "plus" } else { "minus" },
            "bracket": BoxRepr::from(&self.bracket).0,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Arc<Self>> {
        let bad = |m: &str| Error::InvalidInput(format!("surd context JSON: {m}"));
        let ring = RingSpec::from_tag(
            v.get("ring").and_then(|r| r.as_str()).ok_or_else(|| bad("missing ring"))?,
        )
        .map_err(Error::InvalidInput)?;
        let mp = v
            .get("minpoly")
            .and_then(|m| m.as_array())
            .ok_or_else(|| bad("missing minpoly"))?;
        if mp.len() != 3 {
            return Err(bad("minpoly must have three coefficients"));
        }
        let coeff = |i: usize| -> Result<RingElement> {
            mp[i]
                .as_str()
                .ok_or_else(|| bad("minpoly entries must be strings"))?
                .parse::<RingElement>()
                .map_err(Error::InvalidInput)
        };
        let (a, b, c) = (coeff(0)?, coeff(1)?, coeff(2)?);
        let branch = match v.get("branch").and_then(|b| b.as_str()) {
            Some("minus") => RootSelector::MinusBranch,
            Some("plus") | None => RootSelector::PlusBranch,
            Some(other) => return Err(bad(&format!("unknown branch `{other}`"))),
        };
        let ctx = SurdContext::new(ring, a, b, c, branch)?;
        if let Some(br) = v.get("bracket") {
            let arr: Vec<String> = serde_json::from_value(br.clone())
                .map_err(|e| bad(&format!("bad bracket: {e}")))?;
            if arr.len() != 4 {
                return Err(bad("bracket must have four endpoints"));
            }
            let user = BoxRepr([arr[0].clone(), arr[1].clone(), arr[2].clone(), arr[3].clone()])
                .to_box()
                .map_err(Error::InvalidInput)?;
            // The bracket must agree with the branch actually constructed.
            let mut bits = 64;
            loop {
                let own = ctx.root_box(bits);
                if user.contains_box(&own) {
                    break;
                }
                if !user.intersects(&own) {
                    return Err(bad("bracket does not contain the selected root"));
                }
                bits *= 2;
                if bits > 1 << 14 {
                    return Err(bad("bracket could not be certified against the root"));
                }
            }
        }
        Ok(ctx)
    }
}

impl fmt::Display for SurdContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})z^2+({})z+({}) [{:?} branch, ring {}]",
            self.a, self.b, self.c, self.branch, self.ring
        )
    }
}

/// α + β·z in a shared [`SurdContext`].
#[derive(Clone, Debug)]
pub struct SurdElement {
    pub ctx: Arc<SurdContext>,
    pub alpha: FieldElement,
    pub beta: FieldElement,
}

impl PartialEq for SurdElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ctx(other) && self.alpha == other.alpha && self.beta == other.beta
    }
}

impl Eq for SurdElement {}

impl std::hash::Hash for SurdElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.alpha.u.hash(state);
        self.alpha.v.hash(state);
        self.beta.u.hash(state);
        self.beta.v.hash(state);
    }
}

impl SurdElement {
    pub fn new(ctx: &Arc<SurdContext>, alpha: FieldElement, beta: FieldElement) -> Self {
        SurdElement { ctx: Arc::clone(ctx), alpha, beta }
    }

    /// The root z itself.
    pub fn generator(ctx: &Arc<SurdContext>) -> Self {
        Self::new(ctx, FieldElement::zero(ctx.ring), FieldElement::one(ctx.ring))
    }

    pub fn from_field(ctx: &Arc<SurdContext>, f: FieldElement) -> Self {
        let zero = FieldElement::zero(ctx.ring);
        Self::new(ctx, f, zero)
    }

    pub fn from_ring(ctx: &Arc<SurdContext>, e: &RingElement) -> Self {
        Self::from_field(ctx, FieldElement::from_ring(e))
    }

    pub fn zero(ctx: &Arc<SurdContext>) -> Self {
        Self::from_field(ctx, FieldElement::zero(ctx.ring))
    }

    pub fn one(ctx: &Arc<SurdContext>) -> Self {
        Self::from_field(ctx, FieldElement::one(ctx.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    fn same_ctx(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    fn check_ctx(&self, other: &Self) {
        assert!(self.same_ctx(other), "surd arithmetic across different contexts");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_ctx(o);
        Self::new(&self.ctx, self.alpha.add(&o.alpha), self.beta.add(&o.beta))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_ctx(o);
        Self::new(&self.ctx, self.alpha.sub(&o.alpha), self.beta.sub(&o.beta))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.alpha.neg(), self.beta.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_ctx(o);
        // (α₁+β₁z)(α₂+β₂z) with z² = −(b/a)z − c/a
        let a0 = self.alpha.mul(&o.alpha);
        let a1 = self.alpha.mul(&o.beta).add(&self.beta.mul(&o.alpha));
        let bb = self.beta.mul(&o.beta);
        let alpha = a0.sub(&bb.mul(&self.ctx.c_over_a));
        let beta = a1.sub(&bb.mul(&self.ctx.b_over_a));
        Self::new(&self.ctx, alpha, beta)
    }

    pub fn mul_field(&self, f: &FieldElement) -> Self {
        Self::new(&self.ctx, self.alpha.mul(f), self.beta.mul(f))
    }

    pub fn sub_ring(&self, e: &RingElement) -> Self {
        Self::new(
            &self.ctx,
            self.alpha.sub(&FieldElement::from_ring(e)),
            self.beta.clone(),
        )
    }

    /// Exact inverse in the quotient algebra.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.beta.is_zero() {
            return Ok(Self::from_field(&self.ctx, self.alpha.inv()));
        }
        // w' = image of w under z ↦ −b/a − z (the other root); w·w' ∈ K.
        let b_over_a = &self.ctx.b_over_a;
        let c_over_a = &self.ctx.c_over_a;
        let alpha2 = self.alpha.mul(&self.alpha);
        let norm = alpha2
            .sub(&self.alpha.mul(&self.beta).mul(b_over_a))
            .add(&self.beta.mul(&self.beta).mul(c_over_a));
        assert!(
            !norm.is_zero(),
            "w·w' vanished for nonzero w: context is not irreducible"
        );
        let ninv = norm.inv();
        let w_conj_alpha = self.alpha.sub(&self.beta.mul(b_over_a));
        Ok(Self::new(
            &self.ctx,
            w_conj_alpha.mul(&ninv),
            self.beta.neg().mul(&ninv),
        ))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Containment-correct box for the complex value.
    pub fn embed_box(&self, bits: u32) -> ComplexBox {
        let z = self.ctx.root_box(bits);
        self.alpha
            .embed_box(bits)
            .add(&self.beta.embed_box(bits).mul(&z))
    }

    /// Exact complex value when the context's discriminant is real.
    pub fn exact_value(&self) -> Option<ExactComplex> {
        let z = self.ctx.exact_root()?;
        Some(self.alpha.embed().add(&self.beta.embed().mul(&z)))
    }

    /// Quadratic over K satisfied by this element (requires β ≠ 0):
    /// a·w² + (bβ − 2aα)·w + (aα² − bαβ + cβ²) = 0.
    fn quadratic_over_k(&self) -> (FieldElement, FieldElement, FieldElement) {
        let a = FieldElement::from_ring(&self.ctx.a);
        let b = FieldElement::from_ring(&self.ctx.b);
        let c = FieldElement::from_ring(&self.ctx.c);
        let big_a = a.clone();
        let big_b = b.mul(&self.beta).sub(&a.mul(&self.alpha).mul_rational(
            &BigRational::from(BigInt::from(2)),
        ));
        let big_c = a
            .mul(&self.alpha)
            .mul(&self.alpha)
            .sub(&b.mul(&self.alpha).mul(&self.beta))
            .add(&c.mul(&self.beta).mul(&self.beta));
        (big_a, big_b, big_c)
    }

    /// Exact comparison of Re(w) against a rational.
    pub fn cmp_re(&self, t: &BigRational) -> Ordering {
        if self.beta.is_zero() {
            let re = &self.alpha.u + &self.alpha.v * self.ctx.ring.theta_re();
            return re.cmp(t);
        }
        for bits in [32u32, 96, 256] {
            let iv = self.embed_box(bits).re;
            if iv.lo() > t {
                return Ordering::Greater;
            }
            if iv.hi() < t {
                return Ordering::Less;
            }
        }
        if let Some(v) = self.exact_value() {
            return v.re.cmp_rational(t);
        }
        let target = t * BigRational::from(BigInt::from(2));
        let annihilator = self.re_annihilator();
        decide_against(
            |bits| {
                self.embed_box(bits)
                    .re
                    .mul_rational(&BigRational::from(BigInt::from(2)))
            },
            &annihilator,
            &target,
        )
    }

    /// Exact sign of Im(w).
    pub fn im_sign(&self) -> i32 {
        // g = conj(θ) − θ = −i·(2 Im θ), so Re(g·w) = (2 Im θ)·Im(w) and the
        // signs of Im(w) and Re(g·w) agree.
        let g = match self.ctx.ring {
            RingSpec::Sqrt(_) => FieldElement::new(
                self.ctx.ring,
                BigRational::zero(),
                BigRational::from(BigInt::from(-2)),
            ),
            RingSpec::Half(_) => FieldElement::new(
                self.ctx.ring,
                BigRational::one(),
                BigRational::from(BigInt::from(-2)),
            ),
        };
        let gw = self.mul_field(&g);
        match gw.cmp_re(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Exact comparison of |w|² against a rational.
    pub fn cmp_abs_sq(&self, t: &BigRational) -> Ordering {
        if self.beta.is_zero() {
            return self.alpha.norm_sq().cmp(t);
        }
        for bits in [32u32, 96, 256] {
            let iv = self.embed_box(bits).abs_sq();
            if iv.lo() > t {
                return Ordering::Greater;
            }
            if iv.hi() < t {
                return Ordering::Less;
            }
        }
        if let Some(v) = self.exact_value() {
            return v.norm_sq().cmp_rational(t);
        }
        let annihilator = self.abs_sq_annihilator();
        decide_against(|bits| self.embed_box(bits).abs_sq(), &annihilator, t)
    }

    /// ℚ-polynomial annihilating w + conj(w) = 2·Re(w).
    fn re_annihilator(&self) -> QPoly {
        let (a, b, c) = self.quadratic_over_k();
        let (ac, bc, cc) = (a.conj(), b.conj(), c.conj());
        // Q(T) = conj(P)(u − T) = ā·T² − (2ā·u + b̄)·T + (ā·u² + b̄·u + c̄)
        let qa = KPoly::constant(ac.clone());
        let qb = KPoly::new(vec![bc.neg(), ac.mul_rational(&BigRational::from(BigInt::from(-2)))]);
        let qc = KPoly::new(vec![cc.clone(), bc.clone(), ac.clone()]);
        let r = resultant_quadratics(&a, &b, &c, &qa, &qb, &qc);
        r.to_rational_poly()
    }

    /// ℚ-polynomial annihilating w·conj(w) = |w|².
    fn abs_sq_annihilator(&self) -> QPoly {
        let (a, b, c) = self.quadratic_over_k();
        let (ac, bc, cc) = (a.conj(), b.conj(), c.conj());
        // Q(T) = T²·conj(P)(v/T) = c̄·T² + b̄·v·T + ā·v²
        let qa = KPoly::constant(cc);
        let qb = KPoly::new(vec![FieldElement::zero(b.ring), bc]);
        let qc = KPoly::new(vec![
            FieldElement::zero(a.ring),
            FieldElement::zero(a.ring),
            ac,
        ]);
        let r = resultant_quadratics(&a, &b, &c, &qa, &qb, &qc);
        r.to_rational_poly()
    }

    pub fn serialize_coords(&self) -> String {
        format!(
            "({})+({})z",
            ratio_pair(&self.alpha),
            ratio_pair(&self.beta)
        )
    }
}

fn ratio_pair(f: &FieldElement) -> String {
    format!("{},{}", f.u, f.v)
}

impl fmt::Display for SurdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_coords())
    }
}

// ---------------------------------------------------------------------
// Small polynomial helpers for the annihilator construction.
// ---------------------------------------------------------------------

/// Dense polynomial over K, low-degree only (≤ 4 here).
#[derive(Clone, Debug)]
struct KPoly {
    coeffs: Vec<FieldElement>,
}

impl KPoly {
    fn new(coeffs: Vec<FieldElement>) -> Self {
        KPoly { coeffs }
    }

    fn constant(c: FieldElement) -> Self {
        KPoly { coeffs: vec![c] }
    }

    fn ring(&self) -> RingSpec {
        self.coeffs[0].ring
    }

    fn get(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(self.ring()))
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        KPoly::new((0..n).map(|i| self.get(i).sub(&o.get(i))).collect())
    }

    fn mul(&self, o: &Self) -> Self {
        let ring = self.ring();
        let mut out = vec![FieldElement::zero(ring); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            for (j, cj) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&ci.mul(cj));
            }
        }
        KPoly::new(out)
    }

    fn conj(&self) -> Self {
        KPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Extracts rational coefficients, requiring every θ-part to vanish
    /// (true for conjugation-invariant products by construction).
    fn to_rational_poly(&self) -> QPoly {
        let m = self.mul(&self.conj());
        let coeffs = m
            .coeffs
            .iter()
            .map(|c| {
                assert!(
                    c.v.is_zero(),
                    "conjugation-symmetric polynomial has irrational coefficient"
                );
                c.u.clone()
            })
            .collect();
        QPoly::new(coeffs)
    }
}

/// Res_T(P, Q) for quadratics P = a·T²+b·T+c (constants in K) and
/// Q = a'·T²+b'·T+c' with K[u]-polynomial coefficients:
/// (c·a' − c'·a)² − (a·b' − a'·b)(b·c' − b'·c).
fn resultant_quadratics(
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    qa: &KPoly,
    qb: &KPoly,
    qc: &KPoly,
) -> KPoly {
    let pa = KPoly::constant(a.clone());
    let pb = KPoly::constant(b.clone());
    let pc = KPoly::constant(c.clone());
    let t1 = pc.mul(qa).sub(&qc.mul(&pa));
    let t2 = pa.mul(qb).sub(&qa.mul(&pb));
    let t3 = pb.mul(qc).sub(&qb.mul(&pc));
    t1.mul(&t1).sub(&t2.mul(&t3))
}

/// Dense polynomial over ℚ.
#[derive(Clone, Debug)]
pub(crate) struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Divides by (x − t); panics if t is not a root.
    fn deflate(&self, t: &BigRational) -> QPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..self.coeffs.len()).rev() {
            let v = &self.coeffs[i] + &carry;
            if i == 0 {
                assert!(v.is_zero(), "deflation at a non-root");
            } else {
                out[i - 1] = v.clone();
                carry = v * t;
            }
        }
        QPoly::new(out)
    }

    /// Coefficients of p(x + t) via iterated synthetic division.
    fn shift(&self, t: &BigRational) -> QPoly {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = vec![BigRational::zero(); n];
        for item in out.iter_mut().take(n) {
            // one synthetic division by (x − t): remainder is next coeff
            let mut carry = BigRational::zero();
            for j in (0..work.len()).rev() {
                let v = &work[j] + &carry;
                work[j] = v.clone();
                if j > 0 {
                    carry = v * t;
                }
            }
            *item = work.remove(0);
            if work.is_empty() {
                break;
            }
        }
        QPoly::new(out)
    }

    /// Cauchy-type lower bound: every nonzero root x* satisfies
    /// |x*| ≥ |m₀| / (|m₀| + max_{i≥1} |mᵢ|); requires m₀ ≠ 0.
    fn root_gap_at_zero(&self) -> BigRational {
        let m0 = self.coeffs[0].abs();
        assert!(!m0.is_zero());
        let mmax = self.coeffs[1..]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        &m0 / (&m0 + mmax)
    }
}

/// Decides how an exactly-refinable real value compares to `t`, given
/// a nonzero ℚ-polynomial annihilating the value. Always terminates:
/// if the value differs from t the intervals eventually separate; if it
/// may equal t, a root-free gap of the deflated annihilator around t
/// certifies equality.
fn decide_against(
    value_interval: impl Fn(u32) -> RatInterval,
    annihilator: &QPoly,
    t: &BigRational,
) -> Ordering {
    assert!(!annihilator.is_zero(), "zero annihilator");
    let gap = if annihilator.eval(t).is_zero() {
        let mut m = annihilator.clone();
        loop {
            let d = m.deflate(t);
            if d.eval(t).is_zero() && d.coeffs.len() > 1 {
                m = d;
            } else {
                m = d;
                break;
            }
        }
        if m.is_zero() || m.coeffs.len() == 0 {
            None
        } else if m.eval(t).is_zero() {
            // fully deflated to a constant zero cannot happen for a
            // nonzero annihilator; treat as no gap
            None
        } else {
            Some(m.shift(t).root_gap_at_zero())
        }
    } else {
        None
    };

    let mut bits = 64u32;
    loop {
        let iv = value_interval(bits);
        if iv.lo() > t {
            return Ordering::Greater;
        }
        if iv.hi() < t {
            return Ordering::Less;
        }
        if let Some(g) = &gap {
            if &(t - iv.lo()) < g && &(iv.hi() - t) < g {
                // the annihilator has no root other than t this close,
                // and the value is a root inside the window
                return Ordering::Equal;
            }
        }
        bits = bits.saturating_mul(2);
        assert!(
            bits <= 1 << 21,
            "exact comparison failed to converge (annihilator gap {gap:?})"
        );
    }
}

/// Exact squared-distance comparison |z−a|² vs |z−b|² for a surd z and
/// lattice points a, b. `Less` means a is strictly closer.
pub fn cmp_dist_to_lattice(z: &SurdElement, a: &RingElement, b: &RingElement) -> Ordering {
    let delta = b.sub(a);
    let w = z.mul_field(&FieldElement::from_ring(&delta.conj()));
    // |z−a|² − |z−b|² = 2·Re(z·conj(b−a)) + |a|² − |b|²
    let target = BigRational::from(b.norm_sq() - a.norm_sq())
        / BigRational::from(BigInt::from(2));
    w.cmp_re(&target)
}

/// The exact set of nearest lattice points to a surd z: certified by
/// interval separation on the common path, with exact tie resolution via
/// the annihilator machinery when distances may coincide.
pub fn nearest_points_of_surd(z: &SurdElement, ring: RingSpec) -> Vec<RingElement> {
    let mut bits = 48u32;
    let mut rounds = 0;
    loop {
        let bx = z.embed_box(bits);
        let candidates = crate::rings::nearest_lattice_points(&bx, ring);
        if candidates.len() == 1 {
            return candidates;
        }
        rounds += 1;
        if rounds >= 4 {
            // Possible exact tie: decide pairwise, exactly.
            let mut best: Vec<RingElement> = Vec::new();
            for cand in candidates {
                if best.is_empty() {
                    best.push(cand);
                    continue;
                }
                match cmp_dist_to_lattice(z, &cand, &best[0]) {
                    Ordering::Less => {
                        best.clear();
                        best.push(cand);
                    }
                    Ordering::Equal => best.push(cand),
                    Ordering::Greater => {}
                }
            }
            best.sort_by(|a, b| a.lex_cmp(b));
            return best;
        }
        bits *= 2;
    }
}
