//! Exact arithmetic in the six discrete subrings Γ of ℂ that admit
//! nearest-integer continued fractions, and in their quotient fields K.
//!
//! Every ring is stored uniformly as ℤ + ℤθ with θ = i√k (k = 1, 2, 3) or
//! θ = (1 + i√τ)/2 (τ = 3, 7, 11). The Eisenstein ρ-basis used by the
//! growth analysis is a view on top of this: ρ = θ when τ = 3.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::ComplexBox;
use crate::real::{ExactComplex, ExactReal};

/// One of the six discrete subrings of ℂ with covering radius ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingSpec {
    /// ℤ[i√k] for k ∈ {1, 2, 3}; k = 1 is the Gaussian integers.
    Sqrt(u8),
    /// ℤ[(1+i√τ)/2] for τ ∈ {3, 7, 11}; τ = 3 is the Eisenstein integers.
    Half(u8),
}

pub const ALL_RINGS: [RingSpec; 6] = [
    RingSpec::Sqrt(1),
    RingSpec::Sqrt(2),
    RingSpec::Sqrt(3),
    RingSpec::Half(3),
    RingSpec::Half(7),
    RingSpec::Half(11),
];

impl RingSpec {
    pub fn gaussian() -> Self {
        RingSpec::Sqrt(1)
    }

    pub fn eisenstein() -> Self {
        RingSpec::Half(3)
    }

    pub fn validate(self) -> Result<Self, String> {
        match self {
            RingSpec::Sqrt(k) if (1..=3).contains(&k) => Ok(self),
            RingSpec::Half(t) if t == 3 || t == 7 || t == 11 => Ok(self),
            _ => Err(format!("no such ring: {self:?}")),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            RingSpec::Sqrt(1) => "Zi",
            RingSpec::Sqrt(2) => "Zi2",
            RingSpec::Sqrt(3) => "Zi3",
            RingSpec::Half(3) => "E",
            RingSpec::Half(7) => "E7",
            RingSpec::Half(11) => "E11",
            _ => unreachable!("invalid RingSpec"),
        }
    }

    pub fn from_tag(s: &str) -> Result<Self, String> {
        match s {
            "Zi" => Ok(RingSpec::Sqrt(1)),
            "Zi2" => Ok(RingSpec::Sqrt(2)),
            "Zi3" => Ok(RingSpec::Sqrt(3)),
            "E" => Ok(RingSpec::Half(3)),
            "E7" => Ok(RingSpec::Half(7)),
            "E11" => Ok(RingSpec::Half(11)),
            _ => Err(format!(
                "unknown ring tag `{s}` (expected Zi, Zi2, Zi3, E, E7, E11)"
            )),
        }
    }

    /// θ² = m0 + m1·θ with integers (m0, m1).
    fn theta_sq(self) -> (i64, i64) {
        match self {
            RingSpec::Sqrt(k) => (-(k as i64), 0),
            RingSpec::Half(t) => (-((t as i64 + 1) / 4), 1),
        }
    }

    /// Trace of θ: conj(θ) = trace − θ.
    fn theta_trace(self) -> i64 {
        match self {
            RingSpec::Sqrt(_) => 0,
            RingSpec::Half(_) => 1,
        }
    }

    /// Re(θ) as a rational.
    pub fn theta_re(self) -> BigRational {
        match self {
            RingSpec::Sqrt(_) => BigRational::zero(),
            RingSpec::Half(_) => BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }

    /// Im(θ) = s·√d: returns (s, d).
    pub fn theta_im(self) -> (BigRational, u64) {
        match self {
            RingSpec::Sqrt(k) => (BigRational::one(), k as u64),
            RingSpec::Half(t) => (
                BigRational::new(BigInt::one(), BigInt::from(2)),
                t as u64,
            ),
        }
    }

    /// The squarefree d with Im(Γ) ⊂ ℚ·√d.
    pub fn radicand(self) -> u64 {
        match self {
            RingSpec::Sqrt(k) => k as u64,
            RingSpec::Half(t) => t as u64,
        }
    }

    /// Circumradius of the nearest-integer cell: ½√(1+k) for ℤ[i√k],
    /// (τ+1)/(4√τ) for the half-integer rings.
    pub fn covering_radius(self) -> ExactReal {
        match self {
            RingSpec::Sqrt(k) => {
                let r = BigRational::new(BigInt::from(1 + k as i64), BigInt::from(4));
                ExactReal::sqrt_rational(&r).unwrap()
            }
            RingSpec::Half(t) => {
                // (τ+1)/(4√τ) = ((τ+1)/(4τ))·√τ
                let c = BigRational::new(BigInt::from(t as i64 + 1), BigInt::from(4 * t as i64));
                ExactReal::sqrt_term(c, &BigUint::from(t as u64))
            }
        }
    }

    /// Exact square of the covering radius (always rational).
    pub fn covering_radius_sq(self) -> BigRational {
        match self {
            RingSpec::Sqrt(k) => BigRational::new(BigInt::from(1 + k as i64), BigInt::from(4)),
            RingSpec::Half(t) => BigRational::new(
                BigInt::from((t as i64 + 1) * (t as i64 + 1)),
                BigInt::from(16 * t as i64),
            ),
        }
    }

    /// `true` for the five rings whose fundamental set fits in the open
    /// unit ball; ℤ[i√3] has covering radius exactly 1.
    pub fn contraction_guaranteed(self) -> bool {
        self.covering_radius_sq() < BigRational::one()
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Element x + y·θ of a discrete subring, with arbitrary-precision
/// integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub ring: RingSpec,
    pub x: BigInt,
    pub y: BigInt,
}

impl RingElement {
    pub fn new(ring: RingSpec, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        RingElement { ring, x: x.into(), y: y.into() }
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::new(ring, 0, 0)
    }

    pub fn one(ring: RingSpec) -> Self {
        Self::new(ring, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "mixed-ring arithmetic");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_ring(o);
        Self::new(self.ring, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_ring(o);
        Self::new(self.ring, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.ring, -self.x.clone(), -self.y.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_ring(o);
        let (m0, m1) = self.ring.theta_sq();
        let cross = &self.x * &o.y + &self.y * &o.x;
        let yy = &self.y * &o.y;
        Self::new(
            self.ring,
            &self.x * &o.x + &yy * BigInt::from(m0),
            cross + yy * BigInt::from(m1),
        )
    }

    /// Complex conjugate; the six rings are all closed under it.
    pub fn conj(&self) -> Self {
        let t = self.ring.theta_trace();
        Self::new(self.ring, &self.x + &self.y * BigInt::from(t), -self.y.clone())
    }

    /// Exact |·|² as a nonnegative integer; zero iff the element is zero.
    pub fn norm_sq(&self) -> BigInt {
        match self.ring {
            RingSpec::Sqrt(k) => &self.x * &self.x + &self.y * &self.y * BigInt::from(k as i64),
            RingSpec::Half(t) => {
                let m = BigInt::from((t as i64 + 1) / 4);
                &self.x * &self.x + &self.x * &self.y + &self.y * &self.y * m
            }
        }
    }

    pub fn embed(&self) -> ExactComplex {
        FieldElement::from_ring(self).embed()
    }

    pub fn embed_box(&self, bits: u32) -> ComplexBox {
        self.embed().to_box(bits)
    }

    /// Lexicographic (x, y) order; this is the default tie-breaking key.
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }

    pub fn serialize_str(&self) -> String {
        format!("{},{}@{}", self.x, self.y, self.ring.tag())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_str())
    }
}

impl FromStr for RingElement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (coords, tag) = s
            .split_once('@')
            .ok_or_else(|| format!("ring element `{s}` missing @RING suffix"))?;
        let ring = RingSpec::from_tag(tag.trim())?;
        let (x, y) = coords
            .split_once(',')
            .ok_or_else(|| format!("ring element `{s}` must be `x,y@RING`"))?;
        let x: BigInt = x.trim().parse().map_err(|_| format!("bad x in `{s}`"))?;
        let y: BigInt = y.trim().parse().map_err(|_| format!("bad y in `{s}`"))?;
        Ok(RingElement::new(ring, x, y))
    }
}

/// Element u + v·θ of the quotient field K = Frac(Γ), with rational
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub ring: RingSpec,
    pub u: BigRational,
    pub v: BigRational,
}

impl FieldElement {
    pub fn new(ring: RingSpec, u: BigRational, v: BigRational) -> Self {
        FieldElement { ring, u, v }
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::new(ring, BigRational::zero(), BigRational::zero())
    }

    pub fn one(ring: RingSpec) -> Self {
        Self::new(ring, BigRational::one(), BigRational::zero())
    }

    pub fn from_ring(e: &RingElement) -> Self {
        Self::new(
            e.ring,
            BigRational::from(e.x.clone()),
            BigRational::from(e.y.clone()),
        )
    }

    pub fn from_rational(ring: RingSpec, r: BigRational) -> Self {
        Self::new(ring, r, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "mixed-ring arithmetic");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_ring(o);
        Self::new(self.ring, &self.u + &o.u, &self.v + &o.v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_ring(o);
        Self::new(self.ring, &self.u - &o.u, &self.v - &o.v)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.ring, -self.u.clone(), -self.v.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_ring(o);
        let (m0, m1) = self.ring.theta_sq();
        let cross = &self.u * &o.v + &self.v * &o.u;
        let vv = &self.v * &o.v;
        Self::new(
            self.ring,
            &self.u * &o.u + &vv * BigRational::from(BigInt::from(m0)),
            cross + vv * BigRational::from(BigInt::from(m1)),
        )
    }

    pub fn conj(&self) -> Self {
        let t = self.ring.theta_trace();
        Self::new(
            self.ring,
            &self.u + &self.v * BigRational::from(BigInt::from(t)),
            -self.v.clone(),
        )
    }

    /// Exact |·|² as a nonnegative rational.
    pub fn norm_sq(&self) -> BigRational {
        match self.ring {
            RingSpec::Sqrt(k) => {
                &self.u * &self.u + &self.v * &self.v * BigRational::from(BigInt::from(k as i64))
            }
            RingSpec::Half(t) => {
                let m = BigRational::from(BigInt::from((t as i64 + 1) / 4));
                &self.u * &self.u + &self.u * &self.v + &self.v * &self.v * m
            }
        }
    }

    /// Multiplicative inverse; panics on zero (callers check).
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero field element");
        let c = self.conj();
        Self::new(self.ring, c.u / &n, c.v / &n)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        Self::new(self.ring, &self.u * r, &self.v * r)
    }

    /// Exact complex value: Re ∈ ℚ (+ half-integer shift), Im ∈ ℚ·√d.
    pub fn embed(&self) -> ExactComplex {
        let re = &self.u + &self.v * self.ring.theta_re();
        let (s, d) = self.ring.theta_im();
        let im_coeff = &self.v * s;
        ExactComplex::new(
            ExactReal::from_rational(re),
            ExactReal::sqrt_term(im_coeff, &BigUint::from(d)),
        )
    }

    pub fn embed_box(&self, bits: u32) -> ComplexBox {
        self.embed().to_box(bits)
    }

    /// `Some(RingElement)` iff both coordinates are integers.
    pub fn to_ring(&self) -> Option<RingElement> {
        if self.u.is_integer() && self.v.is_integer() {
            Some(RingElement::new(
                self.ring,
                self.u.to_integer(),
                self.v.to_integer(),
            ))
        } else {
            None
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*theta@{}", self.u, self.v, self.ring.tag())
    }
}

/// Exact squared distance from the complex point of `a` to the closed
/// box, as an `ExactReal` (the lattice imaginary parts carry √d).
fn dist_sq_to_box(a: &RingElement, z: &ComplexBox) -> ExactReal {
    let p = a.embed();
    let dx = clamp_gap(&p.re, z.re.lo(), z.re.hi());
    let dy = clamp_gap(&p.im, z.im.lo(), z.im.hi());
    dx.square().add(&dy.square())
}

/// Distance from a rational point to a rational interval (zero inside).
fn gap_interval_rational(v: &BigRational, lo: &BigRational, hi: &BigRational) -> BigRational {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        BigRational::zero()
    }
}

/// Lower bound on the squared distance from an interval-enclosed value to
/// a rational interval.
fn gap_interval_lo(
    v: &crate::interval::RatInterval,
    lo: &BigRational,
    hi: &BigRational,
) -> BigRational {
    if v.hi() < lo {
        let g = lo - v.hi();
        &g * &g
    } else if v.lo() > hi {
        let g = v.lo() - hi;
        &g * &g
    } else {
        BigRational::zero()
    }
}

fn clamp_gap(v: &ExactReal, lo: &BigRational, hi: &BigRational) -> ExactReal {
    match v.cmp_rational(lo) {
        Ordering::Less => ExactReal::from_rational(lo.clone()).sub(v),
        _ => match v.cmp_rational(hi) {
            Ordering::Greater => v.sub(&ExactReal::from_rational(hi.clone())),
            _ => ExactReal::zero(),
        },
    }
}

/// All ring elements whose nearest-integer cell could contain the box:
/// the returned set is exact for the closed-cell Voronoi partition, so a
/// point on a cell wall reports every cell it touches. A singleton means
/// the box resolves the nearest point uniquely.
pub fn nearest_lattice_points(z: &ComplexBox, ring: RingSpec) -> Vec<RingElement> {
    let cov_sq = ring.covering_radius_sq();
    let candidates = candidate_window(z, ring, &cov_sq);
    // cheap rational-interval screen first; exact distances only for the
    // survivors
    let (s, d) = ring.theta_im();
    let sqrt_d = crate::real::sqrt_interval(&BigRational::from(BigInt::from(d)), 24);
    let screened: Vec<&RingElement> = candidates
        .iter()
        .filter(|a| {
            let re = BigRational::from(a.x.clone())
                + BigRational::from(a.y.clone()) * ring.theta_re();
            let im_coeff = BigRational::from(a.y.clone()) * &s;
            let im = sqrt_d.mul_rational(&im_coeff);
            let dx = gap_interval_rational(&re, z.re.lo(), z.re.hi());
            let dy = gap_interval_lo(&im, z.im.lo(), z.im.hi());
            &dx * &dx + dy <= cov_sq
        })
        .collect();
    let alive: Vec<&RingElement> = screened
        .into_iter()
        .filter(|a| {
            dist_sq_to_box(a, z)
                .cmp_rational(&cov_sq)
                .is_le()
        })
        .collect();
    if alive.len() <= 1 {
        return alive.into_iter().cloned().collect();
    }
    // Exact cell test: a survives iff some part of the box, clipped by
    // every bisector halfplane against the other survivors, remains.
    // Every z in the box has its true nearest point among the survivors
    // (it is within covering radius of the box), so clipping against the
    // survivor set decides cell membership exactly.
    let mut out = Vec::new();
    for a in &alive {
        let mut poly = box_polygon(z);
        for b in &alive {
            if a == b {
                continue;
            }
            poly = clip_halfplane(poly, &bisector(a, b));
            if poly.is_empty() {
                break;
            }
        }
        if !poly.is_empty() {
            out.push((*a).clone());
        }
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

/// Lattice points with any chance of being within covering radius of the
/// box, found by scanning an over-approximate coordinate window.
fn candidate_window(z: &ComplexBox, ring: RingSpec, cov_sq: &BigRational) -> Vec<RingElement> {
    let cov_hi = crate::real::sqrt_interval(cov_sq, 16).hi().clone();
    let (s, d) = ring.theta_im();
    let im_unit = crate::real::sqrt_interval(&BigRational::from(BigInt::from(d)), 16)
        .mul_rational(&s);
    let theta_re = ring.theta_re();

    let y_lo_bound = (z.im.lo() - &cov_hi) / im_unit.hi();
    let y_hi_bound = (z.im.hi() + &cov_hi) / im_unit.lo();
    let y_lo: BigInt = y_lo_bound.floor().to_integer() - 1;
    let y_hi: BigInt = y_hi_bound.ceil().to_integer() + 1;

    let mut out = Vec::new();
    let mut y = y_lo;
    while y <= y_hi {
        let shift = BigRational::from(y.clone()) * &theta_re;
        let x_lo: BigInt = (z.re.lo() - &cov_hi - &shift).floor().to_integer() - 1;
        let x_hi = (z.re.hi() + &cov_hi - &shift).ceil().to_integer() + 1;
        let mut x = x_lo;
        while x <= x_hi {
            out.push(RingElement::new(ring, x.clone(), y.clone()));
            x += 1;
        }
        y += 1;
    }
    out
}

/// Halfplane `cs·s + ct_coeff·√d·t ≤ rhs` over points (s, t) with
/// ExactReal coordinates.
struct Halfplane {
    cs: BigRational,
    ct: ExactReal,
    rhs: BigRational,
}

impl Halfplane {
    fn eval(&self, p: &ExactComplex) -> ExactReal {
        p.re.mul_rational(&self.cs)
            .add(&p.im.mul(&self.ct))
            .sub(&ExactReal::from_rational(self.rhs.clone()))
    }
}

/// `{z : |z−a|² ≤ |z−b|²}` as a halfplane in the (Re, Im) plane.
fn bisector(a: &RingElement, b: &RingElement) -> Halfplane {
    let pa = a.embed();
    let pb = b.embed();
    let two = BigRational::from(BigInt::from(2));
    let cs_exact = pb.re.sub(&pa.re).mul_rational(&two);
    let cs = cs_exact
        .as_rational()
        .expect("lattice real parts are rational");
    let ct = pb.im.sub(&pa.im).mul_rational(&two);
    let rhs = BigRational::from(b.norm_sq() - a.norm_sq());
    Halfplane { cs, ct, rhs }
}

fn box_polygon(z: &ComplexBox) -> Vec<ExactComplex> {
    let c = |re: &BigRational, im: &BigRational| {
        ExactComplex::from_rationals(re.clone(), im.clone())
    };
    vec![
        c(z.re.lo(), z.im.lo()),
        c(z.re.hi(), z.im.lo()),
        c(z.re.hi(), z.im.hi()),
        c(z.re.lo(), z.im.hi()),
    ]
}

/// Sutherland–Hodgman clip of a convex polygon by a closed halfplane,
/// with exact ExactReal arithmetic throughout.
fn clip_halfplane(poly: Vec<ExactComplex>, h: &Halfplane) -> Vec<ExactComplex> {
    if poly.is_empty() {
        return poly;
    }
    let vals: Vec<ExactReal> = poly.iter().map(|p| h.eval(p)).collect();
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let j = (i + 1) % n;
        let (fi, fj) = (&vals[i], &vals[j]);
        let in_i = fi.sign() <= 0;
        let in_j = fj.sign() <= 0;
        if in_i {
            out.push(poly[i].clone());
        }
        if in_i != in_j {
            // crossing point: p_i + fi/(fi−fj)·(p_j − p_i)
            let t = fi.div(&fi.sub(fj));
            let delta = poly[j].sub(&poly[i]);
            let cross = poly[i].add(&ExactComplex::new(
                delta.re.mul(&t),
                delta.im.mul(&t),
            ));
            out.push(cross);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn point(re: BigRational, im: BigRational) -> ComplexBox {
        ComplexBox::point(re, im)
    }

    #[test]
    fn norms_match_spec_examples() {
        let g = RingSpec::gaussian();
        assert_eq!(RingElement::new(g, 1, 1).norm_sq(), BigInt::from(2));
        let e = RingSpec::eisenstein();
        // ρ = θ: |ρ| = 1
        assert_eq!(RingElement::new(e, 0, 1).norm_sq(), BigInt::from(1));
        // j = i√3 = 2θ − 1: |j|² = 3
        assert_eq!(RingElement::new(e, -1, 2).norm_sq(), BigInt::from(3));
    }

    #[test]
    fn discreteness_of_nonzero_norms() {
        for ring in ALL_RINGS {
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    let e = RingElement::new(ring, x, y);
                    if !e.is_zero() {
                        assert!(e.norm_sq() >= BigInt::one(), "{e}");
                    }
                }
            }
        }
    }

    #[test]
    fn covering_radii() {
        // ½√2 for Gaussian
        let g = RingSpec::gaussian().covering_radius();
        assert_eq!(g.square().as_rational(), Some(rat(1, 2)));
        // 1/√3 for Eisenstein
        let e = RingSpec::eisenstein().covering_radius();
        assert_eq!(e.square().as_rational(), Some(rat(1, 3)));
        // exactly 1 for ℤ[i√3]
        let z3 = RingSpec::Sqrt(3).covering_radius();
        assert_eq!(z3.as_rational(), Some(rat(1, 1)));
        assert!(!RingSpec::Sqrt(3).contraction_guaranteed());
        for ring in ALL_RINGS {
            if ring != RingSpec::Sqrt(3) {
                assert!(ring.contraction_guaranteed(), "{ring}");
            }
        }
        // (τ+1)/(4√τ) for τ = 7: squared is 64/112 = 4/7
        let e7 = RingSpec::Half(7).covering_radius();
        assert_eq!(e7.square().as_rational(), Some(rat(4, 7)));
    }

    #[test]
    fn conjugation_and_multiplication() {
        let e = RingSpec::eisenstein();
        let rho = RingElement::new(e, 0, 1);
        // ρ⁶ = 1
        let mut p = RingElement::one(e);
        for _ in 0..6 {
            p = p.mul(&rho);
        }
        assert!(p.is_one());
        // a·conj(a) = |a|² as a ring element
        let a = RingElement::new(e, 3, -2);
        let n = a.mul(&a.conj());
        assert_eq!(n.x, a.norm_sq());
        assert!(n.y.is_zero());
    }

    #[test]
    fn field_inverse_round_trip() {
        for ring in ALL_RINGS {
            let w = FieldElement::new(ring, rat(3, 7), rat(-2, 5));
            let one = w.mul(&w.inv());
            assert_eq!(one, FieldElement::one(ring));
        }
    }

    #[test]
    fn nearest_gaussian_point() {
        let g = RingSpec::gaussian();
        let z = point(rat(17, 5), rat(13, 5)); // 3.4 + 2.6i
        let near = nearest_lattice_points(&z, g);
        assert_eq!(near, vec![RingElement::new(g, 3, 3)]);
    }

    #[test]
    fn nearest_gaussian_tie() {
        let g = RingSpec::gaussian();
        let z = point(rat(1, 2), rat(1, 2));
        let near = nearest_lattice_points(&z, g);
        assert_eq!(
            near,
            vec![
                RingElement::new(g, 0, 0),
                RingElement::new(g, 0, 1),
                RingElement::new(g, 1, 0),
                RingElement::new(g, 1, 1),
            ]
        );
    }

    #[test]
    fn nearest_eisenstein_against_brute_force() {
        // point 1.4i: nearest must be j = i√3 (distance ≈ 0.332), checked
        // against an independent brute-force scan over |a| ≤ 3.
        let e = RingSpec::eisenstein();
        let z = point(rat(0, 1), rat(7, 5));
        let near = nearest_lattice_points(&z, e);
        assert_eq!(near, vec![RingElement::new(e, -1, 2)]);

        let mut best: Option<(ExactReal, RingElement)> = None;
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                let a = RingElement::new(e, x, y);
                if a.norm_sq() > BigInt::from(9) {
                    continue;
                }
                let p = a.embed();
                let dx = p.re.sub(&ExactReal::from_rational(rat(0, 1)));
                let dy = p.im.sub(&ExactReal::from_rational(rat(7, 5)));
                let d2 = dx.square().add(&dy.square());
                match &best {
                    None => best = Some((d2, a)),
                    Some((b, _)) if d2.cmp_exact(b) == Ordering::Less => best = Some((d2, a)),
                    _ => {}
                }
            }
        }
        assert_eq!(best.unwrap().1, RingElement::new(e, -1, 2));
    }

    #[test]
    fn box_straddling_wall_reports_both_cells() {
        let g = RingSpec::gaussian();
        let z = ComplexBox::new(
            crate::interval::RatInterval::new(rat(2, 5), rat(3, 5)),
            crate::interval::RatInterval::new(rat(1, 10), rat(1, 5)),
        );
        let near = nearest_lattice_points(&z, g);
        assert_eq!(
            near,
            vec![RingElement::new(g, 0, 0), RingElement::new(g, 1, 0)]
        );
    }

    #[test]
    fn nearest_within_covering_radius() {
        // random-ish rational points in the base cell, exact distance check
        let mut seed = 1234567u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for ring in ALL_RINGS {
            for _ in 0..40 {
                let re = rat(next() % 2000, 1000);
                let im = rat(next() % 2000, 1000);
                let z = point(re.clone(), im.clone());
                let near = nearest_lattice_points(&z, ring);
                assert!(!near.is_empty());
                let cov_sq = ring.covering_radius_sq();
                for a in near {
                    let p = a.embed();
                    let dx = p.re.sub(&ExactReal::from_rational(re.clone()));
                    let dy = p.im.sub(&ExactReal::from_rational(im.clone()));
                    let d2 = dx.square().add(&dy.square());
                    assert!(d2.cmp_rational(&cov_sq).is_le(), "{ring}");
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let e = RingElement::new(RingSpec::Half(11), -17, 4);
        let s = e.serialize_str();
        assert_eq!(s, "-17,4@E11");
        let back: RingElement = s.parse().unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn ring_arithmetic_agrees_with_interval_embedding() {
        let mut seed = 99u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 41) as i64 - 20
        };
        for ring in ALL_RINGS {
            for _ in 0..50 {
                let a = RingElement::new(ring, next(), next());
                let b = RingElement::new(ring, next(), next());
                let sum_box = a.embed_box(64).add(&b.embed_box(64));
                assert!(a.add(&b).embed().in_box(&sum_box));
                let prod_box = a.embed_box(64).mul(&b.embed_box(64));
                assert!(a.mul(&b).embed().in_box(&prod_box));
            }
        }
    }
}
