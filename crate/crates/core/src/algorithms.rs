//! Digit-choice algorithms f: ℂ → Γ with |z − f(z)| ≤ 1, their
//! fundamental-set geometry, and the exact disk-based verifiers for the
//! Eisenstein conditions that force monotone denominator growth.
//!
//! All geometric tests run on disks with `ExactReal` center coordinates
//! and squared radii, so comparisons like |c| + r ≤ R reduce to nested
//! squaring over the multi-radical scalar field and stay exact.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_surd::{nearest_points_of_surd, SurdElement};
use crate::interval::ComplexBox;
use crate::real::{ExactComplex, ExactReal};
use crate::rings::{nearest_lattice_points, FieldElement, RingElement, RingSpec};
use crate::{Error, Result};

/// Deterministic resolution of exact nearest-point ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieRule {
    /// Smallest (x, y) coordinate pair in lexicographic order.
    LexMin,
}

/// A chosen digit plus whether an exact tie had to be broken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digit {
    pub value: RingElement,
    pub tie_broken: bool,
}

/// Linear or circular constraint on the base parallelogram, written in
/// rational ρ-basis coordinates (a point is s + t·ρ).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CellConstraint {
    Halfplane {
        /// a·s + b·t ≤ c
        a: String,
        b: String,
        c: String,
    },
    Disk {
        /// |ζ − (cs + ct·ρ)|² vs r²; `inside` picks ≤ or ≥
        cs: String,
        ct: String,
        r_sq: String,
        inside: bool,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionCell {
    /// Vertex of the base parallelogram in ρ-coordinates: one of
    /// (0,0), (1,0), (0,1), (1,1).
    pub vertex: (i64, i64),
    pub constraints: Vec<CellConstraint>,
    /// Optional declared bound: cell ⊆ B(vertex, √radius_sq).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_sq: Option<String>,
}

/// Cell partition of the closed parallelogram with vertices 0, 1, ρ, 1+ρ,
/// defining an Eisenstein-valued algorithm by translation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub cells: Vec<PartitionCell>,
}

#[derive(Clone, Debug)]
pub enum AlgorithmKind {
    NearestInteger { tie_rule: TieRule },
    Partition(PartitionSpec),
}

/// A digit algorithm together with its certified fundamental-set radius.
#[derive(Clone, Debug)]
pub struct AlgorithmSpec {
    pub ring: RingSpec,
    pub kind: AlgorithmKind,
    /// r² with Φ_f ⊆ B̄(0, r); rational for nearest-integer, possibly
    /// irrational (e.g. λ) for declared partition bounds.
    cell_radius_sq: ExactReal,
    /// Closed bounding disks (true for the nearest-integer Voronoi cells,
    /// false for partitions declared via open-ball bounds).
    cells_closed: bool,
}

impl AlgorithmSpec {
    pub fn nearest(ring: RingSpec) -> Self {
        AlgorithmSpec {
            ring,
            kind: AlgorithmKind::NearestInteger { tie_rule: TieRule::LexMin },
            cell_radius_sq: ExactReal::from_rational(ring.covering_radius_sq()),
            cells_closed: true,
        }
    }

    /// Builds a partition algorithm over the Eisenstein integers. Every
    /// cell must carry or admit an exact bound `cell ⊆ B(vertex, r)`;
    /// the largest bound becomes the certified fundamental radius.
    pub fn partition(spec: PartitionSpec) -> Result<Self> {
        let ring = RingSpec::eisenstein();
        if spec.cells.is_empty() {
            return Err(Error::InvalidInput("partition with no cells".into()));
        }
        let mut max_r_sq = ExactReal::zero();
        for cell in &spec.cells {
            let v = cell.vertex;
            if !matches!(v, (0, 0) | (1, 0) | (0, 1) | (1, 1)) {
                return Err(Error::InvalidInput(format!(
                    "cell vertex {v:?} is not a vertex of the base parallelogram"
                )));
            }
            let bound = cell_bound_radius_sq(cell)?;
            if bound.cmp_exact(&max_r_sq) == Ordering::Greater {
                max_r_sq = bound;
            }
        }
        Ok(AlgorithmSpec {
            ring,
            kind: AlgorithmKind::Partition(spec),
            cell_radius_sq: max_r_sq,
            cells_closed: false,
        })
    }

    /// Declared-radius algorithm: cells known only through the bound
    /// C_f(a) ⊆ B(a, √r_sq). This is what the negative controls use.
    pub fn with_declared_radius(ring: RingSpec, r_sq: ExactReal, closed: bool) -> Self {
        AlgorithmSpec {
            ring,
            kind: AlgorithmKind::NearestInteger { tie_rule: TieRule::LexMin },
            cell_radius_sq: r_sq,
            cells_closed: closed,
        }
    }

    pub fn cell_radius_sq(&self) -> &ExactReal {
        &self.cell_radius_sq
    }

    pub fn cells_closed(&self) -> bool {
        self.cells_closed
    }

    /// `true` when Theorem-style error bounds apply (r < 1 strictly).
    pub fn contraction_certified(&self) -> bool {
        self.cell_radius_sq.cmp_rational(&BigRational::one()) == Ordering::Less
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            AlgorithmKind::NearestInteger { tie_rule } => {
                format!("nearest-integer (ties: {:?})", tie_rule)
            }
            AlgorithmKind::Partition(p) => format!("partition ({} cells)", p.cells.len()),
        }
    }

    /// Digit of an exact quadratic surd; exact ties are resolved by the
    /// tie rule and flagged.
    pub fn apply_surd(&self, z: &SurdElement) -> Result<Digit> {
        match &self.kind {
            AlgorithmKind::NearestInteger { tie_rule } => {
                let set = nearest_points_of_surd(z, self.ring);
                Ok(pick(set, *tie_rule))
            }
            AlgorithmKind::Partition(p) => partition_digit_surd(p, z),
        }
    }

    /// Digit of an exact complex point (numeric mode with exact input).
    pub fn apply_exact(&self, z: &ExactComplex) -> Result<Digit> {
        match &self.kind {
            AlgorithmKind::NearestInteger { tie_rule } => {
                let set = nearest_points_of_exact(z, self.ring);
                Ok(pick(set, *tie_rule))
            }
            AlgorithmKind::Partition(p) => partition_digit_exact(p, z),
        }
    }

    /// Digit of a box, when the box resolves it; `DigitUnresolved`
    /// otherwise (the caller owns refinement policy).
    pub fn apply_box(&self, z: &ComplexBox, step: usize) -> Result<Digit> {
        match &self.kind {
            AlgorithmKind::NearestInteger { tie_rule } => {
                if z.is_point() {
                    return self.apply_exact(&ExactComplex::from_rationals(
                        z.re.lo().clone(),
                        z.im.lo().clone(),
                    ));
                }
                let set = nearest_lattice_points(z, self.ring);
                match set.len() {
                    1 => Ok(Digit { value: set.into_iter().next().unwrap(), tie_broken: false }),
                    0 => Err(Error::DigitUnresolved {
                        step,
                        reason: "no lattice point within covering radius of the box".into(),
                    }),
                    _ => {
                        let _ = tie_rule;
                        Err(Error::DigitUnresolved {
                            step,
                            reason: format!(
                                "box of width {} straddles a cell wall",
                                z.width()
                            ),
                        })
                    }
                }
            }
            AlgorithmKind::Partition(_) => {
                if z.is_point() {
                    self.apply_exact(&ExactComplex::from_rationals(
                        z.re.lo().clone(),
                        z.im.lo().clone(),
                    ))
                } else {
                    Err(Error::DigitUnresolved {
                        step,
                        reason: "partition digits require a point or exact value".into(),
                    })
                }
            }
        }
    }
}

fn pick(mut set: Vec<RingElement>, tie_rule: TieRule) -> Digit {
    assert!(!set.is_empty(), "empty nearest-point set");
    if set.len() == 1 {
        return Digit { value: set.pop().unwrap(), tie_broken: false };
    }
    match tie_rule {
        TieRule::LexMin => {
            set.sort_by(|a, b| a.lex_cmp(b));
            Digit { value: set.into_iter().next().unwrap(), tie_broken: true }
        }
    }
}

/// Exact nearest-point set for an `ExactComplex` value.
pub fn nearest_points_of_exact(z: &ExactComplex, ring: RingSpec) -> Vec<RingElement> {
    let bx = z.to_box(24);
    let cov_hi = crate::real::sqrt_interval(&ring.covering_radius_sq(), 16)
        .hi()
        .clone();
    let grown = ComplexBox::new(
        crate::interval::RatInterval::new(bx.re.lo() - &cov_hi, bx.re.hi() + &cov_hi),
        crate::interval::RatInterval::new(bx.im.lo() - &cov_hi, bx.im.hi() + &cov_hi),
    );
    let candidates = nearest_lattice_points(&grown, ring);
    let mut best: Vec<RingElement> = Vec::new();
    let mut best_d: Option<ExactReal> = None;
    for a in candidates {
        let d = z.sub(&a.embed()).norm_sq();
        match &best_d {
            None => {
                best_d = Some(d);
                best = vec![a];
            }
            Some(b) => match d.cmp_exact(b) {
                Ordering::Less => {
                    best_d = Some(d);
                    best = vec![a];
                }
                Ordering::Equal => best.push(a),
                Ordering::Greater => {}
            },
        }
    }
    best.sort_by(|a, b| a.lex_cmp(b));
    best
}

// ---------------------------------------------------------------------
// Partition digits: tile lookup + cell membership, all exact.
// ---------------------------------------------------------------------

/// K-multipliers projecting an Eisenstein-plane value onto its rational
/// ρ-basis coordinates: s = Re(z·C1), t = Re(z·C2).
fn rho_coordinate_multipliers(ring: RingSpec) -> (FieldElement, FieldElement) {
    assert_eq!(ring, RingSpec::eisenstein());
    let third = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(3));
    // C1 = (2+2θ)/3, C2 = (2−4θ)/3
    (
        FieldElement::new(ring, third(2), third(2)),
        FieldElement::new(ring, third(2), third(-4)),
    )
}

/// Exact floor of Re(w) for a surd element.
fn floor_re_surd(w: &SurdElement) -> BigInt {
    let mut bits = 48;
    loop {
        let iv = w.embed_box(bits).re;
        let flo = iv.lo().floor().to_integer();
        let fhi = iv.hi().floor().to_integer();
        if flo == fhi {
            return flo;
        }
        if &fhi - &flo == BigInt::one() {
            // straddles the integer fhi: settle exactly; Re = fhi lands in
            // the upper tile by the floor convention
            return match w.cmp_re(&BigRational::from(fhi.clone())) {
                Ordering::Less => flo,
                _ => fhi,
            };
        }
        bits *= 2;
        assert!(bits <= 1 << 20, "floor refinement runaway");
    }
}

fn floor_exact_real(v: &ExactReal) -> BigInt {
    if let Some(r) = v.as_rational() {
        return r.floor().to_integer();
    }
    let mut bits = 48;
    loop {
        let iv = v.to_interval(bits);
        let flo = iv.lo().floor().to_integer();
        let fhi = iv.hi().floor().to_integer();
        if flo == fhi {
            return flo;
        }
        if &fhi - &flo == BigInt::one() {
            return match v.cmp_rational(&BigRational::from(fhi.clone())) {
                Ordering::Less => flo,
                _ => fhi,
            };
        }
        bits *= 2;
        assert!(bits <= 1 << 20, "floor refinement runaway");
    }
}

fn partition_digit_surd(p: &PartitionSpec, z: &SurdElement) -> Result<Digit> {
    let ring = z.ctx.ring;
    if ring != RingSpec::eisenstein() {
        return Err(Error::Precondition(
            "partition algorithms are defined over the Eisenstein integers".into(),
        ));
    }
    let (c1, c2) = rho_coordinate_multipliers(ring);
    let s_el = z.mul_field(&c1);
    let t_el = z.mul_field(&c2);
    let s0 = floor_re_surd(&s_el);
    let t0 = floor_re_surd(&t_el);
    // tile point a = s0 + t0·ρ (ρ = θ)
    let tile = RingElement::new(ring, s0.clone(), t0.clone());
    let zeta = z.sub_ring(&tile);
    for cell in &p.cells {
        if cell_contains_surd(cell, &zeta, &c1, &c2)? {
            let v = RingElement::new(ring, cell.vertex.0, cell.vertex.1);
            return Ok(Digit { value: tile.add(&v), tie_broken: false });
        }
    }
    Err(Error::InvalidInput(
        "partition cells do not cover the fractional point".into(),
    ))
}

fn cell_contains_surd(
    cell: &PartitionCell,
    zeta: &SurdElement,
    c1: &FieldElement,
    c2: &FieldElement,
) -> Result<bool> {
    let ring = zeta.ctx.ring;
    for cons in &cell.constraints {
        match cons {
            CellConstraint::Halfplane { a, b, c } => {
                let (a, b, c) = (parse_rat(a)?, parse_rat(b)?, parse_rat(c)?);
                // a·s + b·t ≤ c ⟺ Re(ζ·(a·C1 + b·C2)) ≤ c
                let mult = c1.mul_rational(&a).add(&c2.mul_rational(&b));
                let val = zeta.mul_field(&mult);
                if val.cmp_re(&c) == Ordering::Greater {
                    return Ok(false);
                }
            }
            CellConstraint::Disk { cs, ct, r_sq, inside } => {
                let (cs, ct, r_sq) = (parse_rat(cs)?, parse_rat(ct)?, parse_rat(r_sq)?);
                let center = FieldElement::new(ring, cs, ct);
                let diff = zeta.sub(&SurdElement::from_field(&zeta.ctx, center));
                let cmp = diff.cmp_abs_sq(&r_sq);
                let ok = if *inside { cmp != Ordering::Greater } else { cmp != Ordering::Less };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn partition_digit_exact(p: &PartitionSpec, z: &ExactComplex) -> Result<Digit> {
    let ring = RingSpec::eisenstein();
    // ρ-coordinates of an exact complex value: t = 2·Im/√3, s = Re − Im/√3
    let sqrt3 = ExactReal::sqrt_rational(&BigRational::from(BigInt::from(3))).unwrap();
    let t_val = z.im.mul(&sqrt3).mul_rational(&BigRational::new(BigInt::from(2), BigInt::from(3)));
    let s_val = z.re.sub(&z.im.mul(&sqrt3).mul_rational(&BigRational::new(BigInt::one(), BigInt::from(3))));
    let s0 = floor_exact_real(&s_val);
    let t0 = floor_exact_real(&t_val);
    let tile = RingElement::new(ring, s0, t0);
    let zeta = z.sub(&tile.embed());
    let zs = s_val.sub(&ExactReal::from_rational(BigRational::from(tile.x.clone())));
    let zt = t_val.sub(&ExactReal::from_rational(BigRational::from(tile.y.clone())));
    for cell in &p.cells {
        if cell_contains_exact(cell, &zeta, &zs, &zt)? {
            let v = RingElement::new(ring, cell.vertex.0, cell.vertex.1);
            return Ok(Digit { value: tile.add(&v), tie_broken: false });
        }
    }
    Err(Error::InvalidInput(
        "partition cells do not cover the fractional point".into(),
    ))
}

fn cell_contains_exact(
    cell: &PartitionCell,
    zeta: &ExactComplex,
    s: &ExactReal,
    t: &ExactReal,
) -> Result<bool> {
    for cons in &cell.constraints {
        match cons {
            CellConstraint::Halfplane { a, b, c } => {
                let (a, b, c) = (parse_rat(a)?, parse_rat(b)?, parse_rat(c)?);
                let val = s.mul_rational(&a).add(&t.mul_rational(&b));
                if val.cmp_rational(&c) == Ordering::Greater {
                    return Ok(false);
                }
            }
            CellConstraint::Disk { cs, ct, r_sq, inside } => {
                let (cs, ct, r_sq) = (parse_rat(cs)?, parse_rat(ct)?, parse_rat(r_sq)?);
                let center = FieldElement::new(RingSpec::eisenstein(), cs, ct);
                let d = zeta.sub(&center.embed()).norm_sq();
                let cmp = d.cmp_rational(&r_sq);
                let ok = if *inside { cmp != Ordering::Greater } else { cmp != Ordering::Less };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn parse_rat(s: &str) -> Result<BigRational> {
    crate::real::parse_ratio(s).map_err(Error::InvalidInput)
}

/// Exact bound radius² for a partition cell about its vertex: a declared
/// bound, a disk constraint centered at the vertex, or the circumradius
/// of a halfplane-polygon cell.
fn cell_bound_radius_sq(cell: &PartitionCell) -> Result<ExactReal> {
    if let Some(r) = &cell.radius_sq {
        let r = ExactReal::from_str(r).map_err(Error::InvalidInput)?;
        return Ok(r);
    }
    let v = (
        BigRational::from(BigInt::from(cell.vertex.0)),
        BigRational::from(BigInt::from(cell.vertex.1)),
    );
    // a containing disk constraint centered at the vertex bounds the cell
    for cons in &cell.constraints {
        if let CellConstraint::Disk { cs, ct, r_sq, inside: true } = cons {
            if parse_rat(cs)? == v.0 && parse_rat(ct)? == v.1 {
                return Ok(ExactReal::from_rational(parse_rat(r_sq)?));
            }
        }
    }
    // otherwise the cell must be a polygon: intersect its halfplanes with
    // the base parallelogram and take the circumradius about the vertex
    let mut poly: Vec<(BigRational, BigRational)> = vec![
        (BigRational::zero(), BigRational::zero()),
        (BigRational::one(), BigRational::zero()),
        (BigRational::one(), BigRational::one()),
        (BigRational::zero(), BigRational::one()),
    ];
    for cons in &cell.constraints {
        match cons {
            CellConstraint::Halfplane { a, b, c } => {
                poly = clip_rational(poly, &parse_rat(a)?, &parse_rat(b)?, &parse_rat(c)?);
            }
            CellConstraint::Disk { .. } => {
                return Err(Error::UnverifiableShape(
                    "disk-constrained cell without a vertex-centered bound".into(),
                ))
            }
        }
    }
    if poly.is_empty() {
        return Err(Error::UnverifiableShape("empty partition cell".into()));
    }
    // |s + t·ρ|² = s² + s·t + t² in ρ-coordinates
    let mut max = BigRational::zero();
    for (s, t) in &poly {
        let ds = s - &v.0;
        let dt = t - &v.1;
        let d2 = &ds * &ds + &ds * &dt + &dt * &dt;
        if d2 > max {
            max = d2;
        }
    }
    Ok(ExactReal::from_rational(max))
}

fn clip_rational(
    poly: Vec<(BigRational, BigRational)>,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    if poly.is_empty() {
        return poly;
    }
    let f = |p: &(BigRational, BigRational)| a * &p.0 + b * &p.1 - c;
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let j = (i + 1) % n;
        let (fi, fj) = (f(&poly[i]), f(&poly[j]));
        let in_i = !fi.is_positive();
        let in_j = !fj.is_positive();
        if in_i {
            out.push(poly[i].clone());
        }
        if in_i != in_j {
            let t = &fi / (&fi - &fj);
            out.push((
                &poly[i].0 + &t * (&poly[j].0 - &poly[i].0),
                &poly[i].1 + &t * (&poly[j].1 - &poly[i].1),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------
// Exact disk geometry.
// ---------------------------------------------------------------------

/// Disk with exact center coordinates and squared radius.
#[derive(Clone, Debug)]
pub struct Disk {
    pub center: ExactComplex,
    pub radius_sq: ExactReal,
    pub closed: bool,
}

impl Disk {
    pub fn new(center: ExactComplex, radius_sq: ExactReal, closed: bool) -> Self {
        assert!(radius_sq.sign() > 0, "disk radius must be positive");
        Disk { center, radius_sq, closed }
    }

    pub fn translate(&self, v: &ExactComplex) -> Self {
        Disk {
            center: self.center.add(v),
            radius_sq: self.radius_sq.clone(),
            closed: self.closed,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}B(({}, {}), sqrt({}))",
            if self.closed { "closed " } else { "" },
            self.center.re,
            self.center.im,
            self.radius_sq
        )
    }
}

/// Exact image of {w⁻¹ : w ∈ d}: B(c̄/(|c|²−r²), r/(|c|²−r²)).
pub fn invert_disk(d: &Disk) -> Result<Disk> {
    let c_norm = d.center.norm_sq();
    let denom = c_norm.sub(&d.radius_sq);
    if denom.sign() <= 0 {
        return Err(Error::DiskThroughOrigin);
    }
    let dinv = denom.inv();
    Ok(Disk {
        center: ExactComplex::new(
            d.center.re.mul(&dinv),
            d.center.im.neg().mul(&dinv),
        ),
        radius_sq: d.radius_sq.mul(&dinv).mul(&dinv),
        closed: d.closed,
    })
}

/// Three-way verdict of an exact geometric comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Boundary,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

use crate::real::cmp_sqrt_sum;

/// Does `inner` fit inside `outer`? Boundary means the closures touch
/// exactly where open/closed flags make the strict condition fail.
pub fn disk_in_disk(inner: &Disk, outer: &Disk) -> Verdict {
    let d_sq = inner.center.sub(&outer.center).norm_sq();
    // need |Δc| + r_inner ≤ r_outer, strict unless the flags allow touch:
    // closed inner inside open outer requires strict inequality.
    let cmp = cmp_sqrt_sum(&d_sq, &inner.radius_sq, &outer.radius_sq);
    let strict_needed = inner.closed && !outer.closed;
    match cmp {
        Ordering::Less => Verdict::Pass,
        Ordering::Equal => {
            if strict_needed {
                Verdict::Boundary
            } else {
                Verdict::Pass
            }
        }
        Ordering::Greater => Verdict::Fail,
    }
}

/// Are the two disks disjoint? Boundary = tangency decided by flags.
pub fn disks_disjoint(d1: &Disk, d2: &Disk) -> Verdict {
    let d_sq = d1.center.sub(&d2.center).norm_sq();
    let cmp = cmp_sqrt_sum(&d1.radius_sq, &d2.radius_sq, &d_sq);
    let touch_ok = !(d1.closed && d2.closed);
    match cmp {
        Ordering::Less => Verdict::Pass,
        Ordering::Equal => {
            if touch_ok {
                Verdict::Pass
            } else {
                Verdict::Boundary
            }
        }
        Ordering::Greater => Verdict::Fail,
    }
}

// ---------------------------------------------------------------------
// The Eisenstein verifiers.
// ---------------------------------------------------------------------

fn exact_rational(n: i64, d: i64) -> ExactReal {
    ExactReal::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// λ = (5 − √13)/4, the critical squared radius for cells at ρᵏ·j.
pub fn lambda_constant() -> ExactReal {
    let s13 = ExactReal::sqrt_rational(&BigRational::from(BigInt::from(13))).unwrap();
    exact_rational(5, 4).sub(&s13.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(4))))
}

/// (3 − √5)/2 = ((√5 − 1)/2)², the critical squared radius for all cells.
pub fn golden_bound_sq() -> ExactReal {
    let s5 = ExactReal::sqrt_rational(&BigRational::from(BigInt::from(5))).unwrap();
    exact_rational(3, 2).sub(&s5.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(2))))
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessCheck {
    pub k: u8,
    pub t: String,
    pub verdict: Verdict,
    /// The translated inverse-cell disk and its required container.
    pub witness_disk: String,
    pub required_container: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm51Report {
    pub condition_a: Verdict,
    pub condition_b: Verdict,
    pub condition_c: Vec<DisjointnessCheck>,
    pub radius_sq: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cor52Report {
    pub clause_a: Verdict,
    pub clause_b: Verdict,
    pub radius_sq: String,
    pub golden_bound_sq: String,
    pub lambda: String,
    pub pass: bool,
}

/// ρᵏ as a ring element of the Eisenstein integers.
fn rho_power(k: i64) -> RingElement {
    let e = RingSpec::eisenstein();
    let rho = RingElement::new(e, 0, 1);
    let mut acc = RingElement::one(e);
    let kk = k.rem_euclid(6);
    for _ in 0..kk {
        acc = acc.mul(&rho);
    }
    acc
}

fn j_element() -> RingElement {
    RingElement::new(RingSpec::eisenstein(), -1, 2)
}

/// The three translates t ∈ {−1+j, j, 1+j} of the disjointness condition.
fn t_set() -> Vec<(String, RingElement)> {
    let e = RingSpec::eisenstein();
    let j = j_element();
    vec![
        ("-1+j".to_string(), j.sub(&RingElement::one(e))),
        ("j".to_string(), j.clone()),
        ("1+j".to_string(), j.add(&RingElement::one(e))),
    ]
}

/// Checks the three hypotheses of the Eisenstein growth theorem for an
/// algorithm described by its per-cell bounding disks:
/// (a) the fundamental set sits in B(0, r) with r < 1;
/// (b) digits of inverted fundamental points exceed 1 in modulus, which
///     the disk bound certifies whenever r < (√5−1)/2;
/// (c) for every k and t ∈ {−1+j, j, 1+j}, the translate
///     ρ⁻ᵏt + (C_f(ρᵏj))⁻¹ stays inside B(0, 1/r), hence misses
///     C_f(ρ⁻ᵏt) ∩ Φ⁻¹.
pub fn verify_thm51(alg: &AlgorithmSpec) -> Result<Thm51Report> {
    if alg.ring != RingSpec::eisenstein() {
        return Err(Error::Precondition(
            "the growth verifiers are proved for the Eisenstein ring only".into(),
        ));
    }
    let r_sq = alg.cell_radius_sq().clone();
    let one = ExactReal::one();

    let condition_a = match r_sq.cmp_exact(&one) {
        Ordering::Less => Verdict::Pass,
        Ordering::Equal => {
            if alg.cells_closed() {
                Verdict::Boundary
            } else {
                Verdict::Pass
            }
        }
        Ordering::Greater => Verdict::Fail,
    };

    let condition_b = {
        let bound = golden_bound_sq();
        match r_sq.cmp_exact(&bound) {
            Ordering::Less => Verdict::Pass,
            Ordering::Equal => Verdict::Boundary,
            Ordering::Greater => Verdict::Fail,
        }
    };

    let mut condition_c = Vec::new();
    let inv_r_sq = r_sq.inv();
    let container = Disk::new(ExactComplex::zero(), inv_r_sq, false);
    for k in 0..6u8 {
        let rho_k = rho_power(k as i64);
        let rho_minus_k = rho_power(-(k as i64));
        let center_cell = rho_k.mul(&j_element());
        let cell_disk = Disk::new(center_cell.embed(), r_sq.clone(), alg.cells_closed());
        let inverted = invert_disk(&cell_disk)?;
        for (t_name, t) in t_set() {
            let shift = rho_minus_k.mul(&t).embed();
            let translated = inverted.translate(&shift);
            let verdict = disk_in_disk(&translated, &container);
            condition_c.push(DisjointnessCheck {
                k,
                t: t_name,
                verdict,
                witness_disk: translated.describe(),
                required_container: container.describe(),
            });
        }
    }

    let pass = condition_a.passed()
        && condition_b.passed()
        && condition_c.iter().all(|c| c.verdict.passed());
    Ok(Thm51Report {
        condition_a,
        condition_b,
        condition_c,
        radius_sq: r_sq.to_string(),
        pass,
    })
}

/// The two disk-radius clauses that imply all three hypotheses above:
/// (a) every cell within B(a, (√5−1)/2), (b) cells at ρᵏj within
/// B(ρᵏj, √λ) with λ = (5−√13)/4. Both balls are open, so equality at
/// the stated radius is reported as a distinct boundary verdict.
pub fn verify_cor52(alg: &AlgorithmSpec) -> Result<Cor52Report> {
    if alg.ring != RingSpec::eisenstein() {
        return Err(Error::Precondition(
            "the growth verifiers are proved for the Eisenstein ring only".into(),
        ));
    }
    let r_sq = alg.cell_radius_sq().clone();
    let golden = golden_bound_sq();
    let lambda = lambda_constant();
    let grade = |bound: &ExactReal| match r_sq.cmp_exact(bound) {
        Ordering::Less => Verdict::Pass,
        Ordering::Equal => Verdict::Boundary,
        Ordering::Greater => Verdict::Fail,
    };
    let clause_a = grade(&golden);
    let clause_b = grade(&lambda);
    Ok(Cor52Report {
        pass: clause_a.passed() && clause_b.passed(),
        clause_a,
        clause_b,
        radius_sq: r_sq.to_string(),
        golden_bound_sq: golden.to_string(),
        lambda: lambda.to_string(),
    })
}

/// Exact verification of the cubic identity behind the λ bound:
/// 4s³ − 22s² + 33s − 9 = (s−3)(4s² − 10s + 3), with roots 3, λ, μ.
pub fn check_growth_polynomial() -> bool {
    // coefficient expansion of (s−3)(4s²−10s+3)
    let lhs: [i64; 4] = [-9, 33, -22, 4];
    let rhs_expanded: [i64; 4] = [-3 * 3, 3 + 30, -10 - 12, 4];
    if lhs != rhs_expanded {
        return false;
    }
    // P(λ) = 0 and P(μ) = 0 exactly in ℚ(√13)
    let eval = |s: &ExactReal| {
        let s2 = s.square();
        let s3 = s2.mul(s);
        s3.mul_rational(&BigRational::from(BigInt::from(4)))
            .sub(&s2.mul_rational(&BigRational::from(BigInt::from(22))))
            .add(&s.mul_rational(&BigRational::from(BigInt::from(33))))
            .sub(&ExactReal::from_rational(BigRational::from(BigInt::from(9))))
    };
    let lambda = lambda_constant();
    let s13 = ExactReal::sqrt_rational(&BigRational::from(BigInt::from(13))).unwrap();
    let mu = exact_rational(5, 4).add(&s13.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(4))));
    if !eval(&lambda).is_zero() || !eval(&mu).is_zero() {
        return false;
    }
    // sign checks off the roots
    let p03 = eval(&exact_rational(3, 10));
    let p31 = eval(&exact_rational(31, 10));
    p03.sign() < 0 && p31.sign() > 0
}

/// The t = j disjointness clause evaluated geometrically at cell radius
/// √r_sq: is B(j − σ·j, σ·r) inside B(0, 1/r) with σ = 1/(3 − r²)?
pub fn t_j_clause_geometric(r_sq: &BigRational) -> bool {
    if !r_sq.is_positive() || r_sq >= &BigRational::from(BigInt::from(3)) {
        return false;
    }
    let r_sq = ExactReal::from_rational(r_sq.clone());
    let sigma = ExactReal::from_rational(BigRational::from(BigInt::from(3)))
        .sub(&r_sq)
        .inv();
    let j = j_element().embed();
    let one_minus_sigma = ExactReal::one().sub(&sigma);
    let center = ExactComplex::new(
        j.re.mul(&one_minus_sigma),
        j.im.mul(&one_minus_sigma),
    );
    let disk = Disk::new(center, sigma.square().mul(&r_sq), true);
    let container = Disk::new(ExactComplex::zero(), r_sq.inv(), false);
    disk_in_disk(&disk, &container).passed()
}

/// Closed form for the same clause: √3·r² + r − √3 < 0, i.e.
/// r < (√13 − 1)/(2√3).
pub fn t_j_clause_closed_form(r_sq: &BigRational) -> bool {
    if !r_sq.is_positive() {
        return false;
    }
    let r = ExactReal::sqrt_rational(r_sq).expect("radius² must be nonnegative");
    let s3 = ExactReal::sqrt_rational(&BigRational::from(BigInt::from(3))).unwrap();
    let val = s3.mul(&r.square()).add(&r).sub(&s3);
    val.sign() < 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_surd::{RootSelector, SurdContext};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn invert_disk_examples() {
        // B(2, 1) → B(2/3, 1/3)
        let d = Disk::new(
            ExactComplex::from_rationals(rat(2, 1), rat(0, 1)),
            ExactReal::one(),
            false,
        );
        let inv = invert_disk(&d).unwrap();
        assert_eq!(inv.center.re.as_rational(), Some(rat(2, 3)));
        assert_eq!(inv.center.im.as_rational(), Some(rat(0, 1)));
        assert_eq!(inv.radius_sq.as_rational(), Some(rat(1, 9)));

        // B(−1, 1) passes through 0
        let bad = Disk::new(
            ExactComplex::from_rationals(rat(-1, 1), rat(0, 1)),
            ExactReal::one(),
            false,
        );
        assert!(matches!(invert_disk(&bad), Err(Error::DiskThroughOrigin)));
    }

    #[test]
    fn invert_disk_lambda_formula() {
        // B(ρᵏj, √λ) → B(conj(ρᵏj)/(3−λ), √λ/(3−λ)) for every k
        let lambda = lambda_constant();
        for k in 0..6i64 {
            let center = rho_power(k).mul(&j_element());
            let d = Disk::new(center.embed(), lambda.clone(), false);
            let inv = invert_disk(&d).unwrap();
            let denom = ExactReal::from_rational(rat(3, 1)).sub(&lambda);
            let expected_center = center.conj().embed();
            let dinv = denom.inv();
            assert_eq!(inv.center.re, expected_center.re.mul(&dinv));
            assert_eq!(inv.center.im, expected_center.im.mul(&dinv));
            assert_eq!(inv.radius_sq, lambda.mul(&dinv).mul(&dinv));
            // numeric cross-check of the radius against √λ/(3−λ)
            let lam = (5.0 - 13f64.sqrt()) / 4.0;
            let approx = inv.radius_sq.to_f64().sqrt();
            assert!((approx - lam.sqrt() / (3.0 - lam)).abs() < 1e-9);
        }
    }

    #[test]
    fn nearest_integer_passes_both_verifiers() {
        let ni = AlgorithmSpec::nearest(RingSpec::eisenstein());
        let cor = verify_cor52(&ni).unwrap();
        assert_eq!(cor.clause_a, Verdict::Pass);
        assert_eq!(cor.clause_b, Verdict::Pass);
        assert!(cor.pass);
        let thm = verify_thm51(&ni).unwrap();
        assert!(thm.pass);
        assert_eq!(thm.condition_c.len(), 18);
        assert!(thm.condition_c.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn declared_radius_cases() {
        let e = RingSpec::eisenstein();
        // cells ⊆ B(v, 0.55): 0.3025 < λ ≈ 0.34861 → pass both verifiers
        let alg = AlgorithmSpec::with_declared_radius(
            e,
            ExactReal::from_rational(rat(3025, 10000)),
            false,
        );
        assert!(verify_cor52(&alg).unwrap().pass);
        assert!(verify_thm51(&alg).unwrap().pass);

        // radius 0.60: 0.36 > λ → clause (b) fails
        let alg = AlgorithmSpec::with_declared_radius(
            e,
            ExactReal::from_rational(rat(36, 100)),
            false,
        );
        let cor = verify_cor52(&alg).unwrap();
        assert_eq!(cor.clause_a, Verdict::Pass);
        assert_eq!(cor.clause_b, Verdict::Fail);

        // radius exactly (√5−1)/2: clause (a) sits on the open boundary
        let alg = AlgorithmSpec::with_declared_radius(e, golden_bound_sq(), false);
        let cor = verify_cor52(&alg).unwrap();
        assert_eq!(cor.clause_a, Verdict::Boundary);

        // radius 0.99: condition (c) fails with a concrete witness
        let alg = AlgorithmSpec::with_declared_radius(
            e,
            ExactReal::from_rational(rat(9801, 10000)),
            false,
        );
        let thm = verify_thm51(&alg).unwrap();
        assert!(!thm.pass);
        let failed: Vec<_> = thm
            .condition_c
            .iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().any(|c| c.t == "j"));
    }

    #[test]
    fn growth_polynomial_identity() {
        assert!(check_growth_polynomial());
    }

    #[test]
    fn sweep_matches_closed_form() {
        // the t=j clause flips exactly at r = (√13−1)/(2√3) ≈ 0.7527
        let mut last_geo = true;
        let mut flip_at = None;
        for i in 1..1000u64 {
            let r = BigRational::new(BigInt::from(i as i64), BigInt::from(1000));
            let r_sq = &r * &r;
            let geo = t_j_clause_geometric(&r_sq);
            let closed = t_j_clause_closed_form(&r_sq);
            assert_eq!(geo, closed, "disagreement at r = {i}/1000");
            if last_geo && !geo {
                flip_at = Some(i);
            }
            last_geo = geo;
        }
        assert_eq!(flip_at, Some(753));
    }

    #[test]
    fn apply_nearest_examples() {
        // Eisenstein nearest at 1.6i → j
        let e = RingSpec::eisenstein();
        let ni = AlgorithmSpec::nearest(e);
        let z = ExactComplex::from_rationals(rat(0, 1), rat(8, 5));
        let d = ni.apply_exact(&z).unwrap();
        assert_eq!(d.value, j_element());
        assert!(!d.tie_broken);

        // Gaussian tie at 0.5+0.5i resolves to 0 under lex-min
        let g = RingSpec::gaussian();
        let ni = AlgorithmSpec::nearest(g);
        let z = ExactComplex::from_rationals(rat(1, 2), rat(1, 2));
        let d = ni.apply_exact(&z).unwrap();
        assert_eq!(d.value, RingElement::zero(g));
        assert!(d.tie_broken);
    }

    #[test]
    fn apply_surd_digits() {
        // z = i√2: nearest Gaussian digit is i
        let g = RingSpec::gaussian();
        let ctx = SurdContext::new(
            g,
            RingElement::one(g),
            RingElement::zero(g),
            RingElement::new(g, 2, 0),
            RootSelector::PosIm,
        )
        .unwrap();
        let z = SurdElement::generator(&ctx);
        let ni = AlgorithmSpec::nearest(g);
        let d = ni.apply_surd(&z).unwrap();
        assert_eq!(d.value, RingElement::new(g, 0, 1));
    }

    fn quadrant_partition() -> PartitionSpec {
        // split the base parallelogram at s = 1/2 and t = 1/2
        let hp = |a: &str, b: &str, c: &str| CellConstraint::Halfplane {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        PartitionSpec {
            cells: vec![
                PartitionCell {
                    vertex: (0, 0),
                    constraints: vec![hp("1", "0", "1/2"), hp("0", "1", "1/2")],
                    radius_sq: None,
                },
                PartitionCell {
                    vertex: (1, 0),
                    constraints: vec![hp("-1", "0", "-1/2"), hp("0", "1", "1/2")],
                    radius_sq: None,
                },
                PartitionCell {
                    vertex: (0, 1),
                    constraints: vec![hp("1", "0", "1/2"), hp("0", "-1", "-1/2")],
                    radius_sq: None,
                },
                PartitionCell {
                    vertex: (1, 1),
                    constraints: vec![hp("-1", "0", "-1/2"), hp("0", "-1", "-1/2")],
                    radius_sq: None,
                },
            ],
        }
    }

    #[test]
    fn partition_digits_and_radius() {
        let p = quadrant_partition();
        let alg = AlgorithmSpec::partition(p).unwrap();
        // quadrant circumradius about a vertex is |½ + ½ρ| = √3/2
        assert_eq!(
            alg.cell_radius_sq().as_rational(),
            Some(rat(3, 4))
        );
        // a point in the (0,0) quadrant maps to the tile base
        let z = ExactComplex::from_rationals(rat(1, 5), rat(1, 10));
        let d = alg.apply_exact(&z).unwrap();
        assert_eq!(d.value, RingElement::zero(RingSpec::eisenstein()));
        // a point in the upper quadrant of the tile at 2 maps to 2 + 1 + ρ
        // (ρ-coordinates s ≈ 0.8, t ≈ 0.9 inside tile (2,0))
        let s = rat(28, 10);
        let t = rat(9, 10);
        // convert (s,t) to cartesian: z = s + t·ρ
        let rho = RingElement::new(RingSpec::eisenstein(), 0, 1).embed();
        let z = ExactComplex::new(
            ExactReal::from_rational(s.clone()).add(&rho.re.mul_rational(&t)),
            rho.im.mul_rational(&t),
        );
        let d = alg.apply_exact(&z).unwrap();
        assert_eq!(d.value, RingElement::new(RingSpec::eisenstein(), 3, 1));
    }

    #[test]
    fn partition_file_round_trip() {
        let p = quadrant_partition();
        let json = serde_json::to_string(&p).unwrap();
        let back: PartitionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.cells.len(), 4);
        assert!(AlgorithmSpec::partition(back).is_ok());
    }

    #[test]
    fn fundamental_set_within_one_property() {
        // |z − f(z)| ≤ covering radius ≤ 1 on pseudo-random rational points
        let mut seed = 4242u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 8001) as i64 - 4000
        };
        for ring in [RingSpec::gaussian(), RingSpec::eisenstein(), RingSpec::Half(11)] {
            let ni = AlgorithmSpec::nearest(ring);
            let cov = ring.covering_radius_sq();
            for _ in 0..60 {
                let z = ExactComplex::from_rationals(rat(next(), 1000), rat(next(), 1000));
                let d = ni.apply_exact(&z).unwrap();
                let dist = z.sub(&d.value.embed()).norm_sq();
                assert!(dist.cmp_rational(&cov).is_le());
                assert!(dist.cmp_rational(&rat(1, 1)).is_le());
            }
        }
    }
}
