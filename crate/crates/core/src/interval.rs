//! Rational interval arithmetic.
//!
//! Endpoints are exact rationals, so +, −, ×, ÷ are containment-correct
//! with no rounding step. `round_out` coarsens endpoints to a dyadic grid
//! to keep representations small along long computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let candidates = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        if r.is_negative() {
            RatInterval { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            RatInterval { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    pub fn square(&self) -> Self {
        if !self.lo.is_negative() {
            RatInterval { lo: &self.lo * &self.lo, hi: &self.hi * &self.hi }
        } else if !self.hi.is_positive() {
            RatInterval { lo: &self.hi * &self.hi, hi: &self.lo * &self.lo }
        } else {
            let l2 = &self.lo * &self.lo;
            let h2 = &self.hi * &self.hi;
            RatInterval { lo: BigRational::zero(), hi: l2.max(h2) }
        }
    }

    /// Reciprocal; requires the interval to exclude zero.
    pub fn recip(&self) -> Self {
        assert!(
            !self.contains_zero(),
            "reciprocal of an interval containing zero"
        );
        RatInterval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn hull(&self, o: &Self) -> Self {
        RatInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Widens endpoints outward onto the grid of multiples of `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Self {
        RatInterval {
            lo: dyadic_floor(&self.lo, bits),
            hi: dyadic_ceil(&self.hi, bits),
        }
    }
}

pub(crate) fn dyadic_floor(r: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << (bits as u64);
    let scaled = r * BigRational::from(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

pub(crate) fn dyadic_ceil(r: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << (bits as u64);
    let scaled = r * BigRational::from(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// Axis-aligned rectangle in ℂ with rational corners; all arithmetic is
/// containment-correct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl ComplexBox {
    pub fn new(re: RatInterval, im: RatInterval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(re: BigRational, im: BigRational) -> Self {
        ComplexBox { re: RatInterval::point(re), im: RatInterval::point(im) }
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn width(&self) -> BigRational {
        self.re.width().max(self.im.width())
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexBox { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexBox { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        ComplexBox { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexBox {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBox { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn abs_sq(&self) -> RatInterval {
        self.re.square().add(&self.im.square())
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_box(&self, o: &Self) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    /// Reciprocal image box; requires `|z|² > 0` over the whole box.
    pub fn recip(&self) -> Self {
        let n = self.abs_sq();
        assert!(
            n.lo().is_positive(),
            "reciprocal of a complex box that may contain zero"
        );
        let ninv = n.recip();
        ComplexBox {
            re: self.re.mul(&ninv),
            im: self.im.neg().mul(&ninv),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn round_out(&self, bits: u32) -> Self {
        ComplexBox { re: self.re.round_out(bits), im: self.im.round_out(bits) }
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        let two = BigRational::from(BigInt::from(2));
        ((self.re.lo() + self.re.hi()) / &two, (self.im.lo() + self.im.hi()) / &two)
    }
}

/// Wire form of a box: `[re_lo, re_hi, im_lo, im_hi]` as exact strings.
#[derive(Serialize, Deserialize)]
pub(crate) struct BoxRepr(pub [String; 4]);

impl From<&ComplexBox> for BoxRepr {
    fn from(b: &ComplexBox) -> Self {
        BoxRepr([
            ratio_string(b.re.lo()),
            ratio_string(b.re.hi()),
            ratio_string(b.im.lo()),
            ratio_string(b.im.hi()),
        ])
    }
}

impl BoxRepr {
    pub fn to_box(&self) -> Result<ComplexBox, String> {
        let vals: Vec<BigRational> = self
            .0
            .iter()
            .map(|s| crate::real::parse_ratio(s))
            .collect::<Result<_, _>>()?;
        if vals[0] > vals[1] || vals[2] > vals[3] {
            return Err("bracket endpoints out of order".into());
        }
        Ok(ComplexBox::new(
            RatInterval::new(vals[0].clone(), vals[1].clone()),
            RatInterval::new(vals[2].clone(), vals[3].clone()),
        ))
    }
}

pub(crate) fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn multiplication_bounds() {
        let a = RatInterval::new(rat(-1, 2), rat(3, 1));
        let b = RatInterval::new(rat(-2, 1), rat(1, 3));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &rat(-6, 1));
        assert_eq!(p.hi(), &rat(1, 1));
    }

    #[test]
    fn box_reciprocal_contains_inverse() {
        // 1/(2+i) = (2−i)/5
        let b = ComplexBox::point(rat(2, 1), rat(1, 1));
        let inv = b.recip();
        assert!(inv.contains_point(&rat(2, 5), &rat(-1, 5)));
        assert!(inv.is_point());
    }

    #[test]
    fn round_out_widens() {
        let v = RatInterval::point(rat(1, 3));
        let r = v.round_out(8);
        assert!(r.lo() <= &rat(1, 3) && &rat(1, 3) <= r.hi());
        assert!(r.width() <= rat(1, 128));
    }

    #[test]
    fn square_straddling_zero() {
        let v = RatInterval::new(rat(-2, 1), rat(1, 1));
        let s = v.square();
        assert_eq!(s.lo(), &rat(0, 1));
        assert_eq!(s.hi(), &rat(4, 1));
    }
}
