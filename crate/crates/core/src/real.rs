//! Exact real scalars of the form `Σ cᵢ·√nᵢ` with rational `cᵢ` and
//! squarefree `nᵢ`.
//!
//! Every comparison the engine makes against an irrational constant
//! (covering radii, `r/(1-r)` error constants, the `λ = (5-√13)/4` disk
//! radius, the §6 growth bounds) lands in this family, which is closed
//! under field operations and has a decidable sign. Square roots of
//! distinct squarefree integers are linearly independent over ℚ, so the
//! term map is a canonical form: structural equality is value equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::RatInterval;

/// Exact element of the ℚ-vector space spanned by square roots of
/// squarefree positive integers. The key `1` holds the rational part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    terms: BTreeMap<BigUint, BigRational>,
}

/// Splits `n` as `s²·f` with `f` squarefree; returns `(s, f)`.
pub fn squarefree_part(n: &BigUint) -> (BigUint, BigUint) {
    let one = BigUint::one();
    if n.is_zero() || *n == one {
        return (one.clone(), n.clone());
    }
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut rem = n.clone();
    let mut p = BigUint::from(2u32);
    // Trial-divide to the cube root; the cofactor then has at most two
    // prime factors, so it is squarefree unless it is a perfect square.
    let bound = rem.cbrt();
    while p <= bound && p.clone() * p.clone() <= rem {
        if (&rem % &p).is_zero() {
            let mut mult = 0u32;
            while (&rem % &p).is_zero() {
                rem /= &p;
                mult += 1;
            }
            for _ in 0..mult / 2 {
                square *= &p;
            }
            if mult % 2 == 1 {
                free *= &p;
            }
        }
        p += 1u32;
    }
    if !rem.is_one() {
        let s = rem.sqrt();
        if &s * &s == rem {
            square *= s;
        } else {
            free *= rem;
        }
    }
    (square, free)
}

/// `true` iff `r ≥ 0` and both numerator and denominator of the reduced
/// form are perfect squares; returns the exact rational square root.
pub fn rational_sqrt_exact(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == *num && &sd * &sd == *den {
        Some(BigRational::new(
            BigInt::from(sn),
            BigInt::from(sd),
        ))
    } else {
        None
    }
}

/// Dyadic enclosure of `√r` (`r ≥ 0`) with width `≤ 2^-bits`.
pub fn sqrt_interval(r: &BigRational, bits: u32) -> RatInterval {
    assert!(!r.is_negative(), "sqrt_interval of a negative rational");
    if r.is_zero() {
        return RatInterval::point(BigRational::zero());
    }
    // √(p/q) = √(p·q)/q; floor-isqrt of p·q·4^bits gives the bracket.
    let p = r.numer().magnitude().clone();
    let q = r.denom().magnitude().clone();
    let scaled = &p * &q << (2 * bits as u64);
    let s = scaled.sqrt();
    let den = BigInt::from(q) << (bits as u64);
    let lo = BigRational::new(BigInt::from(s.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(s + 1u32), den);
    RatInterval::new(lo, hi)
}

impl ExactReal {
    pub fn zero() -> Self {
        ExactReal { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(BigUint::one(), r);
        }
        ExactReal { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `(p/q)·√d`, reducing `d` to its squarefree part.
    pub fn sqrt_term(coeff: BigRational, d: &BigUint) -> Self {
        if coeff.is_zero() || d.is_zero() {
            return Self::zero();
        }
        let (square, free) = squarefree_part(d);
        let c = coeff * BigRational::from(BigInt::from(square));
        let mut terms = BTreeMap::new();
        terms.insert(free, c);
        ExactReal { terms }
    }

    /// `√r` for rational `r ≥ 0`, exact; `None` if `r < 0`.
    pub fn sqrt_rational(r: &BigRational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::zero());
        }
        // √(p/q) = √(p·q)/q
        let pq = r.numer().magnitude() * r.denom().magnitude();
        let coeff = BigRational::new(BigInt::one(), r.denom().clone());
        Some(Self::sqrt_term(coeff, &pq))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational part, i.e. the coefficient of `√1`.
    pub fn rational_part(&self) -> BigRational {
        self.terms
            .get(&BigUint::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `Some(r)` iff the value is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    fn insert_term(terms: &mut BTreeMap<BigUint, BigRational>, key: BigUint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            Self::insert_term(&mut terms, k.clone(), c.clone());
        }
        ExactReal { terms }
    }

    pub fn neg(&self) -> Self {
        ExactReal {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (m, cm) in &self.terms {
            for (n, cn) in &other.terms {
                // √m·√n = g·√(m'·n') with g = gcd(m,n); the product of the
                // coprime squarefree cofactors is squarefree.
                let g = m.gcd(n);
                let key = (m / &g) * (n / &g);
                let c = cm * cn * BigRational::from(BigInt::from(g));
                Self::insert_term(&mut terms, key, c);
            }
        }
        ExactReal { terms }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        ExactReal {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * r))
                .collect(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero ExactReal");
        match self.split_largest_prime() {
            None => Self::from_rational(self.rational_part().recip()),
            Some((p, a, b)) => {
                // S = A + √p·B  ⇒  1/S = (A − √p·B) / (A² − p·B²),
                // and the denominator lives in the subfield without p.
                let sp = Self::sqrt_term(BigRational::one(), &p);
                let denom = a.square().sub(&b.square().mul_rational(
                    &BigRational::from(BigInt::from(p.clone())),
                ));
                let num = a.sub(&sp.mul(&b));
                num.mul(&denom.inv())
            }
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Splits `self = A + √p·B` on the largest prime `p` occurring in any
    /// radicand; `None` when the value is rational.
    fn split_largest_prime(&self) -> Option<(BigUint, ExactReal, ExactReal)> {
        let one = BigUint::one();
        let mut largest: Option<BigUint> = None;
        for k in self.terms.keys() {
            if *k == one {
                continue;
            }
            let p = largest_prime_factor(k);
            largest = Some(match largest {
                None => p,
                Some(q) => q.max(p),
            });
        }
        let p = largest?;
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (k, c) in &self.terms {
            if (k % &p).is_zero() {
                Self::insert_term(&mut b, k / &p, c.clone());
            } else {
                Self::insert_term(&mut a, k.clone(), c.clone());
            }
        }
        Some((p, ExactReal { terms: a }, ExactReal { terms: b }))
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i32 {
        match self.split_largest_prime() {
            None => {
                let r = self.rational_part();
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Some((p, a, b)) => {
                let sa = a.sign();
                let sb = b.sign();
                if sa == 0 {
                    return sb;
                }
                if sb == 0 {
                    return sa;
                }
                if sa == sb {
                    return sa;
                }
                // A and √p·B have opposite signs; compare magnitudes via
                // A² − p·B², which lives in the subfield without p.
                let diff = a.square().sub(
                    &b.square()
                        .mul_rational(&BigRational::from(BigInt::from(p))),
                );
                match diff.sign() {
                    0 => 0,
                    s if s > 0 => sa,
                    _ => sb,
                }
            }
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp_exact(&Self::from_rational(r.clone()))
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact square root when the value stays inside the family:
    /// works for `r ≥ 0` rational and for `c·√d ≥ 0` pure terms.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.sign() < 0 {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Self::sqrt_rational(&r);
        }
        None
    }

    /// Containment-correct dyadic enclosure with width shrinking in `bits`.
    pub fn to_interval(&self, bits: u32) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for (k, c) in &self.terms {
            let root = if k.is_one() {
                RatInterval::point(BigRational::one())
            } else {
                sqrt_interval(&BigRational::from(BigInt::from(k.clone())), bits)
            };
            acc = acc.add(&root.mul_rational(c));
        }
        acc
    }

    /// Approximate value for display purposes only.
    pub fn to_f64(&self) -> f64 {
        let iv = self.to_interval(80);
        let mid = (iv.lo() + iv.hi()) / BigRational::from(BigInt::from(2));
        rational_to_f64(&mid)
    }
}

/// Compares √A + √B against √C exactly, given the squares A, B, C ≥ 0;
/// everything reduces to signs of elements of the multi-radical field.
pub fn cmp_sqrt_sum(a_sq: &ExactReal, b_sq: &ExactReal, c_sq: &ExactReal) -> Ordering {
    let lhs_minus = a_sq.add(b_sq).sub(c_sq);
    if lhs_minus.sign() > 0 {
        return Ordering::Greater;
    }
    // a + b ≤ c: the comparison reduces to 4ab vs (c−a−b)²
    let four_ab = a_sq
        .mul(b_sq)
        .mul_rational(&BigRational::from(BigInt::from(4)));
    four_ab.cmp_exact(&lhs_minus.square())
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Scale down in tandem to stay within f64 range for large operands.
    let nb = num.bits().max(den.bits());
    if nb > 900 {
        let shift = nb - 900;
        let n2 = num >> shift;
        let d2 = den >> shift;
        return to_f64_lossy(&n2) / to_f64_lossy(&d2);
    }
    to_f64_lossy(num) / to_f64_lossy(den)
}

fn to_f64_lossy(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

fn largest_prime_factor(n: &BigUint) -> BigUint {
    let mut rem = n.clone();
    let mut best = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rem {
        if (&rem % &p).is_zero() {
            best = p.clone();
            while (&rem % &p).is_zero() {
                rem /= &p;
            }
        }
        p += 1u32;
    }
    if !rem.is_one() {
        best = rem;
    }
    best
}

impl fmt::Display for ExactReal {
    /// Serialized as `p/q`, `r/s*sqrt(d)`, or sums like `p/q+r/s*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if k.is_one() {
                write!(f, "{}", fmt_ratio(&mag))?;
            } else {
                write!(f, "{}*sqrt({})", fmt_ratio(&mag), k)?;
            }
        }
        Ok(())
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `Display` format back: terms `p/q` or `p/q*sqrt(d)`
/// joined by `+`/`-`.
impl FromStr for ExactReal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty exact-real literal".into());
        }
        let mut out = ExactReal::zero();
        let mut term = String::new();
        let mut chars = s.chars().peekable();
        let mut terms: Vec<String> = Vec::new();
        while let Some(ch) = chars.next() {
            if (ch == '+' || ch == '-') && !term.trim().is_empty() {
                terms.push(term.clone());
                term = String::new();
                if ch == '-' {
                    term.push('-');
                }
            } else {
                term.push(ch);
            }
        }
        if !term.trim().is_empty() {
            terms.push(term);
        }
        for t in terms {
            let t = t.trim();
            let (coeff_str, rad) = match t.find("*sqrt(") {
                Some(i) => {
                    let close = t
                        .rfind(')')
                        .ok_or_else(|| format!("unclosed sqrt in `{t}`"))?;
                    (&t[..i], Some(&t[i + 6..close]))
                }
                None => (t, None),
            };
            let coeff = parse_ratio(coeff_str)?;
            match rad {
                None => out = out.add(&ExactReal::from_rational(coeff)),
                Some(d) => {
                    let d: BigUint = d
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad radicand in `{t}`"))?;
                    out = out.add(&ExactReal::sqrt_term(coeff, &d));
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator `{s}`"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator `{s}`"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
            Ok(BigRational::from(n))
        }
    }
}

/// Exact complex number with `ExactReal` coordinates. Closed under field
/// operations; this is the value domain for numeric-mode iteration with
/// exact rational inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: ExactReal,
    pub im: ExactReal,
}

impl ExactComplex {
    pub fn new(re: ExactReal, im: ExactReal) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex { re: ExactReal::zero(), im: ExactReal::zero() }
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        ExactComplex {
            re: ExactReal::from_rational(re),
            im: ExactReal::from_rational(im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ExactComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExactComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        ExactComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExactComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sq(&self) -> ExactReal {
        self.re.square().add(&self.im.square())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero ExactComplex");
        let ninv = n.inv();
        ExactComplex {
            re: self.re.mul(&ninv),
            im: self.im.neg().mul(&ninv),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn to_box(&self, bits: u32) -> crate::interval::ComplexBox {
        crate::interval::ComplexBox::new(self.re.to_interval(bits), self.im.to_interval(bits))
    }

    /// Exact membership test against a rational box.
    pub fn in_box(&self, b: &crate::interval::ComplexBox) -> bool {
        self.re.cmp_rational(b.re.lo()).is_ge()
            && self.re.cmp_rational(b.re.hi()).is_le()
            && self.im.cmp_rational(b.im.lo()).is_ge()
            && self.im.cmp_rational(b.im.hi()).is_le()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sqrt_of(n: u64) -> ExactReal {
        ExactReal::sqrt_term(BigRational::one(), &BigUint::from(n))
    }

    #[test]
    fn squarefree_extraction() {
        let (s, f) = squarefree_part(&BigUint::from(72u32));
        assert_eq!(s, BigUint::from(6u32));
        assert_eq!(f, BigUint::from(2u32));
        let (s, f) = squarefree_part(&BigUint::from(39u32));
        assert_eq!(s, BigUint::from(1u32));
        assert_eq!(f, BigUint::from(39u32));
        // cofactor above the trial bound that is a perfect square
        let big = BigUint::from(1009u32 * 1009u32);
        let (s, f) = squarefree_part(&big);
        assert_eq!(s, BigUint::from(1009u32));
        assert_eq!(f, BigUint::from(1u32));
    }

    #[test]
    fn sqrt_products_reduce() {
        let s3 = sqrt_of(3);
        let s13 = sqrt_of(13);
        let s39 = s3.mul(&s13);
        assert_eq!(s39, sqrt_of(39));
        // √39·√39 = 39
        assert_eq!(s39.mul(&s39).as_rational(), Some(rat(39, 1)));
        // √8 = 2√2
        let s8 = ExactReal::sqrt_rational(&rat(8, 1)).unwrap();
        assert_eq!(s8, sqrt_of(2).mul_rational(&rat(2, 1)));
    }

    #[test]
    fn sign_mixed_terms() {
        // √2 + √3 ≈ 3.146 < √13 ≈ 3.606
        let v = sqrt_of(2).add(&sqrt_of(3)).sub(&sqrt_of(13));
        assert_eq!(v.sign(), -1);
        // 2√2 − √3 − 1 > 0  (2.828 − 1.732 − 1 ≈ 0.096)
        let v = sqrt_of(2)
            .mul_rational(&rat(2, 1))
            .sub(&sqrt_of(3))
            .sub(&ExactReal::one());
        assert_eq!(v.sign(), 1);
        // exact cancellation: √12 − 2√3 = 0
        let v = ExactReal::sqrt_rational(&rat(12, 1)).unwrap().sub(&sqrt_of(3).mul_rational(&rat(2, 1)));
        assert_eq!(v.sign(), 0);
        assert!(v.is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let v = sqrt_of(3)
            .mul_rational(&rat(2, 5))
            .add(&ExactReal::from_rational(rat(-1, 3)))
            .add(&sqrt_of(13).mul_rational(&rat(1, 7)));
        let w = v.inv();
        assert_eq!(v.mul(&w), ExactReal::one());
    }

    #[test]
    fn interval_contains_value() {
        // (5−√13)/4 ≈ 0.34861
        let lambda = ExactReal::from_rational(rat(5, 4))
            .sub(&sqrt_of(13).mul_rational(&rat(1, 4)));
        let iv = lambda.to_interval(64);
        assert!(iv.lo() < &rat(34862, 100000));
        assert!(iv.hi() > &rat(34861, 100000));
        assert!(lambda.is_positive());
        // and 1/3 < λ, which drives the nearest-integer verification
        assert_eq!(lambda.cmp_rational(&rat(1, 3)), Ordering::Greater);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let v = ExactReal::from_rational(rat(-1, 2))
            .add(&sqrt_of(3).mul_rational(&rat(5, 7)));
        let s = v.to_string();
        assert_eq!(s, "-1/2+5/7*sqrt(3)");
        let back: ExactReal = s.parse().unwrap();
        assert_eq!(back, v);
        let r: ExactReal = "3/4".parse().unwrap();
        assert_eq!(r.as_rational(), Some(rat(3, 4)));
    }

    #[test]
    fn complex_inverse() {
        // 1/(1+i√3) = (1−i√3)/4
        let z = ExactComplex::new(ExactReal::one(), sqrt_of(3));
        let w = z.inv();
        assert_eq!(w.re, ExactReal::from_rational(rat(1, 4)));
        assert_eq!(w.im, sqrt_of(3).mul_rational(&rat(-1, 4)));
        assert_eq!(z.mul(&w), ExactComplex::new(ExactReal::one(), ExactReal::zero()));
    }

    #[test]
    fn sqrt_interval_brackets() {
        let iv = sqrt_interval(&rat(2, 1), 100);
        let two = rat(2, 1);
        assert!(iv.lo() * iv.lo() <= two);
        assert!(iv.hi() * iv.hi() >= two);
        assert!(iv.width() <= rat(1, 1) / BigRational::from(BigInt::from(2).pow(100u32)));
    }
}
