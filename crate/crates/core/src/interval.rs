//! Outward-rounded interval arithmetic on dyadic rationals.
//!
//! Endpoints live on the grid `2^-bits`: every operation rounds its lower
//! endpoint down and its upper endpoint up, so the true value of the
//! evaluated expression always lies inside the result. Exact rational points
//! may be carried unrounded until the first operation touches them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_int, floor_int, render_decimal, Rational, Rounding};
use crate::verdict::Verdict;

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_PRECISION_CAP_BITS: u32 = 2048;

/// Starting precision and cap for comparisons that may need to tighten.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start_bits: DEFAULT_PRECISION_BITS,
            cap_bits: DEFAULT_PRECISION_CAP_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, cap_bits: u32) -> Result<Self> {
        if start_bits == 0 || start_bits > cap_bits {
            return Err(Error::InvalidParams(format!(
                "precision must satisfy 0 < start ({start_bits}) <= cap ({cap_bits})"
            )));
        }
        Ok(Self {
            start_bits,
            cap_bits,
        })
    }

    /// `start, 2 start, 4 start, ...`, ending exactly at the cap.
    pub fn ladder(&self) -> Vec<u32> {
        let mut steps = Vec::new();
        let mut bits = self.start_bits;
        loop {
            steps.push(bits);
            if bits >= self.cap_bits {
                break;
            }
            bits = bits.saturating_mul(2).min(self.cap_bits);
        }
        steps
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Largest multiple of `2^-bits` not above `q`.
pub fn round_down(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(floor_int(&scaled), scale)
}

/// Smallest multiple of `2^-bits` not below `q`.
pub fn round_up(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(ceil_int(&scaled), scale)
}

/// A closed interval `[lo, hi]` guaranteed to contain the value it encloses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbInterval {
    lo: Rational,
    hi: Rational,
    precision_bits: u32,
}

impl ProbInterval {
    /// Degenerate interval holding an exact rational.
    pub fn point(value: Rational, precision_bits: u32) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
            precision_bits,
        }
    }

    pub fn from_i64(value: i64, precision_bits: u32) -> Self {
        Self::point(Rational::from_integer(BigInt::from(value)), precision_bits)
    }

    /// Builds `[lo, hi]` rounded outward to the grid.
    pub fn new(lo: &Rational, hi: &Rational, precision_bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParams(format!(
                "interval endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Self::rounded(lo, hi, precision_bits))
    }

    fn rounded(lo: &Rational, hi: &Rational, precision_bits: u32) -> Self {
        Self {
            lo: round_down(lo, precision_bits),
            hi: round_up(hi, precision_bits),
            precision_bits,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, other: &ProbInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Whether `self` lies inside `other`.
    pub fn is_within(&self, other: &ProbInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn bits_with(&self, other: &ProbInterval) -> u32 {
        self.precision_bits.max(other.precision_bits)
    }

    pub fn add(&self, other: &ProbInterval) -> ProbInterval {
        let bits = self.bits_with(other);
        Self::rounded(&(&self.lo + &other.lo), &(&self.hi + &other.hi), bits)
    }

    pub fn sub(&self, other: &ProbInterval) -> ProbInterval {
        let bits = self.bits_with(other);
        Self::rounded(&(&self.lo - &other.hi), &(&self.hi - &other.lo), bits)
    }

    pub fn neg(&self) -> ProbInterval {
        Self {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &ProbInterval) -> ProbInterval {
        let bits = self.bits_with(other);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products");
        let hi = products.iter().max().expect("four products");
        Self::rounded(lo, hi, bits)
    }

    pub fn scale(&self, factor: &Rational) -> ProbInterval {
        self.mul(&ProbInterval::point(factor.clone(), self.precision_bits))
    }

    pub fn recip(&self) -> Result<ProbInterval> {
        if self.lo <= Rational::zero() && self.hi >= Rational::zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rounded(
            &self.hi.recip(),
            &self.lo.recip(),
            self.precision_bits,
        ))
    }

    pub fn div(&self, other: &ProbInterval) -> Result<ProbInterval> {
        if other.lo <= Rational::zero() && other.hi >= Rational::zero() {
            return Err(Error::DivisionByZero);
        }
        let bits = self.bits_with(other);
        let quotients = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = quotients.iter().min().expect("four quotients");
        let hi = quotients.iter().max().expect("four quotients");
        Ok(Self::rounded(lo, hi, bits))
    }

    pub fn sqrt(&self) -> Result<ProbInterval> {
        interval_sqrt(self)
    }

    /// Integer power by repeated squaring, for intervals with `lo >= 0`.
    pub fn powi(&self, mut exp: u64) -> ProbInterval {
        debug_assert!(self.lo >= Rational::zero());
        let mut base = self.clone();
        let mut acc = ProbInterval::from_i64(1, self.precision_bits);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Re-rounds to a (coarser) grid, widening outward.
    pub fn with_precision(&self, bits: u32) -> ProbInterval {
        Self::rounded(&self.lo, &self.hi, bits)
    }

    /// `lo..hi`, each endpoint rounded outward to `digits` significant digits.
    pub fn render(&self, digits: u32) -> String {
        format!(
            "{}..{}",
            render_decimal(&self.lo, digits, Rounding::Down),
            render_decimal(&self.hi, digits, Rounding::Up)
        )
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render(20))
    }
}

fn isqrt_floor(x: &BigInt) -> BigInt {
    x.sqrt()
}

fn isqrt_ceil(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &(&s * &s) == x {
        s
    } else {
        s + 1
    }
}

/// Square root with the lower endpoint rounded down and the upper rounded up.
///
/// Endpoints that are squares of grid points come out exact.
pub fn interval_sqrt(x: &ProbInterval) -> Result<ProbInterval> {
    if x.lo.is_negative() {
        return Err(Error::NegativeSqrt);
    }
    let bits = x.precision_bits;
    let scale = Rational::from_integer(pow2(2 * bits));
    let lo_scaled = floor_int(&(&x.lo * &scale));
    let hi_scaled = ceil_int(&(&x.hi * &scale));
    let grid = pow2(bits);
    Ok(ProbInterval {
        lo: Rational::new(isqrt_floor(&lo_scaled), grid.clone()),
        hi: Rational::new(isqrt_ceil(&hi_scaled), grid),
        precision_bits: bits,
    })
}

/// `e^r` for rational `0 <= r <= 1` by the Taylor series with a Lagrange
/// remainder bound `3 r^N / N!`.
fn exp_unit(r: &Rational, bits: u32) -> ProbInterval {
    if r.is_zero() {
        return ProbInterval::from_i64(1, bits);
    }
    debug_assert!(r.is_positive() && r <= &Rational::one());
    // N! >= 3 * 2^(bits + 2) makes the remainder at most a quarter ulp.
    let target = BigInt::from(3) << (bits as usize + 2);
    let mut terms: u64 = 1;
    let mut fact = BigInt::one();
    while fact < target {
        terms += 1;
        fact *= terms;
    }
    // terms = N, fact = N!
    let a = r.numer();
    let b = r.denom();
    // T_j = a^j b^(N-1-j) (N-1)!/j!, so sum_{j<N} r^j/j! = sum T_j / (b^(N-1) (N-1)!)
    let n_minus_1 = terms - 1;
    let fact_nm1 = &fact / BigInt::from(terms);
    let mut t: BigInt = Pow::pow(b, n_minus_1) * &fact_nm1;
    let denom = t.clone();
    let mut total = t.clone();
    for j in 0..n_minus_1 {
        t = t * a / (b * BigInt::from(j + 1));
        total += &t;
    }
    let partial = Rational::new(total, denom);
    let remainder = Rational::new(
        BigInt::from(3) * Pow::pow(a, terms),
        Pow::pow(b, terms) * fact,
    );
    ProbInterval::rounded(&partial, &(&partial + remainder), bits)
}

/// Enclosure of `e^x` for rational `x`, on the `2^-bits` grid.
pub fn interval_exp(x: &Rational, bits: u32) -> ProbInterval {
    if x.is_zero() {
        return ProbInterval::from_i64(1, bits);
    }
    if x.is_negative() {
        // e^-|x| = 1 / e^|x|, with e^|x| >= 1 so the reciprocal loses nothing.
        let pos = interval_exp(&-x.clone(), bits + 4);
        return pos.recip().expect("e^x is positive").with_precision(bits);
    }
    let whole = floor_int(x);
    let frac = x - Rational::from_integer(whole.clone());
    let whole = whole.to_u64().expect("exponent too large");
    // e^x carries about 1.45 x integer bits; keep that many extra fractional bits.
    let magnitude = (whole as f64 * std::f64::consts::LOG2_E).ceil() as u32;
    let guard = 64 - (whole + 1).leading_zeros();
    let wp = bits + magnitude + 2 * guard + 16;
    let mut result = exp_unit(&frac, wp);
    if whole > 0 {
        let e = exp_unit(&Rational::one(), wp);
        result = result.mul(&e.powi(whole));
    }
    result.with_precision(bits)
}

/// Decides `left <= right` (or `<` when `strict`) from enclosures.
///
/// `Some(true)` when every point of `left` satisfies the relation against
/// every point of `right`, `Some(false)` when none does, `None` otherwise.
pub fn decide_le(left: &ProbInterval, right: &ProbInterval, strict: bool) -> Option<bool> {
    if strict {
        if left.hi < right.lo {
            Some(true)
        } else if left.lo >= right.hi {
            Some(false)
        } else {
            None
        }
    } else if left.hi <= right.lo {
        Some(true)
    } else if left.lo > right.hi {
        Some(false)
    } else {
        None
    }
}

/// Compares an exact rational against an enclosure: `Less` if it lies below
/// `lo`, `Greater` above `hi`, `None` if inside.
pub fn locate(x: &Rational, iv: &ProbInterval) -> Option<Ordering> {
    if x < &iv.lo {
        Some(Ordering::Less)
    } else if x > &iv.hi {
        Some(Ordering::Greater)
    } else if iv.is_point() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

/// Result of a precision-escalated decision.
#[derive(Debug, Clone)]
pub struct Escalated<T> {
    pub verdict: Verdict,
    pub bits: u32,
    pub value: T,
}

/// Runs `attempt` at each rung of the precision ladder until it returns a
/// decision; the cap without a decision gives `Inconclusive`.
pub fn escalate<T>(
    policy: &PrecisionPolicy,
    mut attempt: impl FnMut(u32) -> Result<(Option<bool>, T)>,
) -> Result<Escalated<T>> {
    let ladder = policy.ladder();
    let last = ladder.len() - 1;
    for (i, bits) in ladder.into_iter().enumerate() {
        let (decision, value) = attempt(bits)?;
        if decision.is_some() || i == last {
            return Ok(Escalated {
                verdict: Verdict::from_decision(decision),
                bits,
                value,
            });
        }
    }
    unreachable!("ladder is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse_rational, rat};

    fn p(v: i64) -> ProbInterval {
        ProbInterval::from_i64(v, 128)
    }

    #[test]
    fn ladder_doubles_to_cap() {
        assert_eq!(
            PrecisionPolicy::default().ladder(),
            vec![128, 256, 512, 1024, 2048]
        );
        assert_eq!(
            PrecisionPolicy::new(100, 300).unwrap().ladder(),
            vec![100, 200, 300]
        );
        assert_eq!(PrecisionPolicy::new(64, 64).unwrap().ladder(), vec![64]);
        assert!(PrecisionPolicy::new(256, 128).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let four = interval_sqrt(&p(4)).unwrap();
        assert!(four.is_point());
        assert_eq!(four.lo(), &int(2));
        let zero = interval_sqrt(&p(0)).unwrap();
        assert_eq!((zero.lo(), zero.hi()), (&int(0), &int(0)));
        let two = interval_sqrt(&p(2)).unwrap();
        assert!(two.lo() * two.lo() <= int(2));
        assert!(two.hi() * two.hi() >= int(2));
        let bound = Rational::new(BigInt::from(2), pow2(128));
        assert!(two.width() <= bound);
        let quarter = interval_sqrt(&ProbInterval::point(rat(9, 16), 128)).unwrap();
        assert_eq!(quarter.lo(), &rat(3, 4));
        assert!(quarter.is_point());
    }

    #[test]
    fn sqrt_rejects_negative() {
        let iv = ProbInterval::new(&int(-1), &int(1), 64).unwrap();
        assert_eq!(interval_sqrt(&iv), Err(Error::NegativeSqrt));
    }

    #[test]
    fn exp_of_one_encloses_e() {
        let e = interval_exp(&int(1), 128);
        let lo = parse_rational("2.71828182845904523536028747135266249775").unwrap();
        let hi = parse_rational("2.71828182845904523536028747135266249776").unwrap();
        assert!(e.lo() <= &hi && e.hi() >= &lo);
        assert!(e.width() < rat(1, 1 << 40) * rat(1, 1 << 40) * rat(1, 1 << 40));
    }

    #[test]
    fn exp_functional_equation() {
        let a = interval_exp(&rat(3, 7), 128);
        let b = interval_exp(&rat(4, 7), 128);
        let e = interval_exp(&int(1), 128);
        assert!(a.mul(&b).intersects(&e));
        let inv = interval_exp(&int(-2), 128);
        assert!(inv.mul(&interval_exp(&int(2), 128)).contains(&int(1)));
    }

    #[test]
    fn exp_large_argument_keeps_absolute_precision() {
        let big = interval_exp(&int(150), 64);
        assert!(big.width() <= rat(1, 1 << 40));
    }

    #[test]
    fn division_by_interval_with_zero_fails() {
        let z = ProbInterval::new(&int(-1), &int(1), 32).unwrap();
        assert_eq!(p(1).div(&z), Err(Error::DivisionByZero));
    }

    #[test]
    fn decisions() {
        let a = ProbInterval::new(&int(1), &int(2), 16).unwrap();
        let b = ProbInterval::new(&int(3), &int(4), 16).unwrap();
        assert_eq!(decide_le(&a, &b, true), Some(true));
        assert_eq!(decide_le(&b, &a, false), Some(false));
        assert_eq!(decide_le(&a, &a, false), None);
        assert_eq!(decide_le(&p(2), &p(2), false), Some(true));
        assert_eq!(decide_le(&p(2), &p(2), true), Some(false));
    }

    #[test]
    fn escalation_stops_at_cap() {
        let policy = PrecisionPolicy::new(8, 64).unwrap();
        let mut seen = Vec::new();
        let out = escalate(&policy, |bits| {
            seen.push(bits);
            Ok((None, ()))
        })
        .unwrap();
        assert_eq!(out.verdict, Verdict::Inconclusive);
        assert_eq!(seen, vec![8, 16, 32, 64]);
        let out = escalate(&policy, |bits| Ok((Some(bits >= 32), ()))).unwrap();
        assert_eq!(out.verdict, Verdict::Violated);
        assert_eq!(out.bits, 8);
    }
}
