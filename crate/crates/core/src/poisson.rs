//! Certified enclosures of Poisson tail functionals.
//!
//! `lambda` is an exact rational, so every quantity factors as an exact
//! rational times `e^(-lambda)`; only that exponential is enclosed.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{
    decide_le, escalate, interval_exp, interval_sqrt, Escalated, PrecisionPolicy, ProbInterval,
};
use crate::rational::{ceil_int, floor_int, int, is_integer, Rational};
use crate::verdict::Verdict;

/// Default target width of an enclosure: `2^-64`.
pub fn default_epsilon() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 64usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoissonParams {
    lambda: Rational,
    epsilon: Rational,
}

impl PoissonParams {
    pub fn new(lambda: Rational, epsilon: Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::InvalidParams(format!(
                "lambda = {lambda} must be positive"
            )));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidParams(format!(
                "epsilon = {epsilon} must be positive"
            )));
        }
        Ok(Self { lambda, epsilon })
    }

    pub fn with_default_epsilon(lambda: Rational) -> Result<Self> {
        Self::new(lambda, default_epsilon())
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn lambda_is_integer(&self) -> bool {
        is_integer(&self.lambda)
    }

    pub fn floor(&self) -> u64 {
        floor_int(&self.lambda)
            .to_u64()
            .expect("lambda fits in u64")
    }

    pub fn ceil(&self) -> u64 {
        ceil_int(&self.lambda).to_u64().expect("lambda fits in u64")
    }

    /// Index `k` with `P[P >= lambda] = P[P >= k]`: lambda itself or its ceiling.
    pub fn threshold_index(&self) -> u64 {
        self.ceil()
    }

    /// Fractional bits needed for the target width, plus a small guard.
    fn bits_for_epsilon(&self) -> u32 {
        let inv = self.epsilon.recip();
        ceil_int(&inv).bits() as u32 + 4
    }
}

/// `lambda^k / k!`, exact.
pub fn poisson_weight(lambda: &Rational, k: u64) -> Rational {
    let mut w = Rational::one();
    for j in 1..=k {
        w = w * lambda / Rational::from_integer(BigInt::from(j));
    }
    w
}

/// `sum_{j<k} lambda^j / j!`, exact.
fn partial_weight_sum(lambda: &Rational, k: u64) -> Rational {
    let mut term = Rational::one();
    let mut total = Rational::zero();
    for j in 0..k {
        total += &term;
        term = term * lambda / Rational::from_integer(BigInt::from(j + 1));
    }
    total
}

/// Extra fractional bits so that scaling an `e^-lambda` enclosure by
/// `factor` still lands on the `2^-bits` grid with little loss.
fn guard_bits(factor: &Rational) -> u32 {
    ceil_int(&factor.abs()).bits() as u32 + 4
}

/// `factor * e^(-lambda)` at the `2^-bits` grid.
fn scaled_exp_neg(lambda: &Rational, factor: &Rational, bits: u32) -> ProbInterval {
    let wp = bits + guard_bits(factor);
    interval_exp(&-lambda.clone(), wp)
        .scale(factor)
        .with_precision(bits)
}

pub fn pmf_at(lambda: &Rational, k: u64, bits: u32) -> ProbInterval {
    scaled_exp_neg(lambda, &poisson_weight(lambda, k), bits)
}

/// `P[P >= k] = 1 - e^(-lambda) sum_{j<k} lambda^j/j!`.
pub fn tail_at(lambda: &Rational, k: u64, bits: u32) -> ProbInterval {
    if k == 0 {
        return ProbInterval::from_i64(1, bits);
    }
    let head = scaled_exp_neg(lambda, &partial_weight_sum(lambda, k), bits + 2);
    ProbInterval::from_i64(1, bits + 2)
        .sub(&head)
        .with_precision(bits)
}

/// `E|P - lambda| = 2 lambda e^(-lambda) lambda^m / m!`, `m = floor(lambda)`.
pub fn mad_at(lambda: &Rational, bits: u32) -> ProbInterval {
    let m = floor_int(lambda).to_u64().expect("lambda fits in u64");
    let factor = int(2) * lambda * poisson_weight(lambda, m);
    scaled_exp_neg(lambda, &factor, bits)
}

/// `E[P | P >= k] = lambda P[P >= k-1] / P[P >= k]`.
pub fn tce_at(lambda: &Rational, k: u64, bits: u32) -> Result<ProbInterval> {
    if k == 0 {
        return Ok(ProbInterval::point(lambda.clone(), bits));
    }
    let wp = bits + 8 + guard_bits(&tail_ratio_guard(lambda, k));
    let upper = tail_at(lambda, k - 1, wp).scale(lambda);
    let lower = tail_at(lambda, k, wp);
    Ok(upper.div(&lower)?.with_precision(bits))
}

/// Crude magnitude of `1 / P[P >= k]`, used only to size working precision.
fn tail_ratio_guard(lambda: &Rational, k: u64) -> Rational {
    let kk = Rational::from_integer(BigInt::from(k));
    if &kk <= lambda {
        int(4)
    } else {
        // P[P >= k] >= pmf(k) >= e^-lambda lambda^k / k!, so 1/tail <= 3^ceil(lambda) k! / lambda^k.
        let e_bound =
            Rational::from_integer(BigInt::from(3).pow(ceil_int(lambda).to_u32().unwrap_or(0)));
        e_bound / poisson_weight(lambda, k)
    }
}

/// Truncation index for direct summation: beyond it successive terms shrink
/// by a factor of at least 2.
pub fn truncation_index(lambda: &Rational, k: u64) -> u64 {
    let base = ceil_int(&(int(4) * lambda)).to_u64().expect("lambda fits") + 40;
    base.max(k + 1)
}

/// Normalization check: `sum_{j<K} pmf(j)` plus the geometric tail bound `[0, 2 pmf(K)]`.
pub fn total_mass_at(lambda: &Rational, bits: u32) -> ProbInterval {
    let big_k = truncation_index(lambda, 0);
    let head = scaled_exp_neg(lambda, &partial_weight_sum(lambda, big_k), bits);
    let rest = pmf_at(lambda, big_k, bits).scale(&int(2));
    head.add(&ProbInterval::new(&Rational::zero(), rest.hi(), bits).expect("rest >= 0"))
}

/// Direct-sum route for the mean absolute deviation, with a rigorous remainder.
pub fn mad_direct_at(lambda: &Rational, bits: u32) -> ProbInterval {
    let big_k = truncation_index(lambda, 0);
    let mut coeff = Rational::zero();
    let mut w = Rational::one();
    for j in 0..big_k {
        let dev = (Rational::from_integer(BigInt::from(j)) - lambda).abs();
        coeff += &dev * &w;
        w = w * lambda / Rational::from_integer(BigInt::from(j + 1));
    }
    let head = scaled_exp_neg(lambda, &coeff, bits);
    // terms (j - lambda) pmf(j) shrink by a factor <= (1 + 1/40)/4 past K
    let k_rat = Rational::from_integer(BigInt::from(big_k));
    let rest = pmf_at(lambda, big_k, bits).scale(&(int(2) * (k_rat - lambda)));
    head.add(&ProbInterval::new(&Rational::zero(), rest.hi(), bits).expect("rest >= 0"))
}

/// Direct-sum route for `E[P | P >= k]`: numerator and denominator both
/// summed term by term up to the truncation index.
pub fn tce_direct_at(lambda: &Rational, k: u64, bits: u32) -> Result<ProbInterval> {
    if k == 0 {
        return Ok(ProbInterval::point(lambda.clone(), bits));
    }
    let big_k = truncation_index(lambda, k);
    let wp = bits + 8 + guard_bits(&tail_ratio_guard(lambda, k));
    let mut mass = Rational::zero();
    let mut moment = Rational::zero();
    let mut w = poisson_weight(lambda, k);
    for j in k..big_k {
        mass += &w;
        moment += Rational::from_integer(BigInt::from(j)) * &w;
        w = w * lambda / Rational::from_integer(BigInt::from(j + 1));
    }
    let k_rat = Rational::from_integer(BigInt::from(big_k));
    let pmf_k = pmf_at(lambda, big_k, wp);
    let zero = Rational::zero();
    let mass_rest = ProbInterval::new(&zero, pmf_k.scale(&int(2)).hi(), wp)?;
    let moment_rest = ProbInterval::new(&zero, pmf_k.scale(&(int(2) * k_rat)).hi(), wp)?;
    let numer = scaled_exp_neg(lambda, &moment, wp).add(&moment_rest);
    let denom = scaled_exp_neg(lambda, &mass, wp).add(&mass_rest);
    Ok(numer.div(&denom)?.with_precision(bits))
}

/// `2 e^-(lambda - floor(lambda) + 1) sqrt(lambda) / (1 + sqrt(lambda + 1))`.
pub fn theorem_bound_at(lambda: &Rational, bits: u32) -> Result<ProbInterval> {
    let wp = bits + 8;
    let m = floor_int(lambda);
    let exponent = lambda - Rational::from_integer(m) + Rational::one();
    let decay = interval_exp(&-exponent, wp);
    let root = interval_sqrt(&ProbInterval::point(lambda.clone(), wp))?;
    let shifted = interval_sqrt(&ProbInterval::point(lambda + Rational::one(), wp))?;
    let denom = ProbInterval::from_i64(1, wp).add(&shifted);
    Ok(decay
        .scale(&int(2))
        .mul(&root)
        .div(&denom)?
        .with_precision(bits))
}

/// The same expression with the factor `1/2` of the mean-absolute-deviation
/// identity kept, i.e. half of [`theorem_bound_at`].
pub fn halved_bound_at(lambda: &Rational, bits: u32) -> Result<ProbInterval> {
    Ok(theorem_bound_at(lambda, bits + 1)?
        .scale(&Rational::new(BigInt::one(), BigInt::from(2)))
        .with_precision(bits))
}

/// Evaluates `compute` at increasing precision until the enclosure is no
/// wider than the parameters' epsilon.
fn to_epsilon(
    params: &PoissonParams,
    policy: &PrecisionPolicy,
    compute: impl Fn(u32) -> Result<ProbInterval>,
) -> Result<ProbInterval> {
    let start = policy.start_bits.max(params.bits_for_epsilon());
    let mut bits = start.min(policy.cap_bits);
    loop {
        let iv = compute(bits)?;
        if iv.width() <= params.epsilon {
            return Ok(iv);
        }
        if bits >= policy.cap_bits {
            return Err(Error::PrecisionExhausted {
                cap: policy.cap_bits,
            });
        }
        bits = bits.saturating_mul(2).min(policy.cap_bits);
    }
}

pub fn poisson_pmf(params: &PoissonParams, k: u64) -> Result<ProbInterval> {
    to_epsilon(params, &PrecisionPolicy::default(), |bits| {
        Ok(pmf_at(&params.lambda, k, bits))
    })
}

pub fn poisson_tail(params: &PoissonParams, k: u64) -> Result<ProbInterval> {
    to_epsilon(params, &PrecisionPolicy::default(), |bits| {
        Ok(tail_at(&params.lambda, k, bits))
    })
}

pub fn poisson_mad(params: &PoissonParams) -> Result<ProbInterval> {
    to_epsilon(params, &PrecisionPolicy::default(), |bits| {
        Ok(mad_at(&params.lambda, bits))
    })
}

pub fn poisson_tce(params: &PoissonParams, k: u64) -> Result<ProbInterval> {
    to_epsilon(params, &PrecisionPolicy::default(), |bits| {
        tce_at(&params.lambda, k, bits)
    })
}

pub fn poisson_theorem_bound(params: &PoissonParams) -> Result<ProbInterval> {
    to_epsilon(params, &PrecisionPolicy::default(), |bits| {
        theorem_bound_at(&params.lambda, bits)
    })
}

/// `E[P | P >= lambda] <= lambda + sqrt(lambda)` for integer `lambda`.
pub fn poisson_integer_mean_tce_check(
    lambda_int: u64,
    policy: &PrecisionPolicy,
) -> Result<Escalated<(ProbInterval, ProbInterval)>> {
    if lambda_int == 0 {
        return Err(Error::InvalidParams(
            "lambda must be a positive integer".into(),
        ));
    }
    let lambda = Rational::from_integer(BigInt::from(lambda_int));
    escalate(policy, |bits| {
        let tce = tce_at(&lambda, lambda_int, bits)?;
        let root = interval_sqrt(&ProbInterval::point(lambda.clone(), bits))?;
        let bound = ProbInterval::point(lambda.clone(), bits).add(&root);
        Ok((decide_le(&tce, &bound, false), (tce, bound)))
    })
}

/// Median premise for integer `lambda`: `P[P >= lambda] >= 1/2`.
pub fn poisson_median_check(
    lambda_int: u64,
    policy: &PrecisionPolicy,
) -> Result<Escalated<ProbInterval>> {
    if lambda_int == 0 {
        return Err(Error::InvalidParams(
            "lambda must be a positive integer".into(),
        ));
    }
    let lambda = Rational::from_integer(BigInt::from(lambda_int));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    escalate(policy, |bits| {
        let tail = tail_at(&lambda, lambda_int, bits);
        let half_iv = ProbInterval::point(half.clone(), bits);
        Ok((decide_le(&half_iv, &tail, false), tail))
    })
}

/// `m! <= e m^(m + 1/2) e^(-m)`, checked as `m! e^(m-1) <= m^m sqrt(m)`.
pub fn stirling_check(
    m: u64,
    policy: &PrecisionPolicy,
) -> Result<Escalated<(ProbInterval, ProbInterval)>> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let factorial: BigInt = (1..=m).map(BigInt::from).product();
    let m_big = BigInt::from(m);
    let power: BigInt = Pow::pow(&m_big, m);
    escalate(policy, |bits| {
        let left = interval_exp(&Rational::from_integer(BigInt::from(m - 1)), bits)
            .scale(&Rational::from_integer(factorial.clone()));
        let right = interval_sqrt(&ProbInterval::point(
            Rational::from_integer(m_big.clone()),
            bits,
        ))?
        .scale(&Rational::from_integer(power.clone()));
        Ok((decide_le(&left, &right, false), (left, right)))
    })
}

/// `E[P_a | P_a >= k] < E[P_b | P_b >= k]` for `a < b`.
pub fn check_tce_increasing_in_lambda(
    a: &Rational,
    b: &Rational,
    k: u64,
    policy: &PrecisionPolicy,
) -> Result<Verdict> {
    if a >= b {
        return Err(Error::UnorderedPair);
    }
    let out = escalate(policy, |bits| {
        let left = tce_at(a, k, bits)?;
        let right = tce_at(b, k, bits)?;
        Ok((decide_le(&left, &right, true), ()))
    })?;
    Ok(out.verdict)
}
