//! Exact binomial functionals: pmf, tails, mean absolute deviation, and tail
//! conditional expectations, all as rationals.
//!
//! With `p = a/b` in lowest terms every probability is `W_k / b^n` for the
//! integer weight `W_k = C(n,k) a^k (b-a)^(n-k)`, so sums are done on integers
//! and divided once at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_int, floor_int, is_integer, Rational};

/// `Bin(n, p)` with `n >= 1` and `p` an exact rational in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinomialParams {
    n: u64,
    p: Rational,
}

impl BinomialParams {
    pub fn new(n: u64, p: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if p <= Rational::zero() || p >= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "p = {p} must lie strictly between 0 and 1"
            )));
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn n_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.n))
    }

    /// `np`
    pub fn mean(&self) -> Rational {
        self.n_rat() * &self.p
    }

    /// `np(1-p)`
    pub fn variance(&self) -> Rational {
        self.mean() * (Rational::one() - &self.p)
    }

    pub fn np_is_integer(&self) -> bool {
        is_integer(&self.mean())
    }

    /// `n >= 2` and `1/n <= p <= 1 - 1/n`.
    pub fn in_core_domain(&self) -> bool {
        let inv = self.n_rat().recip();
        self.n >= 2 && self.p >= inv && self.p <= Rational::one() - inv
    }

    /// The integer index `k` with `P[X >= np] = P[X >= k]`: `np` itself when
    /// it is an integer, `ceil(np)` otherwise.
    pub fn threshold_index(&self) -> i64 {
        let mean = self.mean();
        if is_integer(&mean) {
            mean.to_integer().to_i64().expect("np <= n fits in i64")
        } else {
            ceil_int(&mean).to_i64().expect("ceil(np) <= n fits in i64")
        }
    }

    pub fn floor_mean(&self) -> i64 {
        floor_int(&self.mean())
            .to_i64()
            .expect("np <= n fits in i64")
    }
}

/// Precomputed integer weights of one binomial law.
#[derive(Debug, Clone)]
pub struct BinomialLaw {
    params: BinomialParams,
    /// `W_k`, `k = 0..=n`
    weights: Vec<BigInt>,
    /// `S_k = sum_{j >= k} W_j`, `k = 0..=n+1`
    suffix: Vec<BigInt>,
    /// `b^n`
    denom: BigInt,
}

impl BinomialLaw {
    pub fn new(params: &BinomialParams) -> Self {
        let n = params.n;
        let a = params.p.numer().clone();
        let b = params.p.denom().clone();
        let c = &b - &a;
        let mut weights = Vec::with_capacity(n as usize + 1);
        let mut w: BigInt = Pow::pow(&c, n);
        weights.push(w.clone());
        // W_{k+1} = W_k (n-k) a / ((k+1)(b-a)); the quotient is always exact.
        for k in 0..n {
            w = w * BigInt::from(n - k) * &a;
            let d = BigInt::from(k + 1) * &c;
            debug_assert!(w.is_multiple_of(&d));
            w /= d;
            weights.push(w.clone());
        }
        let mut suffix = vec![BigInt::zero(); n as usize + 2];
        for k in (0..=n as usize).rev() {
            suffix[k] = &suffix[k + 1] + &weights[k];
        }
        let denom = Pow::pow(&b, n);
        debug_assert_eq!(suffix[0], denom);
        Self {
            params: params.clone(),
            weights,
            suffix,
            denom,
        }
    }

    pub fn params(&self) -> &BinomialParams {
        &self.params
    }

    pub fn n(&self) -> u64 {
        self.params.n
    }

    /// Integer weight `W_k = b^n P[X = k]`.
    pub fn weight(&self, k: u64) -> &BigInt {
        &self.weights[k as usize]
    }

    /// Integer tail weight `b^n P[X >= k]`, for any `k`.
    pub fn tail_weight(&self, k: i64) -> &BigInt {
        let idx = k.clamp(0, self.n() as i64 + 1) as usize;
        &self.suffix[idx]
    }

    /// Common denominator `b^n`.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn pmf(&self, k: i64) -> Result<Rational> {
        if k < 0 || k as u64 > self.n() {
            return Err(Error::OutOfSupport { k, n: self.n() });
        }
        Ok(Rational::new(
            self.weights[k as usize].clone(),
            self.denom.clone(),
        ))
    }

    /// `P[X >= k]`; 1 for `k <= 0`, 0 for `k > n`.
    pub fn tail(&self, k: i64) -> Rational {
        Rational::new(self.tail_weight(k).clone(), self.denom.clone())
    }

    /// `P[X >= np]`, with the integer and non-integer mean handled as separate paths.
    pub fn mean_exceedance_prob(&self) -> Rational {
        let mean = self.params.mean();
        if is_integer(&mean) {
            let k = mean.to_integer().to_i64().expect("np <= n");
            self.tail(k)
        } else {
            // k < np < k + 1, so X >= np iff X >= k + 1
            let k_plus_one = ceil_int(&mean).to_i64().expect("ceil(np) <= n");
            self.tail(k_plus_one)
        }
    }

    /// `E|X - np|` by direct summation.
    pub fn mad(&self) -> Rational {
        let n = BigInt::from(self.n());
        let a = self.params.p.numer();
        let b = self.params.p.denom();
        let na = &n * a;
        // |k - na/b| = |kb - na| / b
        let total = self
            .weights
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (k, w)| {
                acc + (BigInt::from(k) * b - &na).abs() * w
            });
        Rational::new(total, &self.denom * b)
    }

    /// `E[max(0, X - t)]`.
    pub fn positive_part_mean(&self, threshold: &Rational) -> Rational {
        let c = threshold.numer();
        let d = threshold.denom();
        let total = self
            .weights
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (k, w)| {
                let excess = BigInt::from(k) * d - c;
                if excess.is_positive() {
                    acc + excess * w
                } else {
                    acc
                }
            });
        Rational::new(total, &self.denom * d)
    }

    /// `sum_{j >= k} j W_j`, the integer numerator of `E[X; X >= k]`.
    pub fn upper_moment_weight(&self, k: i64) -> BigInt {
        let start = k.max(0) as usize;
        self.weights
            .iter()
            .enumerate()
            .skip(start)
            .fold(BigInt::zero(), |acc, (j, w)| acc + BigInt::from(j) * w)
    }

    /// `E[X 1{X >= k}]`
    pub fn upper_moment(&self, k: i64) -> Rational {
        Rational::new(self.upper_moment_weight(k), self.denom.clone())
    }

    /// `E[X | X >= k]` by direct summation.
    pub fn tce(&self, k: i64) -> Result<Rational> {
        let tail = self.tail_weight(k);
        if tail.is_zero() {
            return Err(Error::NullEvent { k });
        }
        Ok(Rational::new(self.upper_moment_weight(k), tail.clone()))
    }

    /// Whether `P[X >= floor(np)] >= 1/2`, i.e. `floor(np)` is not above a median.
    pub fn median_lower_check(&self) -> bool {
        // 2 S_k >= b^n
        let k = self.params.floor_mean();
        self.tail_weight(k) * 2u32 >= self.denom
    }
}

pub fn pmf(params: &BinomialParams, k: i64) -> Result<Rational> {
    BinomialLaw::new(params).pmf(k)
}

pub fn tail(params: &BinomialParams, k: i64) -> Rational {
    BinomialLaw::new(params).tail(k)
}

pub fn mean_exceedance_prob(params: &BinomialParams) -> Rational {
    BinomialLaw::new(params).mean_exceedance_prob()
}

pub fn mad(params: &BinomialParams) -> Rational {
    BinomialLaw::new(params).mad()
}

pub fn positive_part_mean(params: &BinomialParams, threshold: &Rational) -> Rational {
    BinomialLaw::new(params).positive_part_mean(threshold)
}

pub fn tce(params: &BinomialParams, k: i64) -> Result<Rational> {
    BinomialLaw::new(params).tce(k)
}

pub fn median_lower_check(params: &BinomialParams) -> bool {
    BinomialLaw::new(params).median_lower_check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn bin(n: u64, a: i64, b: i64) -> BinomialParams {
        BinomialParams::new(n, rat(a, b)).unwrap()
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(BinomialParams::new(0, rat(1, 2)).is_err());
        assert!(BinomialParams::new(3, int(0)).is_err());
        assert!(BinomialParams::new(3, int(1)).is_err());
        assert!(BinomialParams::new(3, rat(3, 2)).is_err());
    }

    #[test]
    fn core_domain_edges() {
        assert!(bin(2, 1, 2).in_core_domain());
        assert!(bin(10, 1, 10).in_core_domain());
        assert!(bin(10, 9, 10).in_core_domain());
        assert!(!bin(10, 1, 20).in_core_domain());
        assert!(!bin(1, 1, 2).in_core_domain());
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(pmf(&bin(1, 1, 2), 0).unwrap(), rat(1, 2));
        assert_eq!(pmf(&bin(2, 1, 2), 1).unwrap(), rat(1, 2));
        assert!(matches!(
            pmf(&bin(2, 1, 2), 3),
            Err(Error::OutOfSupport { k: 3, n: 2 })
        ));
        assert!(pmf(&bin(2, 1, 2), -1).is_err());
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail(&bin(2, 1, 2), 1), rat(3, 4));
        assert_eq!(tail(&bin(2, 1, 4), 1), rat(7, 16));
        assert_eq!(tail(&bin(2, 1, 2), 3), int(0));
        assert_eq!(tail(&bin(2, 1, 2), 0), int(1));
        assert_eq!(tail(&bin(2, 1, 2), -5), int(1));
    }

    #[test]
    fn exceedance_examples() {
        assert_eq!(mean_exceedance_prob(&bin(1, 1, 2)), rat(1, 2));
        assert_eq!(mean_exceedance_prob(&bin(2, 1, 2)), rat(3, 4));
        assert_eq!(mean_exceedance_prob(&bin(3, 1, 2)), rat(1, 2));
    }

    #[test]
    fn mad_examples() {
        assert_eq!(mad(&bin(2, 1, 2)), rat(1, 2));
        assert_eq!(mad(&bin(1, 1, 3)), rat(4, 9));
    }

    #[test]
    fn positive_part_examples() {
        assert_eq!(positive_part_mean(&bin(2, 1, 2), &int(1)), rat(1, 4));
        assert_eq!(positive_part_mean(&bin(2, 1, 2), &int(2)), int(0));
        let p = bin(3, 1, 3);
        assert_eq!(positive_part_mean(&p, &int(1)), mad(&p) / int(2));
    }

    #[test]
    fn tce_examples() {
        let p = bin(2, 1, 2);
        assert_eq!(tce(&p, 1).unwrap(), rat(4, 3));
        assert_eq!(tce(&p, 2).unwrap(), int(2));
        assert_eq!(tce(&p, 0).unwrap(), int(1));
        assert_eq!(tce(&p, 3), Err(Error::NullEvent { k: 3 }));
    }

    #[test]
    fn median_examples() {
        assert!(median_lower_check(&bin(2, 1, 2)));
        assert!(median_lower_check(&bin(3, 1, 2)));
        assert!(median_lower_check(&bin(10, 1, 10)));
    }

    #[test]
    fn threshold_index_paths() {
        assert_eq!(bin(4, 1, 2).threshold_index(), 2);
        assert_eq!(bin(3, 1, 2).threshold_index(), 2);
        assert_eq!(bin(5, 1, 3).threshold_index(), 2);
        assert_eq!(bin(7, 1, 7).threshold_index(), 1);
    }
}
