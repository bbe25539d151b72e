//! Poisson-binomial laws (independent trials with unequal success
//! probabilities) and a search over small ones for the smallest
//! `E|S - mean|^2 / Var S`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{interval_sqrt, ProbInterval};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonBinomialLaw {
    pub probs: Vec<Rational>,
    /// `pmf_table[k] = P[S = k]` for `k` in `0..=probs.len()`.
    pub pmf_table: Vec<Rational>,
}

impl PoissonBinomialLaw {
    pub fn mean(&self) -> Rational {
        self.probs.iter().sum()
    }

    pub fn variance(&self) -> Rational {
        self.probs.iter().map(|p| p * (Rational::one() - p)).sum()
    }

    pub fn mad(&self) -> Rational {
        let mean = self.mean();
        self.pmf_table
            .iter()
            .enumerate()
            .map(|(k, w)| (int(k as i64) - &mean).abs() * w)
            .sum()
    }
}

/// Exact law of a sum of independent Bernoulli trials, by sequential convolution.
pub fn poisson_binomial_pmf(probs: &[Rational]) -> Result<PoissonBinomialLaw> {
    if probs.is_empty() {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    if let Some(p) = probs
        .iter()
        .find(|p| **p <= Rational::zero() || **p >= Rational::one())
    {
        return Err(Error::InvalidParams(format!(
            "success probability {p} outside (0, 1)"
        )));
    }
    let mut table = vec![Rational::one()];
    for p in probs {
        let q = Rational::one() - p;
        let mut next = vec![Rational::zero(); table.len() + 1];
        for (k, w) in table.iter().enumerate() {
            next[k] += w * &q;
            next[k + 1] += w * p;
        }
        table = next;
    }
    Ok(PoissonBinomialLaw {
        probs: probs.to_vec(),
        pmf_table: table,
    })
}

/// Search space: every multiset of up to `max_len` probabilities with
/// denominator at most `den_cap`, plus `perturb_steps` dyadic perturbations
/// `(1/2 - e, 1/2 + e)` and `(1/2, 1/2 + e)`, `e = 2^-3, 2^-4, ...`, of the
/// two fair coins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreSpec {
    pub max_len: usize,
    pub den_cap: u64,
    pub perturb_steps: u32,
}

impl ExploreSpec {
    fn candidates(&self) -> Vec<Vec<Rational>> {
        let values = super::reduced_fractions(self.den_cap);
        let mut out: Vec<Vec<Rational>> = (1..=self.max_len)
            .flat_map(|len| multisets(&values, len))
            .collect();
        let half = Rational::new(1.into(), 2.into());
        for j in 0..self.perturb_steps {
            let e = Rational::new(1.into(), num_bigint::BigInt::from(8) << j as usize);
            out.push(vec![&half - &e, &half + &e]);
            out.push(vec![half.clone(), &half + &e]);
        }
        for probs in &mut out {
            probs.sort();
        }
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreRow {
    pub probs: Vec<Rational>,
    pub mad: Rational,
    pub variance: Rational,
    /// `2 mad^2 / v`; at least 1 exactly when `mad >= sqrt(v/2)`.
    pub ratio_sq: Rational,
    /// Enclosure of `mad / sqrt(v/2)`.
    pub ratio: ProbInterval,
    pub meets_half_variance: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreReport {
    /// Sorted by `ratio_sq`, then by the probability vector.
    pub rows: Vec<ExploreRow>,
}

impl ExploreReport {
    pub fn minimum(&self) -> Option<&ExploreRow> {
        self.rows.first()
    }
}

fn multisets(values: &[Rational], len: usize) -> Vec<Vec<Rational>> {
    fn go(
        values: &[Rational],
        start: usize,
        len: usize,
        cur: &mut Vec<Rational>,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..values.len() {
            cur.push(values[i].clone());
            go(values, i, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(values, 0, len, &mut Vec::new(), &mut out);
    out
}

pub fn explore_mad_ratio(spec: &ExploreSpec, bits: u32) -> Result<ExploreReport> {
    if spec.max_len == 0 || spec.den_cap < 2 {
        return Err(Error::InvalidParams(
            "max length >= 1 and denominator cap >= 2 required".into(),
        ));
    }
    let mut rows = Vec::new();
    for probs in spec.candidates() {
        let law = poisson_binomial_pmf(&probs)?;
        let mad = law.mad();
        let variance = law.variance();
        let ratio_sq = int(2) * &mad * &mad / &variance;
        let ratio = interval_sqrt(&ProbInterval::point(ratio_sq.clone(), bits))?;
        rows.push(ExploreRow {
            meets_half_variance: ratio_sq >= Rational::one(),
            probs,
            mad,
            variance,
            ratio_sq,
            ratio,
        });
    }
    rows.sort_by(|a, b| {
        a.ratio_sq
            .cmp(&b.ratio_sq)
            .then_with(|| a.probs.cmp(&b.probs))
    });
    Ok(ExploreReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn two_fair_coins() {
        let law = poisson_binomial_pmf(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(law.pmf_table, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(law.mad(), rat(1, 2));
    }

    #[test]
    fn rejects_degenerate_probabilities() {
        assert!(poisson_binomial_pmf(&[rat(1, 2), int(1)]).is_err());
        assert!(poisson_binomial_pmf(&[]).is_err());
    }

    #[test]
    fn multiset_count() {
        // 5 values, multisets of size 2: C(6, 2)
        assert_eq!(
            multisets(&crate::harness::reduced_fractions(4), 2).len(),
            15
        );
    }

    #[test]
    fn exploration_minimum() {
        let report = explore_mad_ratio(
            &ExploreSpec {
                max_len: 3,
                den_cap: 4,
                perturb_steps: 3,
            },
            128,
        )
        .unwrap();
        let min = report.minimum().unwrap();
        assert_eq!(min.ratio_sq, rat(3, 4));
        assert_eq!(min.probs, vec![rat(1, 4), rat(3, 4)]);
        let fair = report
            .rows
            .iter()
            .find(|r| r.probs == vec![rat(1, 2), rat(1, 2)])
            .unwrap();
        assert_eq!(fair.ratio_sq, int(1));
        assert!(fair.ratio.is_point());
        // 1 - 4e^2 for the symmetric perturbation
        let near = report
            .rows
            .iter()
            .find(|r| r.probs == vec![rat(3, 8), rat(5, 8)])
            .unwrap();
        assert_eq!(near.ratio_sq, rat(15, 16));
    }

    #[test]
    fn singleton_fair_coin_ratio_is_sqrt_two() {
        let report = explore_mad_ratio(
            &ExploreSpec {
                max_len: 1,
                den_cap: 2,
                perturb_steps: 0,
            },
            128,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].ratio_sq, int(2));
    }
}
