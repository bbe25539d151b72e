//! Likelihood-ratio and hazard-rate order between two binomial laws on a
//! common number of trials, and monotonicity of the tail conditional
//! expectation in `p`.
//!
//! Every inequality is checked in cross-multiplied form on the integer
//! weights, so nothing is divided and zero tails need no special casing.

use std::fmt;

use crate::binomial::{BinomialLaw, BinomialParams};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    LikelihoodRatio,
    HazardRate,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::LikelihoodRatio => "LIKELIHOOD_RATIO",
            OrderKind::HazardRate => "HAZARD_RATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCheckReport {
    pub left: BinomialParams,
    pub right: BinomialParams,
    pub order_kind: OrderKind,
    pub holds: bool,
    /// First index violating the defining inequality.
    pub witness_k: Option<u64>,
    /// Hazard-rate inequality at `k = 0`, reported apart from `holds`.
    pub holds_at_zero: Option<bool>,
}

fn validate(left: &BinomialParams, right: &BinomialParams) -> Result<()> {
    if left.n() != right.n() {
        return Err(Error::MismatchedTrials {
            left: left.n(),
            right: right.n(),
        });
    }
    if left.p() > right.p() {
        return Err(Error::UnorderedPair);
    }
    Ok(())
}

/// `P[X=k] / P[Y=k]` non-increasing in `k`, i.e.
/// `pmf_X(k) pmf_Y(k+1) >= pmf_X(k+1) pmf_Y(k)` for `k` in `[0, n-1]`.
pub fn check_likelihood_ratio_order(
    left: &BinomialParams,
    right: &BinomialParams,
) -> Result<OrderCheckReport> {
    validate(left, right)?;
    let (x, y) = (BinomialLaw::new(left), BinomialLaw::new(right));
    Ok(lr_report(&x, &y))
}

pub(crate) fn lr_report(x: &BinomialLaw, y: &BinomialLaw) -> OrderCheckReport {
    let witness_k =
        (0..x.n()).find(|&k| x.weight(k) * y.weight(k + 1) < x.weight(k + 1) * y.weight(k));
    OrderCheckReport {
        left: x.params().clone(),
        right: y.params().clone(),
        order_kind: OrderKind::LikelihoodRatio,
        holds: witness_k.is_none(),
        witness_k,
        holds_at_zero: None,
    }
}

/// `P[X>=k] / P[X>=k+1] >= P[Y>=k] / P[Y>=k+1]` for `k` in `[1, n-1]`.
pub fn check_hazard_rate_order(
    left: &BinomialParams,
    right: &BinomialParams,
) -> Result<OrderCheckReport> {
    validate(left, right)?;
    let (x, y) = (BinomialLaw::new(left), BinomialLaw::new(right));
    Ok(hr_report(&x, &y))
}

pub(crate) fn hr_report(x: &BinomialLaw, y: &BinomialLaw) -> OrderCheckReport {
    let holds_at =
        |k: i64| x.tail_weight(k) * y.tail_weight(k + 1) >= x.tail_weight(k + 1) * y.tail_weight(k);
    let n = x.n() as i64;
    let witness_k = (1..n).find(|&k| !holds_at(k)).map(|k| k as u64);
    OrderCheckReport {
        left: x.params().clone(),
        right: y.params().clone(),
        order_kind: OrderKind::HazardRate,
        holds: witness_k.is_none(),
        witness_k,
        holds_at_zero: Some(holds_at(0)),
    }
}

/// `P[X >= k+t | X >= k] <= P[Y >= k+t | Y >= k]` for every `t` in `[1, n-k]`.
///
/// Returns the first failing `t`, if any.
pub fn check_conditional_tail_dominance(
    left: &BinomialParams,
    right: &BinomialParams,
    k: u64,
) -> Result<Option<u64>> {
    validate(left, right)?;
    if k > left.n() {
        return Err(Error::OutOfSupport {
            k: k as i64,
            n: left.n(),
        });
    }
    let (x, y) = (BinomialLaw::new(left), BinomialLaw::new(right));
    Ok(conditional_tail_witness(&x, &y, k))
}

pub(crate) fn conditional_tail_witness(x: &BinomialLaw, y: &BinomialLaw, k: u64) -> Option<u64> {
    let k = k as i64;
    (1..=(x.n() as i64 - k)).find_map(|t| {
        let lhs = x.tail_weight(k + t) * y.tail_weight(k);
        let rhs = y.tail_weight(k + t) * x.tail_weight(k);
        (lhs > rhs).then_some(t as u64)
    })
}

/// Tail conditional expectations along an increasing grid of `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TceMonotoneReport {
    pub n: u64,
    pub k: u64,
    /// `(p, E[X_p | X_p >= k])`, `None` where the conditioning event is null.
    pub points: Vec<(Rational, Option<Rational>)>,
    /// Index into `points` of the first value below its predecessor.
    pub first_violation: Option<usize>,
}

impl TceMonotoneReport {
    pub fn is_monotone(&self) -> bool {
        self.first_violation.is_none() && self.points.iter().all(|(_, v)| v.is_some())
    }
}

/// Evaluates `E[X_p | X_p >= k]` across `p_grid`, flagging any decrease.
pub fn check_tce_monotone_in_p(n: u64, k: u64, p_grid: &[Rational]) -> Result<TceMonotoneReport> {
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "p grid must be strictly increasing".into(),
        ));
    }
    if k > n {
        return Err(Error::OutOfSupport { k: k as i64, n });
    }
    let mut points = Vec::with_capacity(p_grid.len());
    for p in p_grid {
        let law = BinomialLaw::new(&BinomialParams::new(n, p.clone())?);
        points.push((p.clone(), law.tce(k as i64).ok()));
    }
    let mut first_violation = None;
    let mut previous: Option<&Rational> = None;
    for (i, (_, value)) in points.iter().enumerate() {
        if let Some(value) = value {
            if previous.is_some_and(|prev| value < prev) {
                first_violation = Some(i);
                break;
            }
            previous = Some(value);
        }
    }
    Ok(TceMonotoneReport {
        n,
        k,
        points,
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn bin(n: u64, a: i64, b: i64) -> BinomialParams {
        BinomialParams::new(n, rat(a, b)).unwrap()
    }

    #[test]
    fn lr_examples() {
        let r = check_likelihood_ratio_order(&bin(2, 1, 4), &bin(2, 1, 2)).unwrap();
        assert!(r.holds && r.witness_k.is_none());
        assert!(
            check_likelihood_ratio_order(&bin(1, 1, 3), &bin(1, 2, 3))
                .unwrap()
                .holds
        );
        assert!(
            check_likelihood_ratio_order(&bin(2, 1, 2), &bin(2, 1, 2))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn hr_examples() {
        let r = check_hazard_rate_order(&bin(2, 1, 4), &bin(2, 1, 2)).unwrap();
        assert!(r.holds);
        assert_eq!(r.order_kind, OrderKind::HazardRate);
        assert!(
            check_hazard_rate_order(&bin(1, 1, 3), &bin(1, 2, 3))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn reversed_pair_has_witness() {
        let x = BinomialLaw::new(&bin(3, 2, 3));
        let y = BinomialLaw::new(&bin(3, 1, 3));
        let lr = lr_report(&x, &y);
        assert!(!lr.holds);
        assert_eq!(lr.witness_k, Some(0));
        let hr = hr_report(&x, &y);
        assert_eq!(hr.witness_k, Some(1));
    }

    #[test]
    fn mismatched_or_unordered_pairs_rejected() {
        assert_eq!(
            check_hazard_rate_order(&bin(2, 1, 4), &bin(3, 1, 2)),
            Err(Error::MismatchedTrials { left: 2, right: 3 })
        );
        assert_eq!(
            check_likelihood_ratio_order(&bin(2, 1, 2), &bin(2, 1, 4)),
            Err(Error::UnorderedPair)
        );
    }

    #[test]
    fn conditional_tails() {
        assert_eq!(
            check_conditional_tail_dominance(&bin(5, 1, 4), &bin(5, 1, 3), 2).unwrap(),
            None
        );
        let x = BinomialLaw::new(&bin(4, 3, 4));
        let y = BinomialLaw::new(&bin(4, 1, 4));
        assert_eq!(conditional_tail_witness(&x, &y, 1), Some(1));
    }

    #[test]
    fn tce_monotone_examples() {
        let r = check_tce_monotone_in_p(2, 1, &[rat(1, 4), rat(1, 2), rat(3, 4)]).unwrap();
        assert!(r.is_monotone());
        assert_eq!(r.points[1].1, Some(rat(4, 3)));

        let r = check_tce_monotone_in_p(1, 1, &[rat(1, 5), rat(1, 2), rat(4, 5)]).unwrap();
        assert!(r.points.iter().all(|(_, v)| v == &Some(int(1))));

        let r = check_tce_monotone_in_p(2, 0, &[rat(1, 4), rat(1, 2)]).unwrap();
        assert_eq!(r.points[0].1, Some(rat(1, 2)));
        assert_eq!(r.points[1].1, Some(int(1)));
        assert!(r.is_monotone());

        assert!(check_tce_monotone_in_p(2, 0, &[rat(1, 2), rat(1, 4)]).is_err());
        assert!(check_tce_monotone_in_p(2, 3, &[rat(1, 2)]).is_err());
    }
}
