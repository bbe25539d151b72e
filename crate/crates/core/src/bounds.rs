//! Closed-form lower bounds on `P[X >= np]`, evaluated as enclosures with
//! exact validity predicates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::binomial::{BinomialLaw, BinomialParams};
use crate::error::{Error, Result};
use crate::interval::{decide_le, escalate, interval_sqrt, PrecisionPolicy, ProbInterval};
use crate::rational::{int, rat, Rational};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// `(1/4) (E|Z|)^2 / E[Z^2]` with `Z = X - np`.
    VeraarEq1,
    /// `1/4`, strict, for `p >= 1/n`.
    GreenbergMohriEq2,
    /// `min(p, 1/4)` for `p <= 1/2`.
    RigolletTongEq3,
    /// `sqrt(v/8) / (1 + sqrt(v + 1))`, `v = np(1-p)`, on the core domain.
    Theorem1,
    /// `sqrt(v/8) / (1 + sqrt(v + 1 - 2p))` on the core domain.
    Theorem1Sharp,
    /// Poisson counterpart; not evaluable on binomial parameters.
    PoissonS3,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::VeraarEq1,
        BoundKind::GreenbergMohriEq2,
        BoundKind::RigolletTongEq3,
        BoundKind::Theorem1,
        BoundKind::Theorem1Sharp,
        BoundKind::PoissonS3,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::VeraarEq1 => "VERAAR_EQ1",
            BoundKind::GreenbergMohriEq2 => "GREENBERG_MOHRI_EQ2",
            BoundKind::RigolletTongEq3 => "RIGOLLET_TONG_EQ3",
            BoundKind::Theorem1 => "THEOREM1",
            BoundKind::Theorem1Sharp => "THEOREM1_SHARP",
            BoundKind::PoissonS3 => "POISSON_S3",
        }
    }

    /// Whether the bound is asserted as a strict inequality.
    pub fn is_strict(self) -> bool {
        matches!(self, BoundKind::GreenbergMohriEq2)
    }

    pub fn constraint(self) -> &'static str {
        match self {
            BoundKind::VeraarEq1 => "0 < p < 1",
            BoundKind::GreenbergMohriEq2 => "p >= 1/n",
            BoundKind::RigolletTongEq3 => "p <= 1/2",
            BoundKind::Theorem1 | BoundKind::Theorem1Sharp => "n >= 2 and 1/n <= p <= 1 - 1/n",
            BoundKind::PoissonS3 => "a Poisson law with rational mean lambda > 0",
        }
    }

    /// The exact validity predicate for binomial parameters.
    pub fn applies_to(self, params: &BinomialParams) -> bool {
        match self {
            BoundKind::VeraarEq1 => true,
            BoundKind::GreenbergMohriEq2 => params.p() >= &params.n_rat().recip(),
            BoundKind::RigolletTongEq3 => params.p() <= &rat(1, 2),
            BoundKind::Theorem1 | BoundKind::Theorem1Sharp => params.in_core_domain(),
            BoundKind::PoissonS3 => false,
        }
    }

    fn check(self, params: &BinomialParams) -> Result<()> {
        if self.applies_to(params) {
            Ok(())
        } else {
            Err(Error::Domain {
                bound: self.tag(),
                constraint: self.constraint(),
            })
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "veraar" | "veraar-eq1" | "eq1" => BoundKind::VeraarEq1,
            "gm" | "greenberg-mohri" | "greenberg-mohri-eq2" | "eq2" => {
                BoundKind::GreenbergMohriEq2
            }
            "rt" | "rigollet-tong" | "rigollet-tong-eq3" | "eq3" => BoundKind::RigolletTongEq3,
            "theorem1" | "thm1" | "theorem1-relaxed" => BoundKind::Theorem1,
            "theorem1-sharp" | "thm1-sharp" => BoundKind::Theorem1Sharp,
            "poisson" | "poisson-s3" => BoundKind::PoissonS3,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "unknown bound kind {s:?}; expected one of veraar, gm, rt, theorem1, theorem1-sharp, poisson"
                )))
            }
        })
    }
}

/// `(1/4) mad^2 / (np(1-p))`, exact.
pub fn veraar_value(law: &BinomialLaw) -> Rational {
    let mad = law.mad();
    &mad * &mad / (int(4) * law.params().variance())
}

pub fn veraar_bound(params: &BinomialParams, bits: u32) -> ProbInterval {
    ProbInterval::point(veraar_value(&BinomialLaw::new(params)), bits)
}

pub fn greenberg_mohri_bound(params: &BinomialParams, bits: u32) -> Result<ProbInterval> {
    BoundKind::GreenbergMohriEq2.check(params)?;
    Ok(ProbInterval::point(rat(1, 4), bits))
}

pub fn rigollet_tong_bound(params: &BinomialParams, bits: u32) -> Result<ProbInterval> {
    BoundKind::RigolletTongEq3.check(params)?;
    let value = params.p().clone().min(rat(1, 4));
    Ok(ProbInterval::point(value, bits))
}

/// `sqrt(v/8) / (1 + sqrt(v + shift))`; `sqrt(v/8)` equals `sqrt(v) / (2 sqrt 2)`.
fn quarter_ratio(v: &Rational, shift: &Rational, bits: u32) -> Result<ProbInterval> {
    let numer = interval_sqrt(&ProbInterval::point(v / int(8), bits))?;
    let inner = interval_sqrt(&ProbInterval::point(v + shift, bits))?;
    let denom = ProbInterval::from_i64(1, bits).add(&inner);
    numer.div(&denom)
}

/// Main bound; `sharp` keeps the `1 - 2p` term from the last step of its derivation.
pub fn theorem1_bound(params: &BinomialParams, sharp: bool, bits: u32) -> Result<ProbInterval> {
    let kind = if sharp {
        BoundKind::Theorem1Sharp
    } else {
        BoundKind::Theorem1
    };
    kind.check(params)?;
    let v = params.variance();
    let shift = if sharp {
        Rational::one() - int(2) * params.p()
    } else {
        Rational::one()
    };
    quarter_ratio(&v, &shift, bits)
}

/// `f(x) = sqrt(x) / (1 + sqrt(x + 1))`, scaled by `1/(2 sqrt 2)`; the
/// relaxed main bound as a function of the variance.
pub fn variance_profile(x: &Rational, bits: u32) -> Result<ProbInterval> {
    quarter_ratio(x, &Rational::one(), bits)
}

/// Evaluates any binomial bound kind.
pub fn evaluate(kind: BoundKind, params: &BinomialParams, bits: u32) -> Result<ProbInterval> {
    match kind {
        BoundKind::VeraarEq1 => Ok(veraar_bound(params, bits)),
        BoundKind::GreenbergMohriEq2 => greenberg_mohri_bound(params, bits),
        BoundKind::RigolletTongEq3 => rigollet_tong_bound(params, bits),
        BoundKind::Theorem1 => theorem1_bound(params, false, bits),
        BoundKind::Theorem1Sharp => theorem1_bound(params, true, bits),
        BoundKind::PoissonS3 => Err(Error::Domain {
            bound: kind.tag(),
            constraint: kind.constraint(),
        }),
    }
}

/// A bound set against the exact mean-exceedance probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub kind: BoundKind,
    pub bound: ProbInterval,
    pub tail: Rational,
    pub verdict: Verdict,
}

/// Evaluates `kind` and decides `bound <= P[X >= np]` (strict where the bound
/// is stated strictly), raising precision along `policy` as needed.
pub fn check_bound(
    kind: BoundKind,
    params: &BinomialParams,
    policy: &PrecisionPolicy,
) -> Result<BoundCheck> {
    let tail = BinomialLaw::new(params).mean_exceedance_prob();
    let out = escalate(policy, |bits| {
        let bound = evaluate(kind, params, bits)?;
        let point = ProbInterval::point(tail.clone(), bits);
        Ok((decide_le(&bound, &point, kind.is_strict()), bound))
    })?;
    Ok(BoundCheck {
        kind,
        bound: out.value,
        tail,
        verdict: out.verdict,
    })
}

/// Exact comparison of `np(1-p)` against 8, which decides whether the
/// relaxed main bound is above, at, or below 1/4.
pub fn quarter_threshold_check(params: &BinomialParams) -> Result<Ordering> {
    BoundKind::Theorem1.check(params)?;
    Ok(params.variance().cmp(&int(8)))
}

/// `np + sqrt(np(1-p))`, the upper bound on `E[X | X >= np]` for integer `np`.
pub fn tce_upper_bound_integer_mean(params: &BinomialParams, bits: u32) -> Result<ProbInterval> {
    if !params.np_is_integer() {
        return Err(Error::Domain {
            bound: "TCE_UPPER_BOUND_INTEGER_MEAN",
            constraint: "np an integer",
        });
    }
    let root = interval_sqrt(&ProbInterval::point(params.variance(), bits))?;
    Ok(ProbInterval::point(params.mean(), bits).add(&root))
}

/// Checks that `f` is increasing along `xs` (sorted, strictly increasing),
/// returning one verdict per consecutive pair. Pairs the precision cap cannot
/// separate come back `Inconclusive`.
pub fn check_profile_increasing(xs: &[Rational], policy: &PrecisionPolicy) -> Result<Vec<Verdict>> {
    xs.windows(2)
        .map(|w| {
            if w[0] >= w[1] {
                return Err(Error::InvalidParams(
                    "grid must be strictly increasing".into(),
                ));
            }
            let out = escalate(policy, |bits| {
                let a = variance_profile(&w[0], bits)?;
                let b = variance_profile(&w[1], bits)?;
                Ok((decide_le(&a, &b, true), ()))
            })?;
            Ok(out.verdict)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::mean_exceedance_prob;
    use crate::rational::parse_rational;

    fn bin(n: u64, a: i64, b: i64) -> BinomialParams {
        BinomialParams::new(n, rat(a, b)).unwrap()
    }

    /// Whether `iv` meets `[d, d + one unit in the last place of d]`, for a
    /// reference value `d` truncated to the digits shown.
    fn meets_truncated(iv: &ProbInterval, d: &str) -> bool {
        let places = d.split('.').nth(1).map_or(0, str::len) as u32;
        let lo = dec(d);
        let hi = &lo + Rational::new(1.into(), num_bigint::BigInt::from(10).pow(places));
        iv.intersects(&ProbInterval::new(&lo, &hi, 256).unwrap())
    }

    fn dec(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn veraar_examples() {
        assert_eq!(veraar_bound(&bin(2, 1, 2), 128).lo(), &rat(1, 8));
        let boundary = veraar_bound(&bin(1, 1, 2), 128);
        assert!(boundary.is_point());
        assert_eq!(boundary.lo(), &rat(1, 4));
    }

    #[test]
    fn greenberg_mohri_examples() {
        let b = greenberg_mohri_bound(&bin(2, 1, 2), 128).unwrap();
        assert_eq!(b.hi(), &rat(1, 4));
        assert!(mean_exceedance_prob(&bin(2, 1, 2)) > rat(1, 4));
        let p = bin(10, 1, 10);
        greenberg_mohri_bound(&p, 128).unwrap();
        let exact = Rational::one() - rat(9, 10).pow(10);
        assert_eq!(mean_exceedance_prob(&p), exact);
        assert!(exact > rat(1, 4));
        let err = greenberg_mohri_bound(&bin(10, 1, 20), 128).unwrap_err();
        assert!(err.to_string().contains("p >= 1/n"));
    }

    #[test]
    fn rigollet_tong_examples() {
        assert_eq!(
            rigollet_tong_bound(&bin(10, 1, 10), 64).unwrap().lo(),
            &rat(1, 10)
        );
        assert_eq!(
            rigollet_tong_bound(&bin(10, 2, 5), 64).unwrap().lo(),
            &rat(1, 4)
        );
        assert!(rigollet_tong_bound(&bin(4, 3, 4), 64).is_err());
    }

    #[test]
    fn theorem1_at_variance_eight_is_a_quarter() {
        let p = bin(32, 1, 2);
        assert_eq!(p.variance(), int(8));
        let b = theorem1_bound(&p, false, 128).unwrap();
        assert!(b.contains(&rat(1, 4)));
    }

    #[test]
    fn theorem1_reference_values() {
        // (1/(2 sqrt 2)) sqrt(1/2) / (1 + sqrt(3/2)) = 0.11237243569579452454...
        let b = theorem1_bound(&bin(2, 1, 2), false, 128).unwrap();
        assert!(meets_truncated(&b, "0.1123724356957945245"));
        assert!(b.hi() < &rat(3, 4));
        // (1/(2 sqrt 2)) sqrt 2 / (1 + sqrt 3) = 0.18301270189221932338...
        let b = theorem1_bound(&bin(8, 1, 2), false, 128).unwrap();
        assert!(meets_truncated(&b, "0.1830127018922193233"));
        // v = 25: 5 / (2 sqrt 2 (1 + sqrt 26)) = 0.28984444942774417687...
        let b = theorem1_bound(&bin(100, 1, 2), false, 128).unwrap();
        assert!(meets_truncated(&b, "0.2898444494277441768"));
    }

    #[test]
    fn theorem1_domain() {
        let err = theorem1_bound(&bin(10, 1, 20), false, 64).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        assert!(theorem1_bound(&bin(1, 1, 2), true, 64).is_err());
    }

    #[test]
    fn sharp_dominates_relaxed() {
        for (n, a, b) in [(5, 1, 3), (7, 2, 7), (20, 3, 10), (9, 7, 9)] {
            let params = bin(n, a, b);
            let relaxed = theorem1_bound(&params, false, 128).unwrap();
            let sharp = theorem1_bound(&params, true, 128).unwrap();
            assert!(relaxed.lo() <= sharp.hi());
        }
    }

    #[test]
    fn quarter_threshold_examples() {
        // v = 9
        let above = bin(36, 1, 2);
        assert_eq!(quarter_threshold_check(&above).unwrap(), Ordering::Greater);
        assert!(theorem1_bound(&above, false, 128).unwrap().lo() > &rat(1, 4));
        assert_eq!(
            quarter_threshold_check(&bin(32, 1, 2)).unwrap(),
            Ordering::Equal
        );
        let below = bin(2, 1, 2);
        assert_eq!(quarter_threshold_check(&below).unwrap(), Ordering::Less);
        assert!(theorem1_bound(&below, false, 128).unwrap().hi() < &rat(1, 4));
    }

    #[test]
    fn tce_upper_bound_examples() {
        let b = tce_upper_bound_integer_mean(&bin(2, 1, 2), 128).unwrap();
        assert!(meets_truncated(&b, "1.70710678118654752440"));
        assert!(rat(4, 3) < *b.lo());
        let b = tce_upper_bound_integer_mean(&bin(4, 1, 2), 128).unwrap();
        assert!(b.is_point());
        assert_eq!(b.lo(), &int(3));
        assert!(tce_upper_bound_integer_mean(&bin(3, 1, 2), 128).is_err());
    }

    #[test]
    fn profile_is_increasing_on_a_grid() {
        let xs: Vec<Rational> = (1..40).map(|i| rat(i, 3)).collect();
        let verdicts = check_profile_increasing(&xs, &PrecisionPolicy::default()).unwrap();
        assert!(verdicts.iter().all(|v| *v == Verdict::Proven));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "gm".parse::<BoundKind>().unwrap(),
            BoundKind::GreenbergMohriEq2
        );
        assert_eq!(
            "theorem1-sharp".parse::<BoundKind>().unwrap(),
            BoundKind::Theorem1Sharp
        );
        assert!("nope".parse::<BoundKind>().is_err());
    }
}
