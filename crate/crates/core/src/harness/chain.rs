//! Link-by-link audit of the main bound's derivation at one grid point with
//! non-integer mean.
//!
//! With `k = floor(np)`, `q = (k+1)/n` and `c = (k+1) - np`:
//!
//! * A: `P[X >= np] = (E|X-np|/2) / (E[X | X >= np] - np)`
//! * B: `P[X >= np] >= sqrt(v/8) / (E[X | X >= np] - np)`
//! * C: `E[X_p | X_p >= k+1] <= E[X_q | X_q >= k+1]`
//! * D: `E[X_q | X_q >= k+1] < (k+1) + sqrt((k+1)(1-q))`
//! * E: `c + sqrt((k+1)(1-q)) <= 1 + sqrt(v + 1 - 2p)`
//! * F: `sqrt(v/8)/(1 + sqrt(v+1-2p)) >= sqrt(v/8)/(1 + sqrt(v+1))`
//!
//! E is checked as one inequality. Its two halves taken separately
//! (`c <= 1` and `(k+1)(1-q) <= v + 1 - 2p`) do not both hold when `p > 1/2`.

use num_traits::One;

use super::claims::{certified_lower, certified_pair, exact_equal, exact_upper};
use super::{Subject, VerificationRecord};
use crate::binomial::{BinomialLaw, BinomialParams};
use crate::bounds::theorem1_bound;
use crate::error::{Error, Result};
use crate::interval::{interval_sqrt, PrecisionPolicy, ProbInterval};
use crate::rational::{int, Rational};

pub(crate) struct Audit {
    pub records: Vec<VerificationRecord>,
    pub notes: Vec<String>,
}

/// Records `PROOF_CHAIN_A` through `PROOF_CHAIN_F` for one point.
pub fn proof_chain_audit(
    params: &BinomialParams,
    policy: &PrecisionPolicy,
) -> Result<Vec<VerificationRecord>> {
    Ok(audit(params, policy, None)?.records)
}

/// Whether `(k+1)(1 - (k+1)/n) <= np(1-p) + 1 - 2p` holds on its own.
pub fn isolated_variance_step_holds(params: &BinomialParams) -> bool {
    let (k1, q) = next_integer_mean(params);
    let lhs = &k1 * (Rational::one() - q);
    lhs <= params.variance() + Rational::one() - int(2) * params.p()
}

fn next_integer_mean(params: &BinomialParams) -> (Rational, Rational) {
    let k1 = Rational::from_integer(params.mean().floor().to_integer()) + Rational::one();
    let q = &k1 / params.n_rat();
    (k1, q)
}

pub(crate) fn audit(
    params: &BinomialParams,
    policy: &PrecisionPolicy,
    scale: Option<&Rational>,
) -> Result<Audit> {
    if !params.in_core_domain() || params.np_is_integer() {
        return Err(Error::Domain {
            bound: "PROOF_CHAIN",
            constraint: "n >= 2, 1/n <= p <= 1 - 1/n, np not an integer",
        });
    }
    let scaled = |iv: ProbInterval| match scale {
        Some(s) => iv.scale(s),
        None => iv,
    };
    let subject = || Subject::Binomial(params.clone());
    let bits = policy.start_bits;
    let law = BinomialLaw::new(params);
    let mean = params.mean();
    let v = params.variance();
    let tail = law.mean_exceedance_prob();
    let k_next = params.threshold_index();
    let tce = law.tce(k_next)?;
    let excess = &tce - &mean;
    let (k1, q) = next_integer_mean(params);
    let shifted = BinomialParams::new(params.n(), q.clone())?;
    let tce_q = BinomialLaw::new(&shifted).tce(k_next)?;
    let c = &k1 - &mean;
    let inner = &k1 * (Rational::one() - &q);
    let sharp_shift = &v + Rational::one() - int(2) * params.p();

    let mut records = Vec::with_capacity(6);
    records.push(exact_equal(
        "PROOF_CHAIN_A",
        subject(),
        tail.clone(),
        law.mad() / int(2) / &excess,
        bits,
    ));
    records.push(certified_lower(
        "PROOF_CHAIN_B",
        subject(),
        tail,
        false,
        policy,
        |b| {
            let root = interval_sqrt(&ProbInterval::point(&v / int(8), b))?;
            Ok(scaled(root.scale(&excess.recip())))
        },
    )?);
    records.push(exact_upper(
        "PROOF_CHAIN_C",
        subject(),
        tce,
        tce_q.clone(),
        false,
        bits,
    ));
    records.push(super::claims::certified_upper(
        "PROOF_CHAIN_D",
        subject(),
        tce_q,
        true,
        policy,
        |b| {
            Ok(ProbInterval::point(k1.clone(), b)
                .add(&interval_sqrt(&ProbInterval::point(inner.clone(), b))?))
        },
    )?);
    records.push(certified_pair(
        "PROOF_CHAIN_E",
        subject(),
        false,
        policy,
        |b| {
            let left = ProbInterval::point(c.clone(), b)
                .add(&interval_sqrt(&ProbInterval::point(inner.clone(), b))?);
            let right = ProbInterval::from_i64(1, b).add(&interval_sqrt(&ProbInterval::point(
                sharp_shift.clone(),
                b,
            ))?);
            Ok((scaled(left), right))
        },
    )?);
    if params.p() == &Rational::new(1.into(), 2.into()) {
        let b = theorem1_bound(params, true, bits)?;
        records.push(VerificationRecord {
            claim_id: "PROOF_CHAIN_F",
            subject: subject(),
            exact_value: None,
            reference: Some(b.clone()),
            bound_interval: Some(b),
            verdict: crate::verdict::Verdict::Proven,
            margin: Some(super::Margin::Exact(Rational::from_integer(0.into()))),
        });
    } else {
        records.push(certified_pair(
            "PROOF_CHAIN_F",
            subject(),
            false,
            policy,
            |b| {
                Ok((
                    scaled(theorem1_bound(params, false, b)?),
                    theorem1_bound(params, true, b)?,
                ))
            },
        )?);
    }

    let mut notes = Vec::new();
    if !isolated_variance_step_holds(params) {
        notes.push(format!(
            "PROOF_CHAIN_E: variance step alone fails at n={}, p={} (combined link checked instead)",
            params.n(),
            params.p()
        ));
    }
    Ok(Audit { records, notes })
}
