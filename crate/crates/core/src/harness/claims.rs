//! The claim catalog and per-point evaluation of each claim.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::pbinom::poisson_binomial_pmf;
use super::{chain, GridSpec, Margin, Subject, VerificationRecord};
use crate::binomial::{BinomialLaw, BinomialParams};
use crate::bounds::{
    quarter_threshold_check, tce_upper_bound_integer_mean, theorem1_bound, veraar_value, BoundKind,
};
use crate::error::Result;
use crate::interval::{decide_le, escalate, PrecisionPolicy, ProbInterval};
use crate::orders::{conditional_tail_witness, hr_report, lr_report};
use crate::poisson;
use crate::rational::{int, rat, Rational};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimFamily {
    /// One record per `(n, p)` grid point.
    BinomialPoint,
    /// One record per `(n, p, q)` with `p < q` from the grid.
    BinomialPair,
    /// One record per `(n, k)`, scanning `p` across the grid.
    TceSequence,
    /// Six link records per non-integer-mean core-domain point.
    ProofChain,
    /// One record per `lambda`.
    PoissonPoint,
    /// One record per consecutive pair of `lambda` values.
    PoissonPair,
    /// One record per `m` in `1..=stirling_max`.
    Factorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClaimInfo {
    pub id: &'static str,
    pub family: ClaimFamily,
    /// The statement being checked.
    pub statement: &'static str,
}

const fn claim(id: &'static str, family: ClaimFamily, statement: &'static str) -> ClaimInfo {
    ClaimInfo {
        id,
        family,
        statement,
    }
}

use ClaimFamily::*;

pub const CATALOG: &[ClaimInfo] = &[
    claim(
        "VERAAR_EQ1",
        BinomialPoint,
        "P[X >= np] >= (1/4) E|X-np|^2 / Var X, all p in (0,1)",
    ),
    claim(
        "VERAAR_LE_QUARTER",
        BinomialPoint,
        "(1/4) E|X-np|^2 / Var X <= 1/4; equality points are logged",
    ),
    claim(
        "GM_EQ2",
        BinomialPoint,
        "P[X >= np] > 1/4 (strict) for p >= 1/n",
    ),
    claim(
        "RT_EQ3",
        BinomialPoint,
        "P[X >= np] >= min(p, 1/4) for p <= 1/2",
    ),
    claim(
        "THM1_RELAXED",
        BinomialPoint,
        "P[X >= np] >= sqrt(v)/(2 sqrt2 (1 + sqrt(v+1))), v = np(1-p), n >= 2, 1/n <= p <= 1-1/n",
    ),
    claim(
        "THM1_SHARP",
        BinomialPoint,
        "P[X >= np] >= sqrt(v)/(2 sqrt2 (1 + sqrt(v+1-2p))) on the same domain",
    ),
    claim(
        "THM1_SHARP_GE_RELAXED",
        BinomialPoint,
        "the 1-2p form of the main bound dominates the relaxed form",
    ),
    claim(
        "LEMMA_MEDIAN_INT",
        BinomialPoint,
        "np integer => P[X >= np] > 1/2",
    ),
    claim(
        "LEMMA_TCE_INT",
        BinomialPoint,
        "np integer => E[X | X >= np] < np + sqrt(np(1-p))",
    ),
    claim(
        "LEMMA_MAD_LB",
        BinomialPoint,
        "E|X-np|^2 >= np(1-p)/2 for n >= 2, 1/n <= p <= 1-1/n",
    ),
    claim(
        "LEMMA_MAD_UB",
        BinomialPoint,
        "E|X-np|^2 <= np(1-p) (Cauchy-Schwarz)",
    ),
    claim(
        "IDENTITY_4",
        BinomialPoint,
        "E|X-np|/2 = P[X >= np] (E[X | X >= np] - np), exact equality",
    ),
    claim(
        "POSITIVE_PART",
        BinomialPoint,
        "E[max(0, X-np)] = E|X-np|/2, exact equality",
    ),
    claim("MEDIAN_FLOOR", BinomialPoint, "P[X >= floor(np)] >= 1/2"),
    claim(
        "TCE_FACTORIZATION",
        BinomialPoint,
        "sum_{j>=k} j P[X=j] = np P[Bin(n-1,p) >= k-1] for every k, n >= 2",
    ),
    claim(
        "PB_HOMOGENEOUS",
        BinomialPoint,
        "Poisson-binomial law with all p_i = p equals Bin(n, p)",
    ),
    claim(
        "QUARTER_THRESHOLD",
        BinomialPoint,
        "relaxed main bound is >, =, < 1/4 exactly as np(1-p) is >, =, < 8",
    ),
    claim(
        "PROOF_CHAIN",
        ProofChain,
        "each inequality link of the main bound's derivation, np not an integer",
    ),
    claim(
        "ORDER_LR",
        BinomialPair,
        "Bin(n,p) <=_lr Bin(n,q) for p < q",
    ),
    claim(
        "ORDER_HR",
        BinomialPair,
        "Bin(n,p) <=_hr Bin(n,q) for p < q",
    ),
    claim(
        "ORDER_LR_IMPLIES_HR",
        BinomialPair,
        "likelihood-ratio order implies hazard-rate order",
    ),
    claim(
        "CONDITIONAL_TAIL",
        BinomialPair,
        "P[X_p >= k+t | X_p >= k] <= P[X_q >= k+t | X_q >= k] for all k, t",
    ),
    claim(
        "TCE_MONOTONE",
        TceSequence,
        "E[X_p | X_p >= k] is non-decreasing in p",
    ),
    claim(
        "POISSON_S3",
        PoissonPoint,
        "P[P >= lambda] >= 2 e^-(lambda - floor(lambda) + 1) sqrt(lambda) / (1 + sqrt(lambda+1))",
    ),
    claim(
        "POISSON_S3_HALF",
        PoissonPoint,
        "diagnostic: the same bound with the identity's factor 1/2 kept",
    ),
    claim(
        "POISSON_MAD",
        PoissonPoint,
        "E|P-lambda| = 2 lambda e^-lambda lambda^floor / floor!, matched against direct summation",
    ),
    claim(
        "POISSON_TCE_ROUTES",
        PoissonPoint,
        "E[P | P >= k] by lambda P[P>=k-1]/P[P>=k] agrees with direct summation",
    ),
    claim(
        "POISSON_NORMALIZATION",
        PoissonPoint,
        "truncated mass plus remainder bound encloses 1",
    ),
    claim(
        "POISSON_TCE_INT",
        PoissonPoint,
        "lambda integer => E[P | P >= lambda] <= lambda + sqrt(lambda)",
    ),
    claim(
        "POISSON_MEDIAN_INT",
        PoissonPoint,
        "lambda integer => P[P >= lambda] >= 1/2",
    ),
    claim(
        "POISSON_TCE_MONOTONE",
        PoissonPair,
        "E[P_a | P_a >= k] < E[P_b | P_b >= k] for a < b",
    ),
    claim("STIRLING", Factorial, "m! <= e m^(m+1/2) e^-m"),
];

pub fn claim_info(id: &str) -> Option<&'static ClaimInfo> {
    CATALOG.iter().find(|c| c.id.eq_ignore_ascii_case(id))
}

pub(crate) enum Unit {
    Binomial(BinomialParams),
    Pair(BinomialParams, BinomialParams),
    Sequence { n: u64, k: u64, grid: Vec<Rational> },
    Poisson(Rational),
    PoissonPair(Rational, Rational),
    Factorial(u64),
}

pub(crate) fn units(info: &ClaimInfo, grid: &GridSpec) -> Vec<Unit> {
    match info.family {
        BinomialPoint | ProofChain => grid
            .binomial_points()
            .into_iter()
            .map(Unit::Binomial)
            .collect(),
        BinomialPair => {
            let ps = grid.p_values();
            let mut out = Vec::new();
            for n in grid.n_min..=grid.n_max {
                for (i, p) in ps.iter().enumerate() {
                    for q in &ps[i + 1..] {
                        out.push(Unit::Pair(
                            BinomialParams::new(n, p.clone()).expect("grid p"),
                            BinomialParams::new(n, q.clone()).expect("grid q"),
                        ));
                    }
                }
            }
            out
        }
        TceSequence => {
            let ps = grid.p_values();
            (grid.n_min..=grid.n_max)
                .flat_map(|n| {
                    let ps = ps.clone();
                    (0..=n).map(move |k| Unit::Sequence {
                        n,
                        k,
                        grid: ps.clone(),
                    })
                })
                .collect()
        }
        PoissonPoint => grid
            .lambda_grid
            .iter()
            .cloned()
            .map(Unit::Poisson)
            .collect(),
        PoissonPair => grid
            .lambda_grid
            .windows(2)
            .map(|w| Unit::PoissonPair(w[0].clone(), w[1].clone()))
            .collect(),
        Factorial => (1..=grid.stirling_max).map(Unit::Factorial).collect(),
    }
}

pub(crate) struct Context {
    pub policy: PrecisionPolicy,
    pub scale: Option<Rational>,
}

impl Context {
    fn scale_rat(&self, value: Rational) -> Rational {
        match &self.scale {
            Some(s) => value * s,
            None => value,
        }
    }

    fn scale_iv(&self, iv: ProbInterval) -> ProbInterval {
        match &self.scale {
            Some(s) => iv.scale(s),
            None => iv,
        }
    }
}

#[derive(Default)]
pub(crate) struct Outcome {
    pub records: Vec<VerificationRecord>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn one(record: VerificationRecord) -> Self {
        Self {
            records: vec![record],
            notes: Vec::new(),
        }
    }
}

fn verdict_of(holds: bool) -> Verdict {
    if holds {
        Verdict::Proven
    } else {
        Verdict::Violated
    }
}

/// Exact value against an exact bound: `exact >= bound` (or `>`).
pub(crate) fn exact_lower(
    claim_id: &'static str,
    subject: Subject,
    exact: Rational,
    bound: Rational,
    strict: bool,
    bits: u32,
) -> VerificationRecord {
    let holds = if strict {
        exact > bound
    } else {
        exact >= bound
    };
    let margin = &exact - &bound;
    VerificationRecord {
        claim_id,
        subject,
        exact_value: Some(exact),
        reference: None,
        bound_interval: Some(ProbInterval::point(bound, bits)),
        verdict: verdict_of(holds),
        margin: Some(Margin::Exact(margin)),
    }
}

/// Exact value against an exact upper bound: `exact <= bound` (or `<`).
pub(crate) fn exact_upper(
    claim_id: &'static str,
    subject: Subject,
    exact: Rational,
    bound: Rational,
    strict: bool,
    bits: u32,
) -> VerificationRecord {
    let holds = if strict {
        exact < bound
    } else {
        exact <= bound
    };
    let margin = &bound - &exact;
    VerificationRecord {
        claim_id,
        subject,
        exact_value: Some(exact),
        reference: None,
        bound_interval: Some(ProbInterval::point(bound, bits)),
        verdict: verdict_of(holds),
        margin: Some(Margin::Exact(margin)),
    }
}

/// Exact equality; the margin is the signed difference.
pub(crate) fn exact_equal(
    claim_id: &'static str,
    subject: Subject,
    left: Rational,
    right: Rational,
    bits: u32,
) -> VerificationRecord {
    let margin = &left - &right;
    VerificationRecord {
        claim_id,
        subject,
        verdict: verdict_of(margin.is_zero()),
        exact_value: Some(left),
        reference: None,
        bound_interval: Some(ProbInterval::point(right, bits)),
        margin: Some(Margin::Exact(margin)),
    }
}

/// `exact >= bound` (or `>`), with the bound an enclosure refined on demand.
pub(crate) fn certified_lower(
    claim_id: &'static str,
    subject: Subject,
    exact: Rational,
    strict: bool,
    policy: &PrecisionPolicy,
    bound_at: impl Fn(u32) -> Result<ProbInterval>,
) -> Result<VerificationRecord> {
    let out = escalate(policy, |bits| {
        let bound = bound_at(bits)?;
        let point = ProbInterval::point(exact.clone(), bits);
        Ok((decide_le(&bound, &point, strict), bound))
    })?;
    let margin = &exact - out.value.hi();
    Ok(VerificationRecord {
        claim_id,
        subject,
        exact_value: Some(exact),
        reference: None,
        bound_interval: Some(out.value),
        verdict: out.verdict,
        margin: Some(Margin::Certified(margin)),
    })
}

/// `exact <= bound` (or `<`), with the bound an enclosure refined on demand.
pub(crate) fn certified_upper(
    claim_id: &'static str,
    subject: Subject,
    exact: Rational,
    strict: bool,
    policy: &PrecisionPolicy,
    bound_at: impl Fn(u32) -> Result<ProbInterval>,
) -> Result<VerificationRecord> {
    let out = escalate(policy, |bits| {
        let bound = bound_at(bits)?;
        let point = ProbInterval::point(exact.clone(), bits);
        Ok((decide_le(&point, &bound, strict), bound))
    })?;
    let margin = out.value.lo() - &exact;
    Ok(VerificationRecord {
        claim_id,
        subject,
        exact_value: Some(exact),
        reference: None,
        bound_interval: Some(out.value),
        verdict: out.verdict,
        margin: Some(Margin::Certified(margin)),
    })
}

/// `left <= right` (or `<`) between two enclosures; `left` is reported as the
/// reference side and `right` as the bound.
pub(crate) fn certified_pair(
    claim_id: &'static str,
    subject: Subject,
    strict: bool,
    policy: &PrecisionPolicy,
    sides_at: impl Fn(u32) -> Result<(ProbInterval, ProbInterval)>,
) -> Result<VerificationRecord> {
    let out = escalate(policy, |bits| {
        let (left, right) = sides_at(bits)?;
        Ok((decide_le(&left, &right, strict), (left, right)))
    })?;
    let (left, right) = out.value;
    let margin = right.lo() - left.hi();
    Ok(VerificationRecord {
        claim_id,
        subject,
        exact_value: None,
        reference: Some(left),
        bound_interval: Some(right),
        verdict: out.verdict,
        margin: Some(Margin::Certified(margin)),
    })
}

fn flag_record(claim_id: &'static str, subject: Subject, holds: bool) -> VerificationRecord {
    VerificationRecord {
        claim_id,
        subject,
        exact_value: None,
        reference: None,
        bound_interval: None,
        verdict: verdict_of(holds),
        margin: None,
    }
}

pub(crate) fn evaluate(info: &ClaimInfo, unit: &Unit, ctx: &Context) -> Result<Outcome> {
    match unit {
        Unit::Binomial(params) if info.family == ProofChain => chain_outcome(params, ctx),
        Unit::Binomial(params) => binomial_point(info.id, params, ctx),
        Unit::Pair(left, right) => Ok(Outcome::one(binomial_pair(info.id, left, right))),
        Unit::Sequence { n, k, grid } => Ok(Outcome::one(tce_sequence(info.id, *n, *k, grid)?)),
        Unit::Poisson(lambda) => poisson_point(info.id, lambda, ctx),
        Unit::PoissonPair(a, b) => Ok(Outcome::one(poisson_pair(info.id, a, b, ctx)?)),
        Unit::Factorial(m) => Ok(Outcome::one(stirling(info.id, *m, ctx)?)),
    }
}

fn chain_outcome(params: &BinomialParams, ctx: &Context) -> Result<Outcome> {
    let subject = Subject::Binomial(params.clone());
    if !params.in_core_domain() || params.np_is_integer() {
        return Ok(Outcome::one(VerificationRecord::skipped(
            "PROOF_CHAIN",
            subject,
        )));
    }
    let audit = chain::audit(params, &ctx.policy, ctx.scale.as_ref())?;
    Ok(Outcome {
        records: audit.records,
        notes: audit.notes,
    })
}

fn binomial_point(id: &'static str, params: &BinomialParams, ctx: &Context) -> Result<Outcome> {
    let subject = Subject::Binomial(params.clone());
    let bits = ctx.policy.start_bits;
    let skip = || {
        Ok(Outcome::one(VerificationRecord::skipped(
            id,
            subject.clone(),
        )))
    };
    let law = BinomialLaw::new(params);
    let record = match id {
        "VERAAR_EQ1" => exact_lower(
            id,
            subject,
            law.mean_exceedance_prob(),
            ctx.scale_rat(veraar_value(&law)),
            false,
            bits,
        ),
        "VERAAR_LE_QUARTER" => {
            let value = veraar_value(&law);
            let record = exact_upper(id, subject, value.clone(), rat(1, 4), false, bits);
            let notes = if value == rat(1, 4) {
                vec![format!(
                    "VERAAR_LE_QUARTER: equality 1/4 at n={}, p={}",
                    params.n(),
                    params.p()
                )]
            } else {
                Vec::new()
            };
            return Ok(Outcome {
                records: vec![record],
                notes,
            });
        }
        "GM_EQ2" => {
            if !BoundKind::GreenbergMohriEq2.applies_to(params) {
                return skip();
            }
            exact_lower(
                id,
                subject,
                law.mean_exceedance_prob(),
                ctx.scale_rat(rat(1, 4)),
                true,
                bits,
            )
        }
        "RT_EQ3" => {
            if !BoundKind::RigolletTongEq3.applies_to(params) {
                return skip();
            }
            let bound = params.p().clone().min(rat(1, 4));
            exact_lower(
                id,
                subject,
                law.mean_exceedance_prob(),
                ctx.scale_rat(bound),
                false,
                bits,
            )
        }
        "THM1_RELAXED" | "THM1_SHARP" => {
            if !params.in_core_domain() {
                return skip();
            }
            let sharp = id == "THM1_SHARP";
            certified_lower(
                id,
                subject,
                law.mean_exceedance_prob(),
                false,
                &ctx.policy,
                |b| Ok(ctx.scale_iv(theorem1_bound(params, sharp, b)?)),
            )?
        }
        "THM1_SHARP_GE_RELAXED" => {
            if !params.in_core_domain() {
                return skip();
            }
            if params.p() == &rat(1, 2) {
                // 1 - 2p = 0: the two expressions coincide
                let b = theorem1_bound(params, true, bits)?;
                VerificationRecord {
                    claim_id: id,
                    subject,
                    exact_value: None,
                    reference: Some(b.clone()),
                    bound_interval: Some(b),
                    verdict: Verdict::Proven,
                    margin: Some(Margin::Exact(Rational::zero())),
                }
            } else {
                certified_pair(id, subject, false, &ctx.policy, |b| {
                    Ok((
                        ctx.scale_iv(theorem1_bound(params, false, b)?),
                        theorem1_bound(params, true, b)?,
                    ))
                })?
            }
        }
        "LEMMA_MEDIAN_INT" => {
            if !params.np_is_integer() {
                return skip();
            }
            exact_lower(
                id,
                subject,
                law.mean_exceedance_prob(),
                ctx.scale_rat(rat(1, 2)),
                true,
                bits,
            )
        }
        "LEMMA_TCE_INT" => {
            if !params.np_is_integer() {
                return skip();
            }
            let tce = law.tce(params.threshold_index())?;
            certified_upper(id, subject, tce, true, &ctx.policy, |b| {
                tce_upper_bound_integer_mean(params, b)
            })?
        }
        "LEMMA_MAD_LB" => {
            if !params.in_core_domain() {
                return skip();
            }
            let mad = law.mad();
            exact_lower(
                id,
                subject,
                &mad * &mad,
                ctx.scale_rat(params.variance() / int(2)),
                false,
                bits,
            )
        }
        "LEMMA_MAD_UB" => {
            let mad = law.mad();
            exact_upper(id, subject, &mad * &mad, params.variance(), false, bits)
        }
        "IDENTITY_4" => {
            let k = params.threshold_index();
            let excess = law.tce(k)? - params.mean();
            exact_equal(
                id,
                subject,
                law.mad() / int(2),
                law.mean_exceedance_prob() * excess,
                bits,
            )
        }
        "POSITIVE_PART" => exact_equal(
            id,
            subject,
            law.positive_part_mean(&params.mean()),
            law.mad() / int(2),
            bits,
        ),
        "MEDIAN_FLOOR" => exact_lower(
            id,
            subject,
            law.tail(params.floor_mean()),
            ctx.scale_rat(rat(1, 2)),
            false,
            bits,
        ),
        "TCE_FACTORIZATION" => {
            if params.n() < 2 {
                return skip();
            }
            let smaller =
                BinomialLaw::new(&BinomialParams::new(params.n() - 1, params.p().clone())?);
            let mean = params.mean();
            let n = params.n() as i64;
            let all_agree = (0..=n + 1).all(|k| law.upper_moment(k) == &mean * smaller.tail(k - 1));
            let k = params.threshold_index();
            let mut record = exact_equal(
                id,
                subject,
                law.upper_moment(k),
                &mean * smaller.tail(k - 1),
                bits,
            );
            if !all_agree {
                record.verdict = Verdict::Violated;
            }
            record
        }
        "PB_HOMOGENEOUS" => {
            let probs = vec![params.p().clone(); params.n() as usize];
            let pb = poisson_binomial_pmf(&probs)?;
            let agree = (0..=params.n())
                .all(|k| pb.pmf_table[k as usize] == law.pmf(k as i64).expect("k in support"));
            flag_record(id, subject, agree)
        }
        "QUARTER_THRESHOLD" => {
            if !params.in_core_domain() {
                return skip();
            }
            quarter_record(id, subject, params, ctx)?
        }
        other => unreachable!("{other} is not a binomial point claim"),
    };
    Ok(Outcome::one(record))
}

/// Escalates until the relaxed main bound is certified on the side of 1/4
/// that the exact comparison of `np(1-p)` with 8 predicts.
pub(crate) fn quarter_agreement(
    params: &BinomialParams,
    policy: &PrecisionPolicy,
    scale: Option<&Rational>,
) -> Result<(Ordering, Verdict, ProbInterval)> {
    let side = quarter_threshold_check(params)?;
    let quarter = rat(1, 4);
    let out = escalate(policy, |bits| {
        let mut b = theorem1_bound(params, false, bits)?;
        if let Some(s) = scale {
            b = b.scale(s);
        }
        let decision = match side {
            Ordering::Greater if b.lo() > &quarter => Some(true),
            Ordering::Greater if b.hi() <= &quarter => Some(false),
            Ordering::Less if b.hi() < &quarter => Some(true),
            Ordering::Less if b.lo() >= &quarter => Some(false),
            Ordering::Equal => Some(b.contains(&quarter)),
            _ => None,
        };
        Ok((decision, b))
    })?;
    Ok((side, out.verdict, out.value))
}

fn quarter_record(
    id: &'static str,
    subject: Subject,
    params: &BinomialParams,
    ctx: &Context,
) -> Result<VerificationRecord> {
    let (side, verdict, b) = quarter_agreement(params, &ctx.policy, ctx.scale.as_ref())?;
    let quarter = rat(1, 4);
    let margin = match side {
        Ordering::Greater => b.lo() - &quarter,
        Ordering::Less => &quarter - b.hi(),
        Ordering::Equal => Rational::zero(),
    };
    Ok(VerificationRecord {
        claim_id: id,
        subject,
        exact_value: Some(params.variance()),
        reference: None,
        bound_interval: Some(b),
        verdict,
        margin: Some(Margin::Certified(margin)),
    })
}

fn binomial_pair(
    id: &'static str,
    left: &BinomialParams,
    right: &BinomialParams,
) -> VerificationRecord {
    let subject = Subject::BinomialPair {
        n: left.n(),
        p: left.p().clone(),
        q: right.p().clone(),
    };
    let x = BinomialLaw::new(left);
    let y = BinomialLaw::new(right);
    let holds = match id {
        "ORDER_LR" => lr_report(&x, &y).holds,
        "ORDER_HR" => hr_report(&x, &y).holds,
        "ORDER_LR_IMPLIES_HR" => !lr_report(&x, &y).holds || hr_report(&x, &y).holds,
        "CONDITIONAL_TAIL" => (0..=x.n()).all(|k| conditional_tail_witness(&x, &y, k).is_none()),
        other => unreachable!("{other} is not a pair claim"),
    };
    flag_record(id, subject, holds)
}

fn tce_sequence(id: &'static str, n: u64, k: u64, grid: &[Rational]) -> Result<VerificationRecord> {
    let report = crate::orders::check_tce_monotone_in_p(n, k, grid)?;
    let mut record = flag_record(id, Subject::TceSequence { n, k }, report.is_monotone());
    // smallest step along the sequence
    let values: Vec<&Rational> = report
        .points
        .iter()
        .filter_map(|(_, v)| v.as_ref())
        .collect();
    let min_step = values.windows(2).map(|w| w[1] - w[0]).min();
    record.margin = min_step.map(Margin::Exact);
    Ok(record)
}

fn poisson_point(id: &'static str, lambda: &Rational, ctx: &Context) -> Result<Outcome> {
    let subject = Subject::Poisson(lambda.clone());
    let policy = &ctx.policy;
    let threshold = poisson::PoissonParams::with_default_epsilon(lambda.clone())?.threshold_index();
    let integer_lambda = lambda
        .is_integer()
        .then(|| lambda.to_integer().to_u64().expect("lambda fits"));
    let record = match id {
        "POISSON_S3" | "POISSON_S3_HALF" => {
            let halved = id == "POISSON_S3_HALF";
            certified_pair(id, subject, false, policy, |bits| {
                let bound = if halved {
                    poisson::halved_bound_at(lambda, bits)?
                } else {
                    poisson::theorem_bound_at(lambda, bits)?
                };
                Ok((
                    ctx.scale_iv(bound),
                    poisson::tail_at(lambda, threshold, bits),
                ))
            })?
        }
        "POISSON_MAD" => {
            let epsilon = poisson::default_epsilon();
            let out = escalate(policy, |bits| {
                let closed = poisson::mad_at(lambda, bits);
                let direct = poisson::mad_direct_at(lambda, bits);
                let decision = if !closed.intersects(&direct) {
                    Some(false)
                } else if closed.width() <= epsilon {
                    Some(true)
                } else {
                    None
                };
                Ok((decision, (closed, direct)))
            })?;
            let (closed, direct) = out.value;
            VerificationRecord {
                claim_id: id,
                subject,
                exact_value: None,
                reference: Some(direct),
                bound_interval: Some(closed),
                verdict: out.verdict,
                margin: None,
            }
        }
        "POISSON_TCE_ROUTES" => {
            let out = escalate(policy, |bits| {
                let factored = poisson::tce_at(lambda, threshold, bits)?;
                let direct = poisson::tce_direct_at(lambda, threshold, bits)?;
                Ok((
                    factored.intersects(&direct).then_some(true).or(Some(false)),
                    (factored, direct),
                ))
            })?;
            let (factored, direct) = out.value;
            VerificationRecord {
                claim_id: id,
                subject,
                exact_value: None,
                reference: Some(direct),
                bound_interval: Some(factored),
                verdict: out.verdict,
                margin: None,
            }
        }
        "POISSON_NORMALIZATION" => {
            let mass = poisson::total_mass_at(lambda, policy.start_bits);
            VerificationRecord {
                claim_id: id,
                subject,
                exact_value: Some(Rational::one()),
                reference: None,
                verdict: verdict_of(mass.contains(&Rational::one())),
                bound_interval: Some(mass),
                margin: None,
            }
        }
        "POISSON_TCE_INT" => {
            let Some(m) = integer_lambda else {
                return Ok(Outcome::one(VerificationRecord::skipped(id, subject)));
            };
            let out = poisson::poisson_integer_mean_tce_check(m, policy)?;
            let (tce, bound) = out.value;
            VerificationRecord {
                claim_id: id,
                subject,
                exact_value: None,
                margin: Some(Margin::Certified(bound.lo() - tce.hi())),
                reference: Some(tce),
                bound_interval: Some(bound),
                verdict: out.verdict,
            }
        }
        "POISSON_MEDIAN_INT" => {
            let Some(m) = integer_lambda else {
                return Ok(Outcome::one(VerificationRecord::skipped(id, subject)));
            };
            let out = poisson::poisson_median_check(m, policy)?;
            let half = rat(1, 2);
            let half = ctx.scale_rat(half);
            let verdict = if ctx.scale.is_some() {
                verdict_of(out.value.lo() >= &half)
            } else {
                out.verdict
            };
            VerificationRecord {
                claim_id: id,
                subject,
                exact_value: None,
                margin: Some(Margin::Certified(out.value.lo() - &half)),
                bound_interval: Some(ProbInterval::point(half, out.bits)),
                reference: Some(out.value),
                verdict,
            }
        }
        other => unreachable!("{other} is not a Poisson point claim"),
    };
    Ok(Outcome::one(record))
}

fn poisson_pair(
    id: &'static str,
    a: &Rational,
    b: &Rational,
    ctx: &Context,
) -> Result<VerificationRecord> {
    debug_assert_eq!(id, "POISSON_TCE_MONOTONE");
    let k = crate::rational::ceil_int(a)
        .to_u64()
        .expect("lambda fits")
        .max(1);
    let subject = Subject::PoissonPair {
        a: a.clone(),
        b: b.clone(),
        k,
    };
    certified_pair(id, subject, true, &ctx.policy, |bits| {
        Ok((poisson::tce_at(a, k, bits)?, poisson::tce_at(b, k, bits)?))
    })
}

fn stirling(id: &'static str, m: u64, ctx: &Context) -> Result<VerificationRecord> {
    let out = poisson::stirling_check(m, &ctx.policy)?;
    let (left, right) = out.value;
    let right = ctx.scale_iv(right);
    let verdict = if ctx.scale.is_some() {
        Verdict::from_decision(decide_le(&left, &right, false))
    } else {
        out.verdict
    };
    Ok(VerificationRecord {
        claim_id: id,
        subject: Subject::Factorial(m),
        exact_value: Some(Rational::from_integer((1..=m).map(BigInt::from).product())),
        margin: Some(Margin::Certified(right.lo() - left.hi())),
        reference: Some(left),
        bound_interval: Some(right),
        verdict,
    })
}
