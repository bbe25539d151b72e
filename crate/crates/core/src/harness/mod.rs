//! Grid sweeps over the claim catalog, producing one [`VerificationRecord`]
//! per claim and parameter point.

mod chain;
mod claims;
pub mod pbinom;
pub mod report;
mod tightness;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::binomial::BinomialParams;
use crate::error::{Error, Result};
use crate::interval::{PrecisionPolicy, ProbInterval};
use crate::rational::Rational;
use crate::verdict::Verdict;

pub use chain::{isolated_variance_step_holds, proof_chain_audit};
pub use claims::{claim_info, ClaimFamily, ClaimInfo, CATALOG};
pub use pbinom::{
    explore_mad_ratio, poisson_binomial_pmf, ExploreReport, ExploreRow, ExploreSpec,
    PoissonBinomialLaw,
};
pub use tightness::{tightness_report, BoundColumn, TightnessReport, TightnessRow, COMPARED};

/// Parameter grid for sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub n_min: u64,
    pub n_max: u64,
    /// `p` ranges over reduced `a/b` with `2 <= b <= p_den_cap`.
    pub p_den_cap: u64,
    pub lambda_grid: Vec<Rational>,
    /// Factorial claims run for `m` in `1..=stirling_max`.
    pub stirling_max: u64,
    pub policy: PrecisionPolicy,
}

impl GridSpec {
    pub fn new(n_min: u64, n_max: u64, p_den_cap: u64) -> Result<Self> {
        if n_min == 0 || n_min > n_max {
            return Err(Error::InvalidParams(format!(
                "need 1 <= n_min <= n_max, got [{n_min}, {n_max}]"
            )));
        }
        if p_den_cap < 2 {
            return Err(Error::InvalidParams(
                "p denominator cap must be at least 2".into(),
            ));
        }
        Ok(Self {
            n_min,
            n_max,
            p_den_cap,
            lambda_grid: Vec::new(),
            stirling_max: 0,
            policy: PrecisionPolicy::default(),
        })
    }

    pub fn with_lambda_grid(mut self, lambdas: Vec<Rational>) -> Self {
        let mut lambdas = lambdas;
        lambdas.sort();
        lambdas.dedup();
        self.lambda_grid = lambdas;
        self
    }

    pub fn with_stirling_max(mut self, m: u64) -> Self {
        self.stirling_max = m;
        self
    }

    pub fn with_policy(mut self, policy: PrecisionPolicy) -> Self {
        self.policy = policy;
        self
    }

    /// Reduced fractions in `(0, 1)` with denominator at most the cap, by value.
    pub fn p_values(&self) -> Vec<Rational> {
        reduced_fractions(self.p_den_cap)
    }

    /// All `(n, p)` points, ordered by `n` then `p`.
    pub fn binomial_points(&self) -> Vec<BinomialParams> {
        let ps = self.p_values();
        (self.n_min..=self.n_max)
            .flat_map(|n| {
                ps.iter()
                    .map(move |p| BinomialParams::new(n, p.clone()).expect("grid p lies in (0,1)"))
            })
            .collect()
    }
}

/// Reduced fractions `a/b` in `(0, 1)` with `b <= den_cap`, sorted by value.
pub fn reduced_fractions(den_cap: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (2..=den_cap)
        .flat_map(|b| {
            (1..b)
                .filter(move |a| a.gcd(&b) == 1)
                .map(move |a| Rational::new(BigInt::from(a), BigInt::from(b)))
        })
        .collect();
    out.sort();
    out
}

/// Positive rationals `a/b` with `b <= den_cap` and value at most `max`, sorted.
pub fn lambda_grid(den_cap: u64, max: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=den_cap)
        .flat_map(|b| {
            (1..=max * b)
                .filter(move |a| a.gcd(&b) == 1)
                .map(move |a| Rational::new(BigInt::from(a), BigInt::from(b)))
        })
        .collect();
    out.sort();
    out
}

/// What a record is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Binomial(BinomialParams),
    BinomialPair { n: u64, p: Rational, q: Rational },
    TceSequence { n: u64, k: u64 },
    Poisson(Rational),
    PoissonPair { a: Rational, b: Rational, k: u64 },
    Factorial(u64),
}

/// Slack of a claim in its own direction; nonnegative whenever it is proven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Margin {
    /// Both sides exact rationals.
    Exact(Rational),
    /// Computed from enclosure endpoints; a guaranteed lower bound on the slack.
    Certified(Rational),
}

impl Margin {
    pub fn value(&self) -> &Rational {
        match self {
            Margin::Exact(v) | Margin::Certified(v) => v,
        }
    }
}

/// One grid point's outcome for one claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationRecord {
    pub claim_id: &'static str,
    pub subject: Subject,
    pub exact_value: Option<Rational>,
    /// Enclosure standing in for the exact side when it is irrational.
    pub reference: Option<ProbInterval>,
    pub bound_interval: Option<ProbInterval>,
    pub verdict: Verdict,
    pub margin: Option<Margin>,
}

impl VerificationRecord {
    pub(crate) fn skipped(claim_id: &'static str, subject: Subject) -> Self {
        Self {
            claim_id,
            subject,
            exact_value: None,
            reference: None,
            bound_interval: None,
            verdict: Verdict::DomainSkipped,
            margin: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub counts: BTreeMap<Verdict, usize>,
    /// Smallest margin over records that carry one, with its record index.
    pub min_margin: Option<(Rational, usize)>,
    /// Reportable facts that are not verdicts (boundary equalities and the like).
    pub observations: Vec<String>,
}

impl SweepSummary {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.counts.get(&verdict).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub records: Vec<VerificationRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn violated(&self) -> usize {
        self.summary.count(Verdict::Violated)
    }

    pub fn inconclusive(&self) -> usize {
        self.summary.count(Verdict::Inconclusive)
    }

    pub fn records_for<'a>(
        &'a self,
        claim_id: &'a str,
    ) -> impl Iterator<Item = &'a VerificationRecord> + 'a {
        self.records.iter().filter(move |r| r.claim_id == claim_id)
    }

    fn extend(&mut self, other: SweepReport) {
        let offset = self.records.len();
        self.records.extend(other.records);
        for (verdict, count) in other.summary.counts {
            *self.summary.counts.entry(verdict).or_default() += count;
        }
        if let Some((m, i)) = other.summary.min_margin {
            if self
                .summary
                .min_margin
                .as_ref()
                .is_none_or(|(cur, _)| &m < cur)
            {
                self.summary.min_margin = Some((m, i + offset));
            }
        }
        self.summary.observations.extend(other.summary.observations);
    }
}

/// Run-time knobs that do not change what a claim means.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 or 1 evaluates sequentially.
    pub jobs: usize,
    /// Multiplies every bound before comparison. Fault injection for testing
    /// the violation path; `None` in normal runs.
    pub bound_scale: Option<Rational>,
}

/// Sweeps one claim (or `ALL`) over the grid.
pub fn run_claim_sweep(
    grid: &GridSpec,
    claim_id: &str,
    options: &RunOptions,
) -> Result<SweepReport> {
    if claim_id.eq_ignore_ascii_case("ALL") {
        let mut report = SweepReport::default();
        for info in CATALOG {
            report.extend(run_one(grid, info, options)?);
        }
        return Ok(report);
    }
    let info = claim_info(claim_id).ok_or_else(|| Error::UnknownClaim {
        id: claim_id.to_string(),
        catalog: CATALOG.iter().map(|c| c.id).collect::<Vec<_>>().join(", "),
    })?;
    run_one(grid, info, options)
}

fn run_one(grid: &GridSpec, info: &ClaimInfo, options: &RunOptions) -> Result<SweepReport> {
    let units = claims::units(info, grid);
    let ctx = claims::Context {
        policy: grid.policy,
        scale: options.bound_scale.clone(),
    };
    let eval = |unit: &claims::Unit| claims::evaluate(info, unit, &ctx);
    let outcomes: Vec<Result<claims::Outcome>> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| units.par_iter().map(eval).collect())
    } else {
        units.iter().map(eval).collect()
    };
    let mut report = SweepReport::default();
    for outcome in outcomes {
        let outcome = outcome?;
        report.records.extend(outcome.records);
        report.summary.observations.extend(outcome.notes);
    }
    summarize(&mut report);
    Ok(report)
}

fn summarize(report: &mut SweepReport) {
    for (i, record) in report.records.iter().enumerate() {
        *report.summary.counts.entry(record.verdict).or_default() += 1;
        if let Some(margin) = &record.margin {
            let m = margin.value();
            if report
                .summary
                .min_margin
                .as_ref()
                .is_none_or(|(cur, _)| m < cur)
            {
                report.summary.min_margin = Some((m.clone(), i));
            }
        }
    }
}
