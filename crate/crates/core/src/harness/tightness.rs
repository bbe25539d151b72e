//! How close each binomial bound comes to the exact mean-exceedance
//! probability across a grid.

use num_traits::Zero;

use super::claims::quarter_agreement;
use super::GridSpec;
use crate::binomial::{BinomialLaw, BinomialParams};
use crate::bounds::{evaluate, BoundKind};
use crate::error::Result;
use crate::interval::ProbInterval;
use crate::rational::Rational;
use crate::verdict::Verdict;

/// Bounds that compete for the best-bound flag. The sharp variant of the
/// main bound is reported but does not compete.
pub const COMPARED: [BoundKind; 4] = [
    BoundKind::VeraarEq1,
    BoundKind::GreenbergMohriEq2,
    BoundKind::RigolletTongEq3,
    BoundKind::Theorem1,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundColumn {
    pub kind: BoundKind,
    /// `None` outside the bound's domain.
    pub enclosure: Option<ProbInterval>,
    /// `hi(bound) / exact`.
    pub ratio_hi: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessRow {
    pub params: BinomialParams,
    pub exact_tail: Rational,
    /// One column per kind in [`BoundKind::ALL`] except the Poisson bound.
    pub columns: Vec<BoundColumn>,
    /// Largest of [`COMPARED`]; when two enclosures overlap the later kind wins.
    pub best: Option<BoundKind>,
}

impl TightnessRow {
    pub fn column(&self, kind: BoundKind) -> Option<&BoundColumn> {
        self.columns.iter().find(|c| c.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessReport {
    pub rows: Vec<TightnessRow>,
    /// Core-domain points where the relaxed main bound's position relative to
    /// 1/4 disagrees with `np(1-p)` against 8.
    pub quarter_mismatches: Vec<BinomialParams>,
    pub quarter_inconclusive: usize,
}

pub fn tightness_report(grid: &GridSpec) -> Result<TightnessReport> {
    let bits = grid.policy.start_bits;
    let mut rows = Vec::new();
    let mut quarter_mismatches = Vec::new();
    let mut quarter_inconclusive = 0;
    for params in grid.binomial_points() {
        let law = BinomialLaw::new(&params);
        let exact_tail = law.mean_exceedance_prob();
        let columns: Vec<BoundColumn> = BoundKind::ALL
            .iter()
            .filter(|k| **k != BoundKind::PoissonS3)
            .map(|&kind| {
                let enclosure = evaluate(kind, &params, bits).ok();
                let ratio_hi = enclosure.as_ref().map(|iv| iv.hi() / &exact_tail);
                BoundColumn {
                    kind,
                    enclosure,
                    ratio_hi,
                }
            })
            .collect();
        let mut best: Option<(BoundKind, &ProbInterval)> = None;
        for kind in COMPARED {
            let Some(iv) = columns
                .iter()
                .find(|c| c.kind == kind)
                .and_then(|c| c.enclosure.as_ref())
            else {
                continue;
            };
            if best.is_none_or(|(_, cur)| iv.hi() >= cur.lo()) {
                best = Some((kind, iv));
            }
        }
        let best = best.map(|(k, _)| k);
        if params.in_core_domain() {
            match quarter_agreement(&params, &grid.policy, None)?.1 {
                Verdict::Proven => {}
                Verdict::Inconclusive => quarter_inconclusive += 1,
                _ => quarter_mismatches.push(params.clone()),
            }
        }
        debug_assert!(!exact_tail.is_zero());
        rows.push(TightnessRow {
            params,
            exact_tail,
            columns,
            best,
        });
    }
    Ok(TightnessReport {
        rows,
        quarter_mismatches,
        quarter_inconclusive,
    })
}
