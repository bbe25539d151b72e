//! CSV and plain-text renderings of sweep, tightness and exploration results.
//!
//! Exact rationals render as terminating decimals or `num/den`. Enclosures
//! render as `lo..hi` with each endpoint rounded outward to
//! [`INTERVAL_DIGITS`] significant digits.

use std::io::{self, Write};

use super::{ExploreReport, Margin, Subject, SweepReport, TightnessReport, VerificationRecord};
use crate::interval::ProbInterval;
use crate::rational::{render_approx, render_decimal, render_exact, Rational, Rounding};

pub const INTERVAL_DIGITS: u32 = 20;

pub const OBSERVATIONS_SHOWN: usize = 5;

pub const SWEEP_HEADER: &str = "claim_id,n,p,exact,bound_lo,bound_hi,verdict,margin,dist";

fn lower(q: &Rational, exact: bool) -> String {
    if exact {
        render_exact(q)
    } else {
        render_decimal(q, INTERVAL_DIGITS, Rounding::Down)
    }
}

fn upper(q: &Rational, exact: bool) -> String {
    if exact {
        render_exact(q)
    } else {
        render_decimal(q, INTERVAL_DIGITS, Rounding::Up)
    }
}

/// `lo..hi`, or the exact value when the enclosure is a single point.
pub fn render_interval(iv: &ProbInterval) -> String {
    if iv.is_point() {
        render_exact(iv.lo())
    } else {
        iv.render(INTERVAL_DIGITS)
    }
}

fn subject_columns(subject: &Subject) -> (String, String, &'static str) {
    match subject {
        Subject::Binomial(params) => (params.n().to_string(), render_exact(params.p()), "binomial"),
        Subject::BinomialPair { n, p, q } => (
            n.to_string(),
            format!("{}|{}", render_exact(p), render_exact(q)),
            "binomial-pair",
        ),
        Subject::TceSequence { n, k } => (n.to_string(), format!("k={k}"), "binomial"),
        Subject::Poisson(lambda) => (String::new(), render_exact(lambda), "poisson"),
        Subject::PoissonPair { a, b, k } => (
            format!("k={k}"),
            format!("{}|{}", render_exact(a), render_exact(b)),
            "poisson-pair",
        ),
        Subject::Factorial(m) => (m.to_string(), String::new(), "factorial"),
    }
}

fn record_row(record: &VerificationRecord) -> String {
    let (n, p, dist) = subject_columns(&record.subject);
    let exact = match (&record.exact_value, &record.reference) {
        (Some(v), _) => render_exact(v),
        (None, Some(iv)) => render_interval(iv),
        (None, None) => String::new(),
    };
    let (lo, hi) = match &record.bound_interval {
        Some(iv) => {
            let point = iv.is_point();
            (lower(iv.lo(), point), upper(iv.hi(), point))
        }
        None => (String::new(), String::new()),
    };
    let margin = match &record.margin {
        Some(Margin::Exact(m)) => render_exact(m),
        Some(Margin::Certified(m)) => render_decimal(m, INTERVAL_DIGITS, Rounding::Down),
        None => String::new(),
    };
    format!(
        "{},{n},{p},{exact},{lo},{hi},{},{margin},{dist}",
        record.claim_id, record.verdict
    )
}

pub fn write_sweep_csv(out: &mut impl Write, report: &SweepReport) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for record in &report.records {
        writeln!(out, "{}", record_row(record))?;
    }
    Ok(())
}

pub fn write_sweep_plain(out: &mut impl Write, report: &SweepReport) -> io::Result<()> {
    for record in &report.records {
        let (n, p, dist) = subject_columns(&record.subject);
        let mut line = format!(
            "{:<24} {:<14} {dist} n={n} p={p}",
            record.claim_id,
            record.verdict.as_str()
        );
        if let Some(m) = &record.margin {
            line.push_str(&format!(" margin={}", render_approx(m.value())));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Verdict counts, the smallest margin, and observations, one per line.
pub fn write_summary(out: &mut impl Write, report: &SweepReport) -> io::Result<()> {
    let counts: Vec<String> = report
        .summary
        .counts
        .iter()
        .map(|(v, c)| format!("{v}={c}"))
        .collect();
    writeln!(out, "records={} {}", report.records.len(), counts.join(" "))?;
    if let Some((m, i)) = &report.summary.min_margin {
        let record = &report.records[*i];
        let (n, p, _) = subject_columns(&record.subject);
        writeln!(
            out,
            "min_margin={} at {} n={n} p={p}",
            render_decimal(m, 12, Rounding::Down),
            record.claim_id
        )?;
    }
    // observations sharing a `TAG:` prefix are capped at OBSERVATIONS_SHOWN each
    let mut shown: std::collections::BTreeMap<&str, usize> = Default::default();
    for note in &report.summary.observations {
        let tag = note.split(':').next().unwrap_or_default();
        let seen = shown.entry(tag).or_default();
        *seen += 1;
        if *seen <= OBSERVATIONS_SHOWN {
            writeln!(out, "observation: {note}")?;
        }
    }
    for (tag, count) in shown {
        if count > OBSERVATIONS_SHOWN {
            writeln!(
                out,
                "observation: {tag}: {} more not shown ({count} in total)",
                count - OBSERVATIONS_SHOWN
            )?;
        }
    }
    Ok(())
}

pub fn write_tightness_csv(out: &mut impl Write, report: &TightnessReport) -> io::Result<()> {
    let Some(first) = report.rows.first() else {
        return writeln!(out, "n,p,exact_tail,best");
    };
    let mut header = vec!["n".to_string(), "p".into(), "exact_tail".into()];
    for col in &first.columns {
        let tag = col.kind.tag().to_ascii_lowercase();
        header.push(format!("{tag}_mid"));
        header.push(format!("{tag}_ratio_hi"));
    }
    header.push("best".into());
    writeln!(out, "{}", header.join(","))?;
    for row in &report.rows {
        let mut cells = vec![
            row.params.n().to_string(),
            render_exact(row.params.p()),
            render_exact(&row.exact_tail),
        ];
        for col in &row.columns {
            match (&col.enclosure, &col.ratio_hi) {
                (Some(iv), Some(r)) => {
                    cells.push(render_approx(&iv.midpoint()));
                    cells.push(render_decimal(r, 12, Rounding::Up));
                }
                _ => {
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        cells.push(row.best.map(|k| k.tag().to_string()).unwrap_or_default());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub const EXPLORE_HEADER: &str =
    "probs,mad,variance,ratio_sq,ratio,ratio_mid,meets_half_variance,status";

fn render_probs(probs: &[Rational]) -> String {
    probs.iter().map(render_exact).collect::<Vec<_>>().join(";")
}

/// Rows in decreasing ratio, so the table ends at the minimum found.
pub fn write_explore_csv(out: &mut impl Write, report: &ExploreReport) -> io::Result<()> {
    writeln!(out, "{EXPLORE_HEADER}")?;
    for row in report.rows.iter().rev() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},exploratory",
            render_probs(&row.probs),
            render_exact(&row.mad),
            render_exact(&row.variance),
            render_exact(&row.ratio_sq),
            render_interval(&row.ratio),
            render_approx(&row.ratio.midpoint()),
            row.meets_half_variance
        )?;
    }
    Ok(())
}

pub fn explore_minimum_line(report: &ExploreReport) -> Option<String> {
    report.minimum().map(|row| {
        format!(
            "exploratory minimum ratio^2={} ({}) at probs ({})",
            render_exact(&row.ratio_sq),
            render_approx(&row.ratio_sq),
            render_probs(&row.probs)
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::BinomialParams;
    use crate::rational::rat;
    use crate::verdict::Verdict;

    #[test]
    fn exact_record_row() {
        let record = VerificationRecord {
            claim_id: "GM_EQ2",
            subject: Subject::Binomial(BinomialParams::new(2, rat(1, 2)).unwrap()),
            exact_value: Some(rat(3, 4)),
            reference: None,
            bound_interval: Some(ProbInterval::point(rat(1, 4), 128)),
            verdict: Verdict::Proven,
            margin: Some(Margin::Exact(rat(1, 2))),
        };
        assert_eq!(
            record_row(&record),
            "GM_EQ2,2,0.5,0.75,0.25,0.25,PROVEN,0.5,binomial"
        );
    }

    #[test]
    fn poisson_and_pair_subjects() {
        let (n, p, d) = subject_columns(&Subject::Poisson(rat(7, 3)));
        assert_eq!((n.as_str(), p.as_str(), d), ("", "7/3", "poisson"));
        let (_, p, d) = subject_columns(&Subject::BinomialPair {
            n: 3,
            p: rat(1, 4),
            q: rat(1, 3),
        });
        assert_eq!((p.as_str(), d), ("0.25|1/3", "binomial-pair"));
    }
}
