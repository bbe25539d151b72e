use std::fmt;

/// Outcome of checking one claim at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Proven,
    Violated,
    Inconclusive,
    DomainSkipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Proven => "PROVEN",
            Verdict::Violated => "VIOLATED",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::DomainSkipped => "DOMAIN_SKIPPED",
        }
    }

    pub(crate) fn from_decision(decided: Option<bool>) -> Self {
        match decided {
            Some(true) => Verdict::Proven,
            Some(false) => Verdict::Violated,
            None => Verdict::Inconclusive,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
