//! 2x2 contingency tables and the uncorrected Pearson chi-square test.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::AggregateCounts;
use crate::givenness::GivennessCategory;
use crate::query::{ClauseContext, GrammaticalPosition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("table has a zero row or column sum: {0}")]
    DegenerateMargin(ContingencyTable2x2),
    #[error("ratio with a zero denominator")]
    ZeroDenominator,
}

/// Rows: pronoun, indefinite. Columns: subject, non-subject.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable2x2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ContingencyTable2x2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ContingencyTable2x2 { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn row_sums(&self) -> [u64; 2] {
        [self.a + self.b, self.c + self.d]
    }

    pub fn col_sums(&self) -> [u64; 2] {
        [self.a + self.c, self.b + self.d]
    }
}

impl fmt::Display for ContingencyTable2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignificanceBand {
    #[serde(rename = "p<0.001")]
    PLt0_001,
    #[serde(rename = "p<0.01")]
    PLt0_01,
    #[serde(rename = "p<0.05")]
    PLt0_05,
    #[serde(rename = "not significant")]
    NotSignificant,
}

/// Upper critical values of chi-square with one degree of freedom.
pub const CRITICAL_DF1: [(f64, SignificanceBand); 3] = [
    (10.828, SignificanceBand::PLt0_001),
    (6.635, SignificanceBand::PLt0_01),
    (3.841, SignificanceBand::PLt0_05),
];

impl SignificanceBand {
    pub fn for_df1(statistic: f64) -> SignificanceBand {
        CRITICAL_DF1
            .iter()
            .find(|(crit, _)| statistic > *crit)
            .map(|(_, band)| *band)
            .unwrap_or(SignificanceBand::NotSignificant)
    }

    pub fn label(self) -> &'static str {
        match self {
            SignificanceBand::PLt0_001 => "p<0.001",
            SignificanceBand::PLt0_01 => "p<0.01",
            SignificanceBand::PLt0_05 => "p<0.05",
            SignificanceBand::NotSignificant => "not significant",
        }
    }
}

impl fmt::Display for SignificanceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    pub significance: SignificanceBand,
}

impl fmt::Display for ChiSquareResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.1}, df={}, {}",
            self.statistic, self.degrees_of_freedom, self.significance
        )
    }
}

/// Pearson chi-square without continuity correction:
/// `N (ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d))`.
pub fn chi_square_2x2(t: &ContingencyTable2x2) -> Result<ChiSquareResult, StatsError> {
    let [r1, r2] = t.row_sums();
    let [c1, c2] = t.col_sums();
    if r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0 {
        return Err(StatsError::DegenerateMargin(*t));
    }
    // ad and bc overflow u32 at corpus scale
    let cross = i128::from(t.a) * i128::from(t.d) - i128::from(t.b) * i128::from(t.c);
    let cross = cross as f64;
    let margins = r1 as f64 * r2 as f64 * c1 as f64 * c2 as f64;
    let statistic = t.total() as f64 * cross * cross / margins;
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: 1,
        significance: SignificanceBand::for_df1(statistic),
    })
}

/// Pronoun/indefinite by subject/non-subject, summed over `contexts`.
pub fn build_pronoun_indefinite_table(
    agg: &AggregateCounts,
    contexts: &[ClauseContext],
) -> ContingencyTable2x2 {
    let sum = |cat, pos| -> u64 { contexts.iter().map(|&ctx| agg.get(cat, pos, ctx)).sum() };
    use GivennessCategory::{Indefinite, Pronoun};
    use GrammaticalPosition::{NonSubject, Subject};
    ContingencyTable2x2 {
        a: sum(Pronoun, Subject),
        b: sum(Pronoun, NonSubject),
        c: sum(Indefinite, Subject),
        d: sum(Indefinite, NonSubject),
    }
}

/// A percentage held exactly in hundredths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct Percentage {
    hundredths: u64,
}

impl Percentage {
    pub fn hundredths(self) -> u64 {
        self.hundredths
    }

    pub fn as_f64(self) -> f64 {
        self.hundredths as f64 / 100.0
    }
}

impl From<Percentage> for f64 {
    fn from(p: Percentage) -> f64 {
        p.as_f64()
    }
}

impl TryFrom<f64> for Percentage {
    type Error = String;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        if v.is_finite() && v >= 0.0 {
            Ok(Percentage {
                hundredths: (v * 100.0).round() as u64,
            })
        } else {
            Err(format!("invalid percentage {v}"))
        }
    }
}

impl fmt::Display for Percentage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.hundredths / 100, self.hundredths % 100)
    }
}

/// `100 * numerator / denominator`, rounded half-up to two decimals.
pub fn ratio_report(numerator: u64, denominator: u64) -> Result<Percentage, StatsError> {
    if denominator == 0 {
        return Err(StatsError::ZeroDenominator);
    }
    let scaled = u128::from(numerator) * 10_000 * 2 + u128::from(denominator);
    let hundredths = scaled / (2 * u128::from(denominator));
    Ok(Percentage {
        hundredths: hundredths as u64,
    })
}
