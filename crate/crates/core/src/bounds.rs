//! Exact checks of the upper bound `e_l / e_r ≤ min{2n/σ, σ}` and the chain of
//! inequalities behind it, plus parameter sweeps over the string families.

use std::fmt;
use std::io;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::generators::{Family, FamilySpec};
use crate::index::measures;
use crate::text::{MeasureReport, Rational};

/// One inequality `lower ≤ value ≤ bound` (or `<` when `strict`), where the
/// lower side is optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lower: Option<Rational>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub strict: bool,
    pub holds: bool,
    /// `rhs - lhs`, or the smaller of the two gaps for a two-sided check.
    pub slack: Rational,
}

impl BoundCheck {
    fn new(name: &'static str, lower: Option<Rational>, lhs: Rational, rhs: Rational, strict: bool) -> Self {
        let upper_ok = if strict { lhs < rhs } else { lhs <= rhs };
        let lower_ok = lower.is_none_or(|lo| lo <= lhs);
        let slack = match lower {
            Some(lo) => (rhs - lhs).min(lhs - lo),
            None => rhs - lhs,
        };
        BoundCheck {
            name,
            lower,
            lhs,
            rhs,
            strict,
            holds: upper_ok && lower_ok,
            slack,
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { "<" } else { "<=" };
        let mark = if self.holds { "ok" } else { "VIOLATED" };
        match self.lower {
            Some(lo) => write!(f, "{:<24} {lo} <= {} {op} {}  [{mark}]", self.name, self.lhs, self.rhs),
            None => write!(f, "{:<24} {} {op} {}  [{mark}]", self.name, self.lhs, self.rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub checks: Vec<BoundCheck>,
}

impl BoundVerdict {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn into_result(self) -> Result<Self> {
        if let Some(v) = self.violations().next() {
            return Err(CoreError::BoundViolation(v.to_string()));
        }
        Ok(self)
    }
}

/// Evaluates the seven inequalities with exact rational arithmetic.
pub fn check_bounds(report: &MeasureReport) -> BoundVerdict {
    let int = |x: u64| Rational::from_integer(i128::from(x));
    let (n, sigma, mr, er, el) = (
        int(report.n),
        int(report.sigma),
        int(report.mr),
        int(report.er),
        int(report.el),
    );
    let ratio = if er.is_zero() { el } else { el / er };
    let two_n = int(2) * n;
    let two_n_over_sigma = if sigma.is_zero() { two_n } else { two_n / sigma };
    BoundVerdict {
        checks: vec![
            BoundCheck::new("el/er <= sigma", None, ratio, sigma, false),
            BoundCheck::new("el/er <= 2n/sigma", None, ratio, two_n_over_sigma, false),
            BoundCheck::new("sigma <= er", None, sigma, er, false),
            BoundCheck::new("mr <= er <= mr*sigma", Some(mr), er, mr * sigma, false),
            BoundCheck::new("mr <= el <= mr*sigma", Some(mr), el, mr * sigma, false),
            BoundCheck::new("el < 2n", None, el, two_n, true),
            BoundCheck::new("er < 2n", None, er, two_n, true),
        ],
    }
}

/// `min{2n/σ, σ}`.
pub fn ratio_bound(n: u64, sigma: u64) -> Rational {
    let sigma = Rational::from_integer(i128::from(sigma.max(1)));
    let two_n = Rational::from_integer(2 * i128::from(n));
    (two_n / sigma).min(sigma)
}

/// One measured text of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub spec: FamilySpec,
    pub sigma_actual: u64,
    pub report: MeasureReport,
    pub bound: Rational,
    pub tightness: Rational,
}

impl SweepRow {
    pub fn measure(spec: FamilySpec) -> Result<Self> {
        let text = spec.generate()?;
        let report = measures(&text);
        check_bounds(&report).into_result()?;
        let bound = ratio_bound(report.n, report.sigma);
        Ok(SweepRow {
            spec,
            sigma_actual: report.sigma,
            report,
            bound,
            tightness: report.ratio / bound,
        })
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn to_record(&self) -> SweepRecord {
        SweepRecord {
            family: self.family().name().to_string(),
            k: self.spec.k(),
            sigma_nominal: self.spec.sigma(),
            sigma_actual: self.sigma_actual,
            n: self.report.n,
            mr: self.report.mr,
            er: self.report.er,
            el: self.report.el,
            ratio: to_f64(self.report.ratio),
            bound: to_f64(self.bound),
            tightness: to_f64(self.tightness),
        }
    }
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Flat, display-oriented form of a [`SweepRow`]; field order is the CSV
/// column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    pub k: Option<usize>,
    pub sigma_nominal: Option<usize>,
    pub sigma_actual: u64,
    pub n: u64,
    pub mr: u64,
    pub er: u64,
    pub el: u64,
    pub ratio: f64,
    pub bound: f64,
    pub tightness: f64,
}

pub const CSV_HEADER: &str = "family,k,sigma_nominal,sigma_actual,n,mr,er,el,ratio,bound,tightness";

#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub spec: FamilySpec,
    pub error: CoreError,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepOutcome {
    pub fn records(&self) -> Vec<SweepRecord> {
        self.rows.iter().map(SweepRow::to_record).collect()
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for record in self.records() {
            w.serialize(record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(&self.records())
    }
}

/// Measures every spec in parallel. Rows come back sorted by
/// `(family, n, σ)`; specs that fail to generate or violate a bound are
/// collected as failures without stopping the sweep.
pub fn sweep(specs: &[FamilySpec]) -> SweepOutcome {
    let results: Vec<(FamilySpec, Result<SweepRow>)> = specs
        .par_iter()
        .map(|&spec| (spec, SweepRow::measure(spec)))
        .collect();
    let mut outcome = SweepOutcome::default();
    for (spec, result) in results {
        match result {
            Ok(row) => outcome.rows.push(row),
            Err(error) => outcome.failures.push(SweepFailure { spec, error }),
        }
    }
    outcome
        .rows
        .sort_by_key(|r| (r.family(), r.report.n, r.sigma_actual, r.spec.k(), r.spec.sigma()));
    outcome
}

pub fn eq1_grid(ks: &[usize]) -> Vec<FamilySpec> {
    ks.iter().map(|&k| FamilySpec::Eq1 { k }).collect()
}

/// thm2 specs with `k = ⌈n/σ⌉` for each `(n, σ)` pair with `σ ≤ n`.
pub fn thm2_grid(ns: &[usize], sigmas: &[usize]) -> Vec<FamilySpec> {
    ns.iter()
        .flat_map(|&n| {
            sigmas
                .iter()
                .filter(move |&&s| s <= n)
                .map(move |&s| FamilySpec::thm2_for_length(n, s))
        })
        .collect()
}

pub fn random_grid(n: usize, sigma: usize, seeds: impl IntoIterator<Item = u64>) -> Vec<FamilySpec> {
    seeds
        .into_iter()
        .map(|seed| FamilySpec::Random { n, sigma, seed })
        .collect()
}
