//! Deterministic string families, including the two extremal constructions
//! for the left/right extension ratio, with their exact predicted measures.
//!
//! Multi-letter symbols are mapped to single symbol values:
//!
//! * `eq1_tk`: separator `$_i` is `i - 1`, letter `a_i` is `128 + i - 1`.
//! * `thm2`: `$` is 0, `a` is 1, `b_i` is `1 + i`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::text::{MeasureReport, Symbol, Text};

pub const EQ1_MAX_K: usize = 127;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[serde(rename = "eq1_tk")]
    Eq1Tk,
    Thm2,
    Unary,
    AllDistinct,
    Fibonacci,
    ThueMorse,
    Random,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Eq1Tk,
        Family::Thm2,
        Family::Unary,
        Family::AllDistinct,
        Family::Fibonacci,
        Family::ThueMorse,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Eq1Tk => "eq1_tk",
            Family::Thm2 => "thm2",
            Family::Unary => "unary",
            Family::AllDistinct => "all_distinct",
            Family::Fibonacci => "fibonacci",
            Family::ThueMorse => "thue_morse",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || (s == "eq1" && *f == Family::Eq1Tk))
            .ok_or_else(|| CoreError::ParameterOutOfRange(format!("unknown family `{s}`")))
    }
}

/// Parameters identifying one generated text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    #[serde(rename = "eq1_tk")]
    Eq1 { k: usize },
    Thm2 { k: usize, sigma: usize },
    Unary { n: usize },
    AllDistinct { n: usize },
    Fibonacci { n: usize },
    ThueMorse { n: usize },
    Random { n: usize, sigma: usize, seed: u64 },
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::Eq1 { .. } => Family::Eq1Tk,
            FamilySpec::Thm2 { .. } => Family::Thm2,
            FamilySpec::Unary { .. } => Family::Unary,
            FamilySpec::AllDistinct { .. } => Family::AllDistinct,
            FamilySpec::Fibonacci { .. } => Family::Fibonacci,
            FamilySpec::ThueMorse { .. } => Family::ThueMorse,
            FamilySpec::Random { .. } => Family::Random,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            FamilySpec::Eq1 { k } | FamilySpec::Thm2 { k, .. } => Some(k),
            _ => None,
        }
    }

    /// The nominal alphabet parameter, where the family has one.
    pub fn sigma(&self) -> Option<usize> {
        match *self {
            FamilySpec::Thm2 { sigma, .. } | FamilySpec::Random { sigma, .. } => Some(sigma),
            _ => None,
        }
    }

    /// Theorem-2 instance for a target length, with `k = ⌈n / σ⌉`.
    pub fn thm2_for_length(n: usize, sigma: usize) -> Self {
        FamilySpec::Thm2 {
            k: n.div_ceil(sigma.max(1)),
            sigma,
        }
    }

    pub fn generate(&self) -> Result<Text> {
        match *self {
            FamilySpec::Eq1 { k } => gen_eq1(k).map(|(t, _)| t),
            FamilySpec::Thm2 { k, sigma } => gen_thm2(k, sigma).map(|(t, _)| t),
            _ => gen_classic(self),
        }
    }

    /// Exact closed-form measures, for families that have them.
    pub fn predict(&self) -> Result<Option<PredictedMeasures>> {
        Ok(match *self {
            FamilySpec::Eq1 { k } => {
                check_eq1(k)?;
                Some(predict_eq1(k))
            }
            FamilySpec::Thm2 { k, sigma } => {
                check_thm2(k, sigma)?;
                Some(predict_thm2(k, sigma))
            }
            FamilySpec::Unary { n } => {
                check_len(n)?;
                Some(PredictedMeasures::new(n, 1, n, n, n, None))
            }
            FamilySpec::AllDistinct { n } => {
                check_all_distinct(n)?;
                Some(PredictedMeasures::new(n, n, 1, n, n, None))
            }
            _ => None,
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Eq1 { k } => write!(f, "eq1_tk(k={k})"),
            FamilySpec::Thm2 { k, sigma } => write!(f, "thm2(k={k}, sigma={sigma})"),
            FamilySpec::Unary { n } => write!(f, "unary(n={n})"),
            FamilySpec::AllDistinct { n } => write!(f, "all_distinct(n={n})"),
            FamilySpec::Fibonacci { n } => write!(f, "fibonacci(n={n})"),
            FamilySpec::ThueMorse { n } => write!(f, "thue_morse(n={n})"),
            FamilySpec::Random { n, sigma, seed } => {
                write!(f, "random(n={n}, sigma={sigma}, seed={seed})")
            }
        }
    }
}

/// Which term of `min{n/σ, σ}` is the smaller one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `σ ≥ √n`: the ratio grows like `n/σ`.
    NOverSigma,
    /// `σ < √n`: the ratio grows like `σ`.
    Sigma,
}

impl Regime {
    pub fn classify(n: usize, sigma: usize) -> Regime {
        if sigma.saturating_mul(sigma) >= n {
            Regime::NOverSigma
        } else {
            Regime::Sigma
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedMeasures {
    pub n: u64,
    /// Actual alphabet size of the generated text.
    pub sigma: u64,
    pub mr: u64,
    pub er: u64,
    pub el: u64,
    pub regime: Option<Regime>,
}

impl PredictedMeasures {
    fn new(n: usize, sigma: usize, mr: usize, er: usize, el: usize, regime: Option<Regime>) -> Self {
        PredictedMeasures {
            n: n as u64,
            sigma: sigma as u64,
            mr: mr as u64,
            er: er as u64,
            el: el as u64,
            regime,
        }
    }

    /// True when every predicted count equals the measured one.
    pub fn matches(&self, report: &MeasureReport) -> bool {
        (self.n, self.sigma, self.mr, self.er, self.el)
            == (report.n, report.sigma, report.mr, report.er, report.el)
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(CoreError::ParameterOutOfRange("length must be at least 1".into()));
    }
    Ok(())
}

fn check_eq1(k: usize) -> Result<()> {
    if !(1..=EQ1_MAX_K).contains(&k) {
        return Err(CoreError::ParameterOutOfRange(format!(
            "eq1_tk needs 1 <= k <= {EQ1_MAX_K}, got {k}"
        )));
    }
    Ok(())
}

fn check_thm2(k: usize, sigma: usize) -> Result<()> {
    let max_sigma = usize::from(Symbol::MAX) - 1;
    if k == 0 || sigma == 0 || sigma > max_sigma {
        return Err(CoreError::ParameterOutOfRange(format!(
            "thm2 needs k >= 1 and 1 <= sigma <= {max_sigma}, got k={k}, sigma={sigma}"
        )));
    }
    Ok(())
}

fn check_all_distinct(n: usize) -> Result<()> {
    if !(1..=256).contains(&n) {
        return Err(CoreError::ParameterOutOfRange(format!(
            "all_distinct needs 1 <= n <= 256, got {n}"
        )));
    }
    Ok(())
}

fn predict_eq1(k: usize) -> PredictedMeasures {
    let n = k * (k + 3) / 2;
    let sigma = 2 * k;
    let er = 4 * k - 2;
    let el = 2 * k + k * (k + 1) / 2 - 1;
    PredictedMeasures::new(n, sigma, k, er, el, Some(Regime::classify(n, sigma)))
}

fn predict_thm2(k: usize, sigma: usize) -> PredictedMeasures {
    let n = sigma * (k + 2);
    let regime = Some(Regime::classify(n, sigma));
    if sigma == 1 {
        // b_1 a^k $: the block a^k $ occurs once, so only ε and a^1..a^{k-1}
        // are maximal, each a^i with extensions {a, b_1} and {a, $}.
        return PredictedMeasures::new(n, 3, k, 2 * k + 1, 2 * k + 1, regime);
    }
    let er = 2 * k + 2 * sigma - 1;
    let el = (k - 1) * (sigma + 1) + 2 * sigma + 2;
    PredictedMeasures::new(n, sigma + 2, k + 1, er, el, regime)
}

/// `$_1 a_1 $_2 a_1 a_2 … $_k a_1 … a_k`.
pub fn gen_eq1(k: usize) -> Result<(Text, PredictedMeasures)> {
    check_eq1(k)?;
    let mut symbols = Vec::with_capacity(k * (k + 3) / 2);
    for block in 1..=k {
        symbols.push((block - 1) as Symbol);
        symbols.extend((1..=block).map(|i| (128 + i - 1) as Symbol));
    }
    Ok((Text::from_symbols(symbols)?, predict_eq1(k)))
}

/// `b_1 a^k $ b_2 a^k $ … b_σ a^k $`.
pub fn gen_thm2(k: usize, sigma: usize) -> Result<(Text, PredictedMeasures)> {
    check_thm2(k, sigma)?;
    let mut symbols = Vec::with_capacity(sigma * (k + 2));
    for i in 1..=sigma {
        symbols.push((1 + i) as Symbol);
        symbols.extend(std::iter::repeat_n(1, k));
        symbols.push(0);
    }
    Ok((Text::from_symbols(symbols)?, predict_thm2(k, sigma)))
}

/// Texts of the non-extremal families.
///
/// * `unary`: `a^n`.
/// * `all_distinct`: symbols `0, 1, …, n - 1` (so `n ≤ 256`).
/// * `fibonacci`: prefix of the fixed point of `a → ab, b → a`.
/// * `thue_morse`: `t_i = popcount(i) mod 2` over `{a, b}`.
/// * `random`: uniform over σ symbols from a ChaCha8 stream seeded with
///   `seed`; the symbols are `a, b, …` when `σ ≤ 26` and `0..σ` otherwise.
pub fn gen_classic(spec: &FamilySpec) -> Result<Text> {
    let symbols: Vec<Symbol> = match *spec {
        FamilySpec::Unary { n } => {
            check_len(n)?;
            vec![Symbol::from(b'a'); n]
        }
        FamilySpec::AllDistinct { n } => {
            check_all_distinct(n)?;
            (0..n as Symbol).collect()
        }
        FamilySpec::Fibonacci { n } => {
            check_len(n)?;
            fibonacci_word(n)
        }
        FamilySpec::ThueMorse { n } => {
            check_len(n)?;
            (0..n)
                .map(|i| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
                .map(Symbol::from)
                .collect()
        }
        FamilySpec::Random { n, sigma, seed } => {
            check_len(n)?;
            if sigma == 0 || sigma > usize::from(Symbol::MAX) + 1 {
                return Err(CoreError::ParameterOutOfRange(format!(
                    "random needs 1 <= sigma <= 65536, got {sigma}"
                )));
            }
            let offset = if sigma <= 26 { Symbol::from(b'a') } else { 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| offset + rng.gen_range(0..sigma as u32) as Symbol)
                .collect()
        }
        FamilySpec::Eq1 { .. } | FamilySpec::Thm2 { .. } => {
            return Err(CoreError::ParameterOutOfRange(format!(
                "{} is not a classic family",
                spec.family()
            )))
        }
    };
    Text::from_symbols(symbols)
}

fn fibonacci_word(n: usize) -> Vec<Symbol> {
    let (a, b) = (Symbol::from(b'a'), Symbol::from(b'b'));
    let mut prev = vec![a];
    let mut cur = vec![a, b];
    while cur.len() < n {
        let next = [cur.as_slice(), prev.as_slice()].concat();
        prev = cur;
        cur = next;
    }
    cur.truncate(n);
    cur
}

/// Sidecar JSON written next to a generated text file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub family: Family,
    pub k: Option<usize>,
    pub sigma: Option<usize>,
    pub n: u64,
    pub mr: u64,
    pub er: u64,
    pub el: u64,
}

impl Sidecar {
    /// Closed-form values where the family has them, measured values
    /// otherwise.
    pub fn for_spec(spec: &FamilySpec, text: &Text) -> Result<Self> {
        let (n, mr, er, el) = match spec.predict()? {
            Some(p) => (p.n, p.mr, p.er, p.el),
            None => {
                let r = crate::index::measures(text);
                (r.n, r.mr, r.er, r.el)
            }
        };
        Ok(Sidecar {
            family: spec.family(),
            k: spec.k(),
            sigma: spec.sigma(),
            n,
            mr,
            er,
            el,
        })
    }
}
