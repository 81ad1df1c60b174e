//! Maximal repeats and their left/right extension measures.
//!
//! For a text `T`, a maximal repeat is a substring occurring at least twice
//! whose every one-letter extension to the left or right occurs strictly fewer
//! times. This crate computes the set of maximal repeats, the total number of
//! right extensions `e_r` and left extensions `e_l`, and the CDAWG whose edge
//! count equals `e_r` for terminator-ended texts.
//!
//! * [`index`] is the fast engine (suffix array + LCP intervals).
//! * [`oracle`] is an independent brute-force reference.
//! * [`cdawg`] builds the graph and answers substring queries.
//! * [`generators`] produces extremal and classic string families.
//! * [`bounds`] checks the ratio bound `e_l/e_r ≤ min{2n/σ, σ}` exactly.
//!
//! ```
//! use repmeasure_core::{measures, Text};
//!
//! let t = Text::from_bytes(b"1a2ab3abc4abcd").unwrap();
//! let report = measures(&t);
//! assert_eq!((report.mr, report.er, report.el), (4, 14, 17));
//! ```

pub mod bounds;
pub mod cdawg;
pub mod error;
pub mod generators;
pub mod index;
pub mod oracle;
pub mod text;

pub use bounds::{check_bounds, sweep, BoundCheck, BoundVerdict, SweepOutcome, SweepRow};
pub use cdawg::{build_cdawg, Cdawg, CdawgStats};
pub use error::{CoreError, Result};
pub use generators::{Family, FamilySpec, PredictedMeasures};
pub use index::{list_maximal_repeats, measures, measures_via_reversal, SuffixArrayIndex};
pub use oracle::{Oracle, OracleResult};
pub use text::{MeasureReport, Rational, RepeatRecord, Substring, Symbol, Text};
