//! Truncated iterated Laurent series `k((u))((t))`.

mod ls1;
mod ls2;
mod text;

pub use ls1::LaurentSeries1;
pub use ls2::{
    ls2_arith, ls2_derive, ls2_substitute, ls2_valuation, res2, LaurentSeries2, LocalForm2, Ls2Op,
};
pub use text::parse_series;

/// Precision of exactly known data.
pub const INF: i64 = i64::MAX / 4;

/// Relative precision used when an exact but infinite expansion must be cut.
pub const DEFAULT_PREC: i64 = 16;

pub fn is_inf(p: i64) -> bool {
    p >= INF / 2
}
