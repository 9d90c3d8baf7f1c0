//! Exact arithmetic: Gaussian rationals, number-field towers of depth one,
//! univariate and bivariate polynomials, and truncated power series.

pub mod bipoly;
pub mod factor;
pub mod field;
pub mod gaussian;
pub mod series;
pub mod upoly;

pub use bipoly::{BiPoly, Linear2, Order};
pub use factor::{factor_bivariate, is_conjugation_fixed};
pub use field::{Extension, FieldElement};
pub use gaussian::{rat, ratio, Gaussian};
pub use series::{PuiseuxParam, TruncSeries};
pub use upoly::{count_real_roots, factor_gaussian, factor_rational, isolate_real_roots, split_roots, RealRoot, RootSplit, UPoly};
