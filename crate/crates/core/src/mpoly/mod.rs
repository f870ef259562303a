//! Sparse multivariate polynomials in the base variables `z_0..z_N` and the
//! fiber variables `z_0'..z_N'`, with a normal form modulo the Fermat-cover
//! ideal. This is the exactness backend of all identity checks.

mod monomial;
mod poly;
mod rewriter;

pub use monomial::{Flavor, Monomial, Var};
pub use poly::{poly_det, MPoly};
pub use rewriter::{chart_w, chart_z, chart_zp, CoverIdealRewriter, RuleOrder};
