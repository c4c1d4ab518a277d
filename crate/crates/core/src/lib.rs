//! Generalized Marcum and Nuttall Q-functions.
//!
//! Three independent evaluation routes are provided:
//!
//! * [`closed_form`]: exact finite sums when the orders are half-odd integers;
//! * [`oracle`]: convergent series with certified truncation tails, and
//!   adaptive quadrature of the defining integrals, for any real order;
//! * [`bounds`]: two-sided certificates for real orders, obtained by rounding
//!   the orders to the neighbouring half-odd integers and evaluating the
//!   closed forms there (the functions are monotone in the order).
//!
//! ```
//! use marcum_nuttall::{bounds, oracle::{self, EvalPoint, OrderSpec}};
//!
//! let point = EvalPoint::new(2.5, 3.0).unwrap();
//! let interval = bounds::marcum_bounds(2.7, point).unwrap();
//! let q = oracle::marcum_series(OrderSpec::marcum(2.7).unwrap(), point, 1e-12).unwrap();
//! assert!(interval.lower < q.value && q.value < interval.upper);
//! ```

pub mod bounds;
pub mod closed_form;
pub mod double_double;
pub mod error;
pub mod eval;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod summation;

pub use error::{DomainError, Error, Result};
