//! Sparse multivariate polynomials over the rationals in the variables
//! `x[i,j]`, `a[i,k]`, `b[k,j]`, with monomial orders and division.

mod division;
pub mod format;
mod monomial;
mod order;
mod polynomial;
mod var;

pub use division::{divide, divide_exact, s_polynomial, Divisor};
pub(crate) use division::{find_divisor, reduce_terms};
pub use format::{from_json, parse_text, to_json, to_text};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::{MultiDegree, Polynomial, Term};
pub use var::{Family, Var, VariableSpace};
