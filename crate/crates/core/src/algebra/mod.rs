//! Linear algebra over GF(2) and small finite-field arithmetic.

mod bits;
mod field;
mod matrix;

pub use bits::BitVec;
pub use field::{is_prime_power, prime_power, Element, FieldError, SmallField, SUPPORTED_ORDERS};
pub use matrix::BitMatrix;

pub(crate) use bits::words_for;
pub(crate) use matrix::free_columns;
