//! The truncated tensor algebra T(H) and the free Lie ring L(H) in the Lyndon basis.

mod lie;
mod lyndon;
mod series;
mod tensor;

pub use lie::{left_normed_decompose, left_normed_lie, lie_bracket, LieElement};
pub use lyndon::{is_lyndon, lyndon_basis, lyndon_tensor, standard_factorization, witt_dimension};
pub use series::{bch, exp_truncated, log_truncated, star_commutator};
pub use tensor::TensorElement;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}
