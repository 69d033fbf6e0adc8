//! Exact computations with E-structures, their Levelt decompositions and semisimple normal forms,
//! quantum E-structures of small examples, and Hochschild-complex identity checks for small
//! A∞ algebras.

pub mod connection;
pub mod error;
pub mod hochschild;
pub mod levelt;
pub mod matrix;
pub mod normalform;
pub mod par;
pub mod poly;
pub mod quantum;
pub mod random;
pub mod scalar;
pub mod series;
pub mod sparse;
pub mod specfile;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use series::{MatrixSeries, TruncatedSeries};
