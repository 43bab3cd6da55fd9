//! Exact graded deformation calculus on polynomial multivector fields.

pub mod chevalley;
pub mod deform;
pub mod error;
pub mod ext;
pub mod form;
pub mod hochschild;
pub mod linalg;
pub mod multivector;
pub mod poly;
pub mod rational;
pub mod sign;
pub mod suite;
pub mod twisted;

pub use error::{Error, ParseError, Result};
pub use ext::Frame;
pub use form::DiffForm;
pub use multivector::PolyVector;
pub use poly::{Monomial, Polynomial, VarContext};
pub use rational::Rational;
