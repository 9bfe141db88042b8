pub mod bipoly;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod rational;
pub mod resultant;
pub mod series;
pub mod upoly;
mod zassenhaus;

pub use field::{Fe, Field};
pub use rational::Rational;
pub use upoly::Poly;
pub use bipoly::BiPoly;
pub use series::{Series, TruncSeries};
