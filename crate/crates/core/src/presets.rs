//! Small worked instances on Hermitian curves, used by tests, examples and
//! the command-line harness.

use std::sync::Arc;

use crate::curve::{Coordinate, CurveModel};
use crate::field::{Elem, ExtensionTower, Field};
use crate::fractional::{FractionalError, FractionalSpec};

fn hermitian_spec(
    q0: u32,
    l: u32,
    beta: u32,
    values: Vec<Vec<Elem>>,
) -> Result<FractionalSpec, FractionalError> {
    let base = Field::gf(q0, 2)?;
    let tower = Arc::new(ExtensionTower::new(base.clone(), l)?);
    let curve = Arc::new(CurveModel::hermitian(base.clone(), q0)?);
    let points = curve.affine_points(&base);
    FractionalSpec::from_fibers(tower, curve, points, beta, Coordinate::X, values)
}

/// `x^3 = y^2 + y` over `F_4`, code over `F_64` (`l = 3`), `n = 8`, `β = 2`,
/// fibers of `x` over `{0, 1}` and `{α, α²}` (`m = 2`).
pub fn hermitian_f64() -> FractionalSpec {
    hermitian_spec(2, 3, 2, vec![vec![Elem(0), Elem(1)], vec![Elem(2), Elem(3)]]).expect("valid instance")
}

/// `x^4 = y^3 + y` over `F_9`, code over `F_81` (`l = 2`), `n = 27`, `β = 6`,
/// one part: the fibers of `x` over `{0, 1, 2}`.
pub fn hermitian_f81() -> FractionalSpec {
    hermitian_spec(3, 2, 6, vec![vec![Elem(0), Elem(1), Elem(2)]]).expect("valid instance")
}

/// The same curve and code with `l = 3` (over `F_729`) and two parts, the
/// fibers of `x` over `{0, 1}` and `{2}`.
pub fn hermitian_f729() -> FractionalSpec {
    hermitian_spec(3, 3, 6, vec![vec![Elem(0), Elem(1)], vec![Elem(2)]]).expect("valid instance")
}
