use crate::fieldcalc::{Field, FieldError, Grid};

/// Default horospherical range of the Beltrami control surface.
pub const BELTRAMI_U1: (f64, f64) = (0.5, 2.0);
pub const BELTRAMI_U2: (f64, f64) = (0.0, 1.0);

/// The tractrix surface of revolution in horospherical coordinates,
/// x = (e^{−u₁} cos u₂, e^{−u₁} sin u₂, arccosh e^{u₁} − √(1 − e^{−2u₁})),
/// with metric du₁² + e^{−2u₁} du₂².
pub fn beltrami_surface(u1: (f64, f64), u2: (f64, f64), n1: usize, n2: usize) -> Result<Field, FieldError> {
    let grid = Grid::grid2(u1, u2, n1, n2)?;
    Field::from_fn(grid, 3, |c, out| {
        let r = (-c[0]).exp();
        out[0] = r * c[1].cos();
        out[1] = r * c[1].sin();
        out[2] = c[0].exp().acosh() - (1.0 - r * r).sqrt();
    })
}
