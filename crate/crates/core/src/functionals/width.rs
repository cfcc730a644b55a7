//! The width-power functional `(int_S w_K(u)^r du)^(1/r)`, `r < 1, r != 0`.

use crate::error::{check_dim, Error, Result};
use crate::geometry::{ConvexBody, DirectionSet};

/// Quadrature of `w_K^r` with the weights of `directions`, raised to `1/r`.
pub fn width_power_functional(body: &ConvexBody, r: f64, directions: &DirectionSet) -> Result<f64> {
    check_dim(body.dim(), directions.dim())?;
    if !(r < 1.0) || r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent must satisfy r < 1, r != 0; got {r}")));
    }
    let mut s = 0.0;
    for (i, u) in directions.iter().enumerate() {
        let w = body.w(u);
        if !(w > 0.0) {
            return Err(Error::Degenerate("nonpositive width".into()));
        }
        s += directions.weight(i) * w.powf(r);
    }
    Ok(s.powf(1.0 / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_and_reuleaux() {
        let d = DirectionSet::default_for(2).unwrap();
        let disk = ConvexBody::ball(2, 1.0).unwrap();
        let f = width_power_functional(&disk, 0.5, &d).unwrap();
        assert!((f - 8.0 * PI * PI).abs() < 1e-9);
        let r = ConvexBody::reuleaux(2.0, &[0.0, 0.0]).unwrap();
        for e in [0.5, -1.0, -3.0] {
            let a = width_power_functional(&disk, e, &d).unwrap();
            let b = width_power_functional(&r, e, &d).unwrap();
            assert!((a - b).abs() < 1e-9 * a);
        }
        assert!(width_power_functional(&disk, 1.0, &d).is_err());
        let big = disk.scaled(3.0).unwrap();
        assert!((width_power_functional(&big, 0.5, &d).unwrap() - 3.0 * f).abs() < 1e-9 * f);
    }
}
