use crate::error::{Result, StabilityError};

/// Dimensional data of the conduction state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasicStateParams {
    /// Potential temperature at the lower wall `z = -h/2`.
    pub theta_b0: f64,
    /// Lower-minus-upper wall temperature difference.
    pub delta_theta_b: f64,
    /// Volumetric heating rate.
    pub eta: f64,
    /// Thermal conductivity.
    pub conductivity: f64,
    /// Layer depth.
    pub depth: f64,
}

impl BasicStateParams {
    pub fn new(
        theta_b0: f64,
        delta_theta_b: f64,
        eta: f64,
        conductivity: f64,
        depth: f64,
    ) -> Result<Self> {
        if !(conductivity > 0.0) {
            return Err(StabilityError::InvalidParameter {
                name: "k",
                reason: format!("conductivity must be positive, got {conductivity}"),
            });
        }
        if !(depth > 0.0) {
            return Err(StabilityError::InvalidParameter {
                name: "h",
                reason: format!("layer depth must be positive, got {depth}"),
            });
        }
        Ok(BasicStateParams {
            theta_b0,
            delta_theta_b,
            eta,
            conductivity,
            depth,
        })
    }
}

/// Conduction profile with uniform heating,
/// `theta_B0 - (dtheta/h)(z + h/2) + (eta / 2k)(z^2 - (h/2)^2)`,
/// for `|z| <= h/2`.
pub fn basic_state_profile(p: &BasicStateParams, z: f64) -> Result<f64> {
    let half = 0.5 * p.depth;
    if !(z.abs() <= half) {
        return Err(StabilityError::OutOfDomain {
            value: z,
            lo: -half,
            hi: half,
        });
    }
    Ok(p.theta_b0 - p.delta_theta_b / p.depth * (z + half)
        + p.eta / (2.0 * p.conductivity) * (z * z - half * half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_values() {
        let p = BasicStateParams::new(300.0, 10.0, 5.0, 0.6, 2.0).unwrap();
        assert_eq!(basic_state_profile(&p, -1.0).unwrap(), 300.0);
        assert_eq!(basic_state_profile(&p, 1.0).unwrap(), 290.0);
        // eta > 0 makes the profile convex, below the linear one
        assert!(basic_state_profile(&p, 0.0).unwrap() < 295.0);
        assert!(basic_state_profile(&p, 1.01).is_err());
    }

    #[test]
    fn no_heating_is_linear() {
        let p = BasicStateParams::new(1.0, 4.0, 0.0, 1.0, 1.0).unwrap();
        for z in [-0.5, -0.2, 0.0, 0.3, 0.5] {
            let v = basic_state_profile(&p, z).unwrap();
            assert!((v - (1.0 - 4.0 * (z + 0.5))).abs() < 1e-15);
        }
    }

    #[test]
    fn validation() {
        assert!(BasicStateParams::new(0.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(BasicStateParams::new(0.0, 1.0, 1.0, 1.0, -1.0).is_err());
    }
}
