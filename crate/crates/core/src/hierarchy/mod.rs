//! Series dynamics near moving singular points.
//!
//! Behind a front `x = X(t)` the fields are expanded in `xi = x - X(t)`:
//! `f = f_0 + f_1 xi + f_2 xi^2 + ...`. Two settings are covered:
//!
//! * fronts advancing into still water ([`still`]), where the surface
//!   elevation coefficients `zeta_k` are slaved to the velocity ones;
//! * vacuum points where the layer thickness vanishes ([`vacuum`]).
//!
//! [`front`] holds the first-order slope laws and shock prediction.

pub mod front;
pub mod still;
pub mod vacuum;

pub use front::{
    corner_split_fronts, riccati_slope_time, shock_position, shoulder_initial_slope, StillFrontPath,
};
pub use still::{hierarchy_rhs_still, integrate_still, StillRates};
pub use vacuum::{
    hierarchy_rhs_vacuum, integrate_vacuum, nonphysical_front_motion, reduced_phi_form, reduced_u1eta2_step,
    velocity_jump_evolution, FrontPath, ReducedTrajectory, VacuumRates, VacuumTrajectory, VelocityJump,
};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontKind {
    StillWaterFront,
    NonphysicalVacuum,
    PhysicalVacuum,
}

/// Front position plus truncated series coefficients.
///
/// `u[k]` are velocity coefficients; `h[k]` are `zeta_k` for still-water
/// fronts and `eta_k` at vacuum points. `u_dry` holds the dry-side velocity
/// coefficients of a physical vacuum and is empty otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontSeriesState {
    pub kind: FrontKind,
    pub x: f64,
    pub xdot: f64,
    pub order: usize,
    pub u: Vec<f64>,
    pub h: Vec<f64>,
    pub t: f64,
    pub u_dry: Vec<f64>,
}

impl FrontSeriesState {
    /// Vacuum-point state; `u` and `eta` are padded or cut to `order + 1`
    /// entries and `eta[0]` is forced to zero. Physical vacua start with a
    /// continuous velocity (`u_dry = u`).
    pub fn vacuum(x: f64, order: usize, u: &[f64], eta: &[f64]) -> Result<Self> {
        if order == 0 {
            return domain("vacuum hierarchy order must be at least 1");
        }
        let mut uu = vec![0.0; order + 1];
        let mut hh = vec![0.0; order + 1];
        for (d, s) in uu.iter_mut().zip(u) {
            *d = *s;
        }
        for (d, s) in hh.iter_mut().zip(eta).skip(1) {
            *d = *s;
        }
        let kind = if hh[1] == 0.0 {
            FrontKind::NonphysicalVacuum
        } else if hh[1] < 0.0 {
            FrontKind::PhysicalVacuum
        } else {
            return domain(format!("eta_1 = {} > 0 is not a right vacuum boundary", hh[1]));
        };
        let u_dry = if kind == FrontKind::PhysicalVacuum { uu.clone() } else { Vec::new() };
        Ok(Self { kind, x, xdot: uu[0], order, u: uu, h: hh, t: 0.0, u_dry })
    }

    /// Jump `u'_0 - u_0` across a physical vacuum point.
    pub fn velocity_jump(&self) -> Option<f64> {
        self.u_dry.first().map(|ud| ud - self.u[0])
    }
}

/// `X' = direction * sqrt(-b0)`, the speed of a front entering still water.
pub fn front_speed(b0: f64, direction: f64) -> Result<f64> {
    if !(b0 < 0.0) {
        return domain(format!("front at or beyond the shoreline: b0 = {b0}"));
    }
    if direction == 0.0 || !direction.is_finite() {
        return domain("front direction must be +1 or -1");
    }
    Ok(direction.signum() * (-b0).sqrt())
}
