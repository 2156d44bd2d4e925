//! Kinematic waveforms and aerodynamic feature transforms for flapping-wing
//! records produced by an external simulator. Only the record ingestion and
//! the derived features live here; the simulator itself is out of scope.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use std::f64::consts::PI;

/// Geometry and fluid constants of the reference aircraft.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeroConstants {
    /// Wing span b, meters.
    pub span: f64,
    /// Wing area S, square meters.
    pub wing_area: f64,
    /// Mean chord c, meters.
    pub mean_chord: f64,
    /// Kinematic viscosity ν of air, m²/s.
    pub kinematic_viscosity: f64,
}

impl Default for AeroConstants {
    fn default() -> Self {
        Self {
            span: 1.93,
            wing_area: 0.407,
            mean_chord: 0.2,
            kinematic_viscosity: 1.5e-5,
        }
    }
}

/// One flapping-kinematics parameterization. Angles are stored in degrees,
/// periods in seconds, phases as fractions of the period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicRecord {
    /// Dihedral amplitude, degrees, [0, 45].
    pub a_di: f64,
    /// Dihedral (flapping) period, seconds, [0.2, 1].
    pub p_di: f64,
    /// Internal twist rest angle, degrees, [−22.5, 22.5].
    pub r_twi: f64,
    /// Internal twist amplitude, degrees, [0, 45].
    pub a_twi: f64,
    /// Internal twist phase, fraction of period, [0, 1].
    pub p_twi: f64,
    /// External twist rest angle, degrees, [−22.5, 22.5].
    pub r_twe: f64,
    /// External twist amplitude, degrees, [0, 45].
    pub a_twe: f64,
    /// External twist phase, fraction of period, [0, 1].
    pub p_twe: f64,
    /// Cruise speed U, m/s, positive.
    pub cruise_speed: f64,
}

impl KinematicRecord {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("a_DI", self.a_di, 0.0, 45.0),
            ("p_DI", self.p_di, 0.2, 1.0),
            ("r_TWi", self.r_twi, -22.5, 22.5),
            ("a_TWi", self.a_twi, 0.0, 45.0),
            ("p_TWi", self.p_twi, 0.0, 1.0),
            ("r_TWe", self.r_twe, -22.5, 22.5),
            ("a_TWe", self.a_twe, 0.0, 45.0),
            ("p_TWe", self.p_twe, 0.0, 1.0),
        ];
        for (name, v, lo, hi) in checks {
            if !v.is_finite() || v < lo || v > hi {
                return Err(Error::InvalidValue(format!(
                    "{name} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        if !self.cruise_speed.is_finite() || self.cruise_speed <= 0.0 {
            return Err(Error::InvalidValue(format!(
                "U = {} must be positive",
                self.cruise_speed
            )));
        }
        Ok(())
    }
}

/// Instantaneous control angles at time `t` (degrees).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveforms {
    pub dihedral: f64,
    pub twist_internal: f64,
    pub twist_external: f64,
}

/// DI(t) = a_DI·sin(2πt/p_DI); TW(t) = r_TW + a_TW·sin(2π(t/p_DI + p_TW)).
/// All three share the flapping period p_DI; the twists add their rest
/// angle and phase offset.
pub fn waveforms(rec: &KinematicRecord, t: f64) -> Waveforms {
    let cycle = t / rec.p_di;
    Waveforms {
        dihedral: rec.a_di * (2.0 * PI * cycle).sin(),
        twist_internal: rec.r_twi + rec.a_twi * (2.0 * PI * (cycle + rec.p_twi)).sin(),
        twist_external: rec.r_twe + rec.a_twe * (2.0 * PI * (cycle + rec.p_twe)).sin(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeroFeatures {
    /// Re = U·c/ν.
    pub reynolds: f64,
    /// St = sin(π·a_DI/180)·b/(U·p_DI).
    pub strouhal: f64,
    /// k = π·c/(U·p_DI).
    pub reduced_frequency: f64,
    /// κ₁ = 2·|π·a_TWi/180|·k.
    pub kappa1: f64,
    /// κ₂ = 2·|π·a_TWe/180|·k.
    pub kappa2: f64,
}

pub fn aero_features(rec: &KinematicRecord, c: &AeroConstants) -> Result<AeroFeatures> {
    rec.validate()?;
    let u = rec.cruise_speed;
    let k = PI * c.mean_chord / (u * rec.p_di);
    Ok(AeroFeatures {
        reynolds: u * c.mean_chord / c.kinematic_viscosity,
        strouhal: (PI * rec.a_di / 180.0).sin() * c.span / (u * rec.p_di),
        reduced_frequency: k,
        kappa1: 2.0 * (PI * rec.a_twi / 180.0).abs() * k,
        kappa2: 2.0 * (PI * rec.a_twe / 180.0).abs() * k,
    })
}
