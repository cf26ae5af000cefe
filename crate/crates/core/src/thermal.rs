//! Closed-form contact physics for two semi-infinite solids.
//!
//! Both bodies start at uniform temperatures. On contact the shared surface
//! jumps to a time-invariant temperature fixed by the effusivity ratio, and
//! each side then relaxes as an erf profile away from the surface. No
//! contact resistance is modeled.
//!
//! Temperatures are in degrees Celsius. Only differences enter the
//! formulas, so no Kelvin conversion is needed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::erf::erf;
use crate::error::{Error, Result};

/// Lowest admissible temperature in degrees Celsius.
pub const ABSOLUTE_ZERO_C: f64 = -273.15;

const CONSISTENCY_TOL: f64 = 1e-9;

/// Thermal properties of a homogeneous body.
///
/// Conductivity `λ` [W/(m·K)], effusivity `e = sqrt(λρc)` [J/(m²·s^½·K)]
/// and diffusivity `α = λ/(ρc)` [m²/s]. Density and specific heat only
/// appear through their product, so `α = λ²/e²` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalProps {
    conductivity: f64,
    effusivity: f64,
    diffusivity: f64,
}

impl ThermalProps {
    /// Checks all three values and their consistency `α = λ²/e²`.
    pub fn new(conductivity: f64, effusivity: f64, diffusivity: f64) -> Result<Self> {
        positive("conductivity", conductivity)?;
        positive("effusivity", effusivity)?;
        positive("diffusivity", diffusivity)?;
        let expected = conductivity * conductivity / (effusivity * effusivity);
        if ((diffusivity - expected) / expected).abs() > CONSISTENCY_TOL {
            return Err(Error::domain(format!(
                "diffusivity {diffusivity:e} inconsistent with conductivity²/effusivity² = {expected:e}"
            )));
        }
        Ok(Self {
            conductivity,
            effusivity,
            diffusivity,
        })
    }

    /// Derives the diffusivity from conductivity and effusivity.
    pub fn from_conductivity_effusivity(conductivity: f64, effusivity: f64) -> Result<Self> {
        positive("conductivity", conductivity)?;
        positive("effusivity", effusivity)?;
        let diffusivity = conductivity * conductivity / (effusivity * effusivity);
        Self::new(conductivity, effusivity, diffusivity)
    }

    pub fn from_bulk(conductivity: f64, density: f64, specific_heat: f64) -> Result<Self> {
        let e = effusivity(conductivity, density, specific_heat)?;
        Self::from_conductivity_effusivity(conductivity, e)
    }

    /// Liquid water near room temperature (λ = 0.6, ρ = 998, c = 4182).
    pub fn water() -> Self {
        Self::from_bulk(0.6, 998.0, 4182.0).expect("water constants are valid")
    }

    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }

    pub fn effusivity(&self) -> f64 {
        self.effusivity
    }

    pub fn diffusivity(&self) -> f64 {
        self.diffusivity
    }

    /// Volumetric heat capacity `ρc = e²/λ` [J/(m³·K)].
    pub fn volumetric_heat_capacity(&self) -> f64 {
        self.effusivity * self.effusivity / self.conductivity
    }
}

/// Everything that is fixed at the instant of contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactState {
    pub material_initial_temp: f64,
    pub device_initial_temp: f64,
    pub surface_temp: f64,
    pub gamma: f64,
    /// Signed, `device_initial_temp - material_initial_temp`.
    pub delta_t: f64,
}

impl ContactState {
    pub fn new(
        device: &ThermalProps,
        material: &ThermalProps,
        device_initial_temp: f64,
        material_initial_temp: f64,
    ) -> Result<Self> {
        check_temperature("device initial temperature", device_initial_temp)?;
        check_temperature("material initial temperature", material_initial_temp)?;
        let gamma = gamma(device, material)?;
        let surface_temp = contact_surface_temp(material_initial_temp, device_initial_temp, gamma)?;
        Ok(Self {
            material_initial_temp,
            device_initial_temp,
            surface_temp,
            gamma,
            delta_t: device_initial_temp - material_initial_temp,
        })
    }
}

/// Thermal effusivity `sqrt(λρc)`.
pub fn effusivity(conductivity: f64, density: f64, specific_heat: f64) -> Result<f64> {
    positive("conductivity", conductivity)?;
    positive("density", density)?;
    positive("specific heat", specific_heat)?;
    Ok((conductivity * density * specific_heat).sqrt())
}

/// Effusivity ratio `e_dev / e_m`.
pub fn gamma(device: &ThermalProps, material: &ThermalProps) -> Result<f64> {
    positive("device effusivity", device.effusivity)?;
    positive("material effusivity", material.effusivity)?;
    Ok(device.effusivity / material.effusivity)
}

/// Interface temperature `(T_mi + γ·T_devi) / (1 + γ)`.
///
/// Equal initial temperatures return that temperature exactly.
pub fn contact_surface_temp(material_initial: f64, device_initial: f64, gamma: f64) -> Result<f64> {
    positive("gamma", gamma)?;
    finite("material initial temperature", material_initial)?;
    finite("device initial temperature", device_initial)?;
    if material_initial == device_initial {
        return Ok(material_initial);
    }
    // Written as an offset from one endpoint so rounding cannot leave the interval.
    let lo = material_initial.min(device_initial);
    let hi = material_initial.max(device_initial);
    let ts = material_initial + (device_initial - material_initial) * (gamma / (1.0 + gamma));
    Ok(ts.clamp(lo, hi))
}

/// Temperature at depth `x` and time `t` inside a half-space that started at
/// `initial` and whose surface has been held at `surface` since `t = 0`.
pub fn temp_profile(
    props: &ThermalProps,
    initial: f64,
    surface: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "depth must be finite and >= 0, got {x}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "time must be finite and > 0, got {t}"
        )));
    }
    if x == 0.0 {
        return Ok(surface);
    }
    let eta = x / (2.0 * (props.diffusivity * t).sqrt());
    Ok(surface + (initial - surface) * erf(eta))
}

/// Spatial derivative of [`temp_profile`], `(T_i - T_s)/sqrt(παt) · exp(-x²/4αt)`.
pub fn temp_gradient(
    props: &ThermalProps,
    initial: f64,
    surface: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    if !(x >= 0.0) || !(t > 0.0) {
        return Err(Error::domain(format!(
            "need x >= 0 and t > 0, got x={x}, t={t}"
        )));
    }
    let at = props.diffusivity * t;
    Ok((initial - surface) / (PI * at).sqrt() * (-x * x / (4.0 * at)).exp())
}

/// Heat flow [W] through the contact area on the device side.
///
/// `delta_t` is `T_devi - T_mi`. Positive values mean heat leaves the
/// device, i.e. the device is the hotter body. Evaluating the same formula
/// with material properties, `-delta_t` and `1/γ` gives the material-side
/// flow, equal in magnitude and opposite in sign.
pub fn heat_flux_device(
    props_dev: &ThermalProps,
    delta_t: f64,
    gamma: f64,
    area: f64,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be > 0, got {t}")));
    }
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::domain(format!("area must be > 0, got {area}")));
    }
    positive("gamma", gamma)?;
    finite("temperature difference", delta_t)?;
    let drop = delta_t / (1.0 + gamma);
    Ok(props_dev.conductivity * area * drop / (PI * props_dev.diffusivity * t).sqrt())
}

/// Fraction of the device-initial to surface-temperature step that a sensor
/// at `depth` has *not* yet seen at time `t`, i.e. `erf(depth / 2sqrt(αt))`.
/// Equals 1 at `t = 0` by convention.
pub fn sensor_lag(props_dev: &ThermalProps, depth: f64, t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if depth == 0.0 {
        0.0
    } else {
        erf(depth / (2.0 * (props_dev.diffusivity * t).sqrt()))
    }
}

/// Number of samples in a trace of `duration` seconds at `sample_rate` Hz,
/// including the `t = 0` sample.
pub fn sample_count(duration: f64, sample_rate: f64) -> usize {
    // Guard against 10.000000000000002 rounding up to an extra sample.
    let n = duration * sample_rate;
    let rounded = n.round();
    let steps = if (n - rounded).abs() < 1e-9 * rounded.max(1.0) {
        rounded
    } else {
        n.ceil()
    };
    steps as usize + 1
}

/// Temperature seen by a sensor embedded `sensor_depth` below the device
/// surface, sampled uniformly from contact onwards.
///
/// The `t = 0` sample is the device initial temperature. Later samples
/// follow the device-side erf profile and move monotonically toward the
/// contact surface temperature.
pub fn device_sensor_response(
    device: &ThermalProps,
    material: &ThermalProps,
    device_initial: f64,
    material_initial: f64,
    sensor_depth: f64,
    duration: f64,
    sample_rate: f64,
) -> Result<Vec<f64>> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(Error::domain(format!(
            "duration must be > 0, got {duration}"
        )));
    }
    if !(sample_rate > 0.0) || !sample_rate.is_finite() {
        return Err(Error::domain(format!(
            "sample rate must be > 0, got {sample_rate}"
        )));
    }
    if !(sensor_depth >= 0.0) || !sensor_depth.is_finite() {
        return Err(Error::domain(format!(
            "sensor depth must be >= 0, got {sensor_depth}"
        )));
    }
    let state = ContactState::new(device, material, device_initial, material_initial)?;
    let n = sample_count(duration, sample_rate);
    let mut out = Vec::with_capacity(n);
    out.push(device_initial);
    for k in 1..n {
        let t = k as f64 / sample_rate;
        out.push(temp_profile(
            device,
            device_initial,
            state.surface_temp,
            sensor_depth,
            t,
        )?);
    }
    Ok(out)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

pub(crate) fn check_temperature(name: &str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v < ABSOLUTE_ZERO_C {
        return Err(Error::domain(format!(
            "{name} {v} °C is below absolute zero"
        )));
    }
    Ok(())
}
