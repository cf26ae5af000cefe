//! Explicit finite-difference solver for two half-spaces brought into contact.
//!
//! Each side is a uniform 1D grid of `grid_points` cells running from the
//! shared interface node (index 0) to a far node held at the initial
//! temperature. The two sides may use different spacings.
//!
//! Interior nodes use the usual three-point update
//! `T_i += α·dt/dx² · (T_{i-1} - 2T_i + T_{i+1})`.
//! The interface node owns half a cell on each side, so its heat capacity is
//! `(ρc_d·dx_d + ρc_m·dx_m)/2` and it exchanges heat through the two
//! conductances `λ_d/dx_d` and `λ_m/dx_m`:
//!
//! ```text
//! C_0 dT_0/dt = λ_d (T_d1 - T_0)/dx_d + λ_m (T_m1 - T_0)/dx_m
//! ```
//!
//! which is the discrete statement of flux continuity across the contact.
//! The interface starts at the capacity-weighted mean of the two initial
//! temperatures so the discrete energy is exactly conserved from step zero.
//! When both sides are sized proportionally to `sqrt(α)` (see
//! [`FdConfig::semi_infinite`]) the capacity of each half-cell is
//! proportional to the effusivity and that mean is the closed-form contact
//! temperature.
//!
//! The scheme is stable when `α·dt/dx² <= 1/2` on both sides; the same bound
//! keeps the interface update a convex combination, so the maximum principle
//! holds everywhere.

use std::fmt::Write as _;

use crate::erf::erfc;
use crate::error::{Error, Result};
use crate::thermal::ThermalProps;

/// Largest far-boundary drift accepted for semi-infinite emulation, in °C.
pub const MAX_BOUNDARY_DRIFT: f64 = 1e-6;
/// Fraction of the CFL bound used when choosing `dt` automatically.
pub const CFL_SAFETY: f64 = 0.4;

/// Default grid: cells per side.
pub const DEFAULT_GRID_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    /// Length of the device half-space [m].
    pub device_length: f64,
    /// Length of the material half-space [m].
    pub material_length: f64,
    /// Cells per side.
    pub grid_points: usize,
    /// Time step [s].
    pub dt: f64,
    pub total_time: f64,
    /// Field snapshots are stored every `snapshot_interval` seconds,
    /// an integer multiple of `dt`.
    pub snapshot_interval: f64,
}

impl FdConfig {
    /// Both sides `half_length` long; `dt` chosen from the CFL bound.
    pub fn uniform(
        dev: &ThermalProps,
        mat: &ThermalProps,
        half_length: f64,
        grid_points: usize,
        total_time: f64,
        snapshot_interval: f64,
    ) -> Result<Self> {
        Self::with_lengths(
            dev,
            mat,
            half_length,
            half_length,
            grid_points,
            total_time,
            snapshot_interval,
        )
    }

    /// Sizes each side to `11·sqrt(α·total_time)`, about 5.5 diffusion
    /// lengths, far enough that `erfc` at the boundary is ~1e-14.
    ///
    /// With equal `grid_points` this gives both sides the same stability
    /// limit and equal resolution relative to their diffusion lengths.
    pub fn semi_infinite(
        dev: &ThermalProps,
        mat: &ThermalProps,
        grid_points: usize,
        total_time: f64,
        snapshot_interval: f64,
    ) -> Result<Self> {
        let len = |p: &ThermalProps| 11.0 * (p.diffusivity() * total_time).sqrt();
        Self::with_lengths(
            dev,
            mat,
            len(dev),
            len(mat),
            grid_points,
            total_time,
            snapshot_interval,
        )
    }

    pub fn with_lengths(
        dev: &ThermalProps,
        mat: &ThermalProps,
        device_length: f64,
        material_length: f64,
        grid_points: usize,
        total_time: f64,
        snapshot_interval: f64,
    ) -> Result<Self> {
        if grid_points < 3 {
            return Err(Error::invalid(
                "grid_points",
                format!("need at least 3, got {grid_points}"),
            ));
        }
        for (name, v) in [
            ("device_length", device_length),
            ("material_length", material_length),
            ("total_time", total_time),
            ("snapshot_interval", snapshot_interval),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        let dx_d = device_length / grid_points as f64;
        let dx_m = material_length / grid_points as f64;
        let dt_max =
            CFL_SAFETY * (dx_d * dx_d / dev.diffusivity()).min(dx_m * dx_m / mat.diffusivity());
        let per_snapshot = (snapshot_interval / dt_max).ceil().max(1.0);
        Ok(Self {
            device_length,
            material_length,
            grid_points,
            dt: snapshot_interval / per_snapshot,
            total_time,
            snapshot_interval,
        })
    }

    fn dx(&self) -> (f64, f64) {
        let n = self.grid_points as f64;
        (self.device_length / n, self.material_length / n)
    }

    fn steps_per_snapshot(&self) -> usize {
        (self.snapshot_interval / self.dt).round() as usize
    }

    /// Checks CFL on both sides and that neither far boundary would drift by
    /// more than [`MAX_BOUNDARY_DRIFT`] for a contact of size `delta_t`.
    pub fn validate(&self, dev: &ThermalProps, mat: &ThermalProps, delta_t: f64) -> Result<()> {
        let (dx_d, dx_m) = self.dx();
        for (side, p, dx) in [("device", dev, dx_d), ("material", mat, dx_m)] {
            let r = p.diffusivity() * self.dt / (dx * dx);
            if r > 0.5 {
                return Err(Error::invalid(
                    "dt",
                    format!("unstable on the {side} side: α·dt/dx² = {r:.4} > 0.5"),
                ));
            }
        }
        let k = self.steps_per_snapshot();
        if k == 0
            || ((k as f64 * self.dt) - self.snapshot_interval).abs() > 1e-9 * self.snapshot_interval
        {
            return Err(Error::invalid(
                "snapshot_interval",
                "must be an integer multiple of dt",
            ));
        }
        for (side, p, len) in [
            ("device", dev, self.device_length),
            ("material", mat, self.material_length),
        ] {
            let drift =
                delta_t.abs() * erfc(len / (2.0 * (p.diffusivity() * self.total_time).sqrt()));
            if drift > MAX_BOUNDARY_DRIFT {
                return Err(Error::invalid(
                    format!("{side}_length"),
                    format!("{len} m is too short: far boundary would move by {drift:.3e} °C"),
                ));
            }
        }
        Ok(())
    }
}

/// Solution of one contact run.
#[derive(Debug, Clone)]
pub struct FdSolution {
    /// Node depths from the interface into the device, `grid_points + 1` entries.
    pub device_x: Vec<f64>,
    pub material_x: Vec<f64>,
    /// Snapshot times, starting at 0.
    pub times: Vec<f64>,
    /// `device_field[k][i]` is the temperature at `device_x[i]`, `times[k]`.
    /// Index 0 is the shared interface node on both sides.
    pub device_field: Vec<Vec<f64>>,
    pub material_field: Vec<Vec<f64>>,
    pub device_conductivity: f64,
    pub device_heat_capacity: f64,
    pub material_heat_capacity: f64,
    pub device_initial: f64,
    pub material_initial: f64,
}

impl FdSolution {
    pub fn interface_temps(&self) -> Vec<f64> {
        self.device_field.iter().map(|f| f[0]).collect()
    }

    /// Linear interpolation of the device-side field at depth `x`, snapshot `k`.
    pub fn device_temp_at(&self, k: usize, x: f64) -> f64 {
        interpolate(&self.device_x, &self.device_field[k], x)
    }

    pub fn material_temp_at(&self, k: usize, x: f64) -> f64 {
        interpolate(&self.material_x, &self.material_field[k], x)
    }

    /// Snapshot index closest to time `t`.
    pub fn snapshot_index(&self, t: f64) -> usize {
        let dt = self.times.get(1).copied().unwrap_or(1.0);
        ((t / dt).round() as usize).min(self.times.len() - 1)
    }

    /// Heat content relative to the initial state [J/m²], per side. The
    /// interface node's capacity is split between the two sides.
    pub fn enthalpy_change(&self, k: usize) -> (f64, f64) {
        let side = |field: &[f64], x: &[f64], cap: f64, init: f64| {
            let dx = x[1] - x[0];
            let n = field.len() - 1;
            let mut e = 0.5 * (field[0] - init);
            for &v in &field[1..n] {
                e += v - init;
            }
            e += 0.5 * (field[n] - init);
            cap * dx * e
        };
        (
            side(
                &self.device_field[k],
                &self.device_x,
                self.device_heat_capacity,
                self.device_initial,
            ),
            side(
                &self.material_field[k],
                &self.material_x,
                self.material_heat_capacity,
                self.material_initial,
            ),
        )
    }

    /// Field snapshots as CSV: `time_s,side,x_m,temperature_c`, device depths
    /// reported as negative positions.
    pub fn to_csv(&self, stride: usize) -> String {
        let stride = stride.max(1);
        let mut out = String::from("time_s,side,x_m,temperature_c\n");
        for (k, &t) in self.times.iter().enumerate() {
            for i in (0..self.device_x.len()).rev().step_by(stride) {
                let _ = writeln!(
                    out,
                    "{t},device,{},{}",
                    -self.device_x[i], self.device_field[k][i]
                );
            }
            for i in (1..self.material_x.len()).step_by(stride) {
                let _ = writeln!(
                    out,
                    "{t},material,{},{}",
                    self.material_x[i], self.material_field[k][i]
                );
            }
        }
        out
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let dx = xs[1] - xs[0];
    let pos = (x / dx).max(0.0);
    let i = (pos.floor() as usize).min(xs.len() - 2);
    let w = pos - i as f64;
    ys[i] * (1.0 - w) + ys[i + 1] * w
}

/// Runs the explicit scheme for the pair and returns snapshots of both fields.
pub fn solve_contact(
    dev: &ThermalProps,
    mat: &ThermalProps,
    device_initial: f64,
    material_initial: f64,
    cfg: &FdConfig,
) -> Result<FdSolution> {
    crate::thermal::check_temperature("device initial temperature", device_initial)?;
    crate::thermal::check_temperature("material initial temperature", material_initial)?;
    cfg.validate(dev, mat, device_initial - material_initial)?;

    let n = cfg.grid_points;
    let (dx_d, dx_m) = cfg.dx();
    let r_d = dev.diffusivity() * cfg.dt / (dx_d * dx_d);
    let r_m = mat.diffusivity() * cfg.dt / (dx_m * dx_m);
    let cap_d = dev.volumetric_heat_capacity();
    let cap_m = mat.volumetric_heat_capacity();
    let half_cells = 0.5 * (cap_d * dx_d + cap_m * dx_m);
    let g_d = dev.conductivity() / dx_d * cfg.dt / half_cells;
    let g_m = mat.conductivity() / dx_m * cfg.dt / half_cells;

    let mut d = vec![device_initial; n + 1];
    let mut m = vec![material_initial; n + 1];
    let iface = (cap_d * dx_d * device_initial + cap_m * dx_m * material_initial)
        / (cap_d * dx_d + cap_m * dx_m);
    d[0] = iface;
    m[0] = iface;

    let snapshots = (cfg.total_time / cfg.snapshot_interval).round() as usize;
    let per = cfg.steps_per_snapshot();
    let mut times = Vec::with_capacity(snapshots + 1);
    let mut device_field = Vec::with_capacity(snapshots + 1);
    let mut material_field = Vec::with_capacity(snapshots + 1);
    times.push(0.0);
    device_field.push(d.clone());
    material_field.push(m.clone());

    let mut d_next = d.clone();
    let mut m_next = m.clone();
    for s in 1..=snapshots {
        for _ in 0..per {
            let t0 = d[0] + g_d * (d[1] - d[0]) + g_m * (m[1] - m[0]);
            diffuse(&d, &mut d_next, r_d);
            diffuse(&m, &mut m_next, r_m);
            d_next[0] = t0;
            m_next[0] = t0;
            std::mem::swap(&mut d, &mut d_next);
            std::mem::swap(&mut m, &mut m_next);
        }
        if !d[0].is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite interface temperature at snapshot {s}"
            )));
        }
        times.push(s as f64 * cfg.snapshot_interval);
        device_field.push(d.clone());
        material_field.push(m.clone());
    }

    let xs = |dx: f64| (0..=n).map(|i| i as f64 * dx).collect::<Vec<_>>();
    Ok(FdSolution {
        device_x: xs(dx_d),
        material_x: xs(dx_m),
        times,
        device_field,
        material_field,
        device_conductivity: dev.conductivity(),
        device_heat_capacity: cap_d,
        material_heat_capacity: cap_m,
        device_initial,
        material_initial,
    })
}

// Interior update; the last node stays at its initial value.
fn diffuse(cur: &[f64], next: &mut [f64], r: f64) {
    let n = cur.len();
    for (out, w) in next[1..n - 1].iter_mut().zip(cur.windows(3)) {
        *out = w[1] + r * (w[0] - 2.0 * w[1] + w[2]);
    }
    next[n - 1] = cur[n - 1];
}

/// Heat flux [W/m²] from the device into the interface at every snapshot,
/// from the second-order one-sided difference `λ_d (-3T_0 + 4T_1 - T_2) / 2dx`.
/// Positive when the device is hotter. The `t = 0` entry is not meaningful.
pub fn interface_flux(sol: &FdSolution) -> Vec<f64> {
    let dx = sol.device_x[1] - sol.device_x[0];
    sol.device_field
        .iter()
        .map(|f| sol.device_conductivity * (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx))
        .collect()
}

/// Least-squares slope of `ln|y|` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && y.abs() > 0.0)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
