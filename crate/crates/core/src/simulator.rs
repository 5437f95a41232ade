//! First-order finite-volume solver for the impact problem on `X ∈ [0, L]`,
//! used to cross-check the analytic shock.
//!
//! The system is written as `u_t + F(u)_X = 0` with `u = (V, Γ)` and
//! `F(u) = (-P(Γ), -V)`, discretized with the local Lax-Friedrichs flux. The
//! wall `X = 0` is a reflecting ghost cell (`V` odd, `Γ` even) and the far
//! end copies the last cell.

use std::fmt::Write as _;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::constitutive::{stress, ModelSpec, StrainPoint};
use crate::shock::{solve_rankine_hugoniot, ShockSolution};
use crate::{Error, Real, Result};

pub const MIN_CELLS: usize = 16;
pub const MAX_CFL: f64 = 0.9;
/// Retries allowed for one time step before an inadmissible state is reported.
pub const MAX_STEP_HALVINGS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawSimConfig<T>",
    bound(serialize = "T: Serialize", deserialize = "T: Real + Deserialize<'de>")
)]
pub struct SimConfig<T> {
    pub model: ModelSpec<T>,
    pub v0: T,
    pub domain_length: T,
    pub cells: usize,
    pub cfl: T,
    pub t_end: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Real + Deserialize<'de>"))]
struct RawSimConfig<T> {
    model: ModelSpec<T>,
    v0: T,
    domain_length: T,
    cells: usize,
    cfl: T,
    t_end: T,
}

impl<T: Real> TryFrom<RawSimConfig<T>> for SimConfig<T> {
    type Error = Error;

    fn try_from(r: RawSimConfig<T>) -> Result<Self> {
        SimConfig::new(r.model, r.v0, r.domain_length, r.cells, r.cfl, r.t_end)
    }
}

impl<T: Real> SimConfig<T> {
    pub fn new(model: ModelSpec<T>, v0: T, domain_length: T, cells: usize, cfl: T, t_end: T) -> Result<Self> {
        let usage = |msg: String| Err(Error::Usage(msg));
        if !(v0 >= T::zero() && v0.is_finite()) {
            return usage(format!("field `v0` must be >= 0, got {v0}"));
        }
        if !(domain_length > T::zero() && domain_length.is_finite()) {
            return usage(format!("field `domain_length` must be positive, got {domain_length}"));
        }
        if cells < MIN_CELLS {
            return usage(format!("field `cells` must be at least {MIN_CELLS}, got {cells}"));
        }
        if !(cfl > T::zero() && cfl <= T::lit(MAX_CFL)) {
            return usage(format!("field `cfl` must lie in (0, {MAX_CFL}], got {cfl}"));
        }
        if !(t_end > T::zero() && t_end.is_finite()) {
            return usage(format!("field `t_end` must be positive, got {t_end}"));
        }
        if v0 > T::zero() {
            if let Ok(ShockSolution { sigma: Some(sigma), .. }) = solve_rankine_hugoniot(&model, v0) {
                if t_end * sigma >= domain_length {
                    return usage(format!(
                        "shock leaves the domain: σ t_end = {} >= domain_length = {domain_length}",
                        sigma * t_end
                    ));
                }
            }
        }
        Ok(SimConfig { model, v0, domain_length, cells, cfl, t_end })
    }

    pub fn dx(&self) -> T {
        self.domain_length / T::from_count(self.cells)
    }
}

/// Cell-centred snapshot of `(V, Γ)` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimField<T> {
    pub x_centers: Vec<T>,
    #[serde(rename = "V")]
    pub v: Vec<T>,
    #[serde(rename = "Gamma")]
    pub gamma: Vec<T>,
    pub t: T,
}

impl<T: Real> SimField<T> {
    /// Samples the analytic shock at the cell centres of a uniform grid.
    pub fn sample(sol: &ShockSolution<T>, cells: usize, domain_length: T, t: T) -> Self {
        let dx = domain_length / T::from_count(cells);
        let x_centers: Vec<T> = (0..cells).map(|i| (T::from_count(i) + T::lit(0.5)) * dx).collect();
        let (v, gamma) = x_centers.iter().map(|&x| crate::shock::evaluate(sol, x, t)).unzip();
        SimField { x_centers, v, gamma, t }
    }

    /// CSV with header `x,V,Gamma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,V,Gamma\n");
        for i in 0..self.x_centers.len() {
            let _ = writeln!(out, "{},{},{}", self.x_centers[i], self.v[i], self.gamma[i]);
        }
        out
    }
}

/// Numerical fluxes through the two ends of the domain for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFluxes<T> {
    /// Flux `(F_V, F_Γ)` through `X = 0`.
    pub left: (T, T),
    /// Flux `(F_V, F_Γ)` through `X = L`.
    pub right: (T, T),
}

/// Explicit LLF time stepper holding the current cell averages.
#[derive(Debug, Clone)]
pub struct FiniteVolume<T> {
    model: ModelSpec<T>,
    dx: T,
    t: T,
    v: Vec<T>,
    gamma: Vec<T>,
    // scratch: P and √P' per cell
    p: Vec<T>,
    c: Vec<T>,
}

impl<T: Real> FiniteVolume<T> {
    /// Impact initial data `V = -V₀`, `Γ = 0` in every cell.
    pub fn impact(cfg: &SimConfig<T>) -> Self {
        let n = cfg.cells;
        FiniteVolume {
            model: cfg.model,
            dx: cfg.dx(),
            t: T::zero(),
            v: vec![-cfg.v0; n],
            gamma: vec![T::zero(); n],
            p: vec![T::zero(); n],
            c: vec![T::zero(); n],
        }
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    /// `(Σ V dx, Σ Γ dx)`.
    pub fn totals(&self) -> (T, T) {
        let sv: T = self.v.iter().copied().sum();
        let sg: T = self.gamma.iter().copied().sum();
        (sv * self.dx, sg * self.dx)
    }

    /// Refreshes `P` and `√P'` per cell, failing on inadmissible states.
    fn refresh(&mut self) -> Result<T> {
        let mut max_c = T::zero();
        for i in 0..self.v.len() {
            let g = self.gamma[i];
            let pt = StrainPoint::new(g).map_err(|_| Error::Interpenetration {
                cell: i,
                t: self.t.to_f64().unwrap_or(f64::NAN),
                gamma: g.to_f64().unwrap_or(f64::NAN),
            })?;
            let e = stress(&self.model, pt);
            if !(e.dp > T::zero()) {
                return Err(Error::HyperbolicityLoss {
                    cell: i,
                    t: self.t.to_f64().unwrap_or(f64::NAN),
                    gamma: g.to_f64().unwrap_or(f64::NAN),
                    dp: e.dp.to_f64().unwrap_or(f64::NAN),
                });
            }
            self.p[i] = e.p;
            self.c[i] = e.dp.sqrt();
            max_c = max_c.max(self.c[i]);
        }
        Ok(max_c)
    }

    /// Largest stable step for the given CFL number.
    pub fn stable_dt(&mut self, cfl: T) -> Result<T> {
        let max_c = self.refresh()?;
        Ok(cfl * self.dx / max_c)
    }

    fn flux(&self, (vl, gl, pl, cl): (T, T, T, T), (vr, gr, pr, cr): (T, T, T, T)) -> (T, T) {
        let half = T::lit(0.5);
        let a = cl.max(cr);
        (
            half * (-pl - pr) - half * a * (vr - vl),
            half * (-vl - vr) - half * a * (gr - gl),
        )
    }

    /// Advances by `dt` and returns the fluxes through both ends.
    pub fn step(&mut self, dt: T) -> Result<BoundaryFluxes<T>> {
        self.refresh()?;
        let n = self.v.len();
        let cell = |i: usize| (self.v[i], self.gamma[i], self.p[i], self.c[i]);
        let (v0, g0, p0, c0) = cell(0);
        let ghost_left = (-v0, g0, p0, c0);
        let ghost_right = cell(n - 1);

        // interface k sits between cell k-1 and cell k
        let mut fluxes = Vec::with_capacity(n + 1);
        fluxes.push(self.flux(ghost_left, cell(0)));
        for k in 1..n {
            fluxes.push(self.flux(cell(k - 1), cell(k)));
        }
        fluxes.push(self.flux(cell(n - 1), ghost_right));

        let r = dt / self.dx;
        for i in 0..n {
            self.v[i] = self.v[i] - r * (fluxes[i + 1].0 - fluxes[i].0);
            self.gamma[i] = self.gamma[i] - r * (fluxes[i + 1].1 - fluxes[i].1);
        }
        self.t = self.t + dt;
        Ok(BoundaryFluxes { left: fluxes[0], right: fluxes[n] })
    }

    pub fn field(&self) -> SimField<T> {
        let x_centers = (0..self.v.len())
            .map(|i| (T::from_count(i) + T::lit(0.5)) * self.dx)
            .collect();
        SimField { x_centers, v: self.v.clone(), gamma: self.gamma.clone(), t: self.t }
    }
}

/// Runs the impact problem to `cfg.t_end`.
///
/// A step whose result leaves the admissible region is undone and retried
/// with half the time step, at most [`MAX_STEP_HALVINGS`] times. This matters
/// at start-up, where the rest-state wave speed underestimates the speed of
/// the compressed state created at the wall.
pub fn simulate<T: Real>(cfg: &SimConfig<T>) -> Result<SimField<T>> {
    let mut fv = FiniteVolume::impact(cfg);
    let mut max_c = fv.refresh()?;
    while fv.time() < cfg.t_end {
        let mut dt = (cfg.cfl * fv.dx / max_c).min(cfg.t_end - fv.time());
        if !(dt > T::zero()) {
            break;
        }
        let saved = fv.clone();
        let mut halvings = 0;
        loop {
            fv.step(dt)?;
            match fv.refresh() {
                Ok(c) => {
                    max_c = c;
                    break;
                }
                Err(e @ (Error::Interpenetration { .. } | Error::HyperbolicityLoss { .. })) => {
                    if halvings == MAX_STEP_HALVINGS {
                        return Err(e);
                    }
                    debug!("step rejected at t = {}: {e}", saved.t);
                    fv = saved.clone();
                    dt = dt / T::lit(2.0);
                    halvings += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(fv.field())
}

/// Estimates `(σ, Γ_l)` from a field: the front is where `Γ` crosses
/// `hint.gamma_l / 2` (nearest the far end, linear interpolation), and the
/// left strain is the mean of `Γ` over cells with `X < front/2`.
pub fn extract_shock<T: Real>(field: &SimField<T>, hint: &ShockSolution<T>) -> Result<(T, T)> {
    if !(field.t > T::zero()) {
        return Err(Error::Extraction("field time must be positive".into()));
    }
    if !(hint.gamma_l < T::zero()) {
        return Err(Error::Extraction("hint has no compression (Γ_l = 0)".into()));
    }
    let mid = hint.gamma_l / T::lit(2.0);
    let (x, g) = (&field.x_centers, &field.gamma);
    let n = g.len();
    let pos = (1..n).rev().find_map(|i| {
        if g[i - 1] < mid && g[i] >= mid {
            let w = (mid - g[i - 1]) / (g[i] - g[i - 1]);
            Some(x[i - 1] + w * (x[i] - x[i - 1]))
        } else {
            None
        }
    });
    let pos = pos.ok_or_else(|| {
        Error::Extraction(format!("Γ never crosses the midpoint {mid}"))
    })?;
    let plateau: Vec<T> = x
        .iter()
        .zip(g)
        .filter(|(&xi, _)| xi < pos / T::lit(2.0))
        .map(|(_, &gi)| gi)
        .collect();
    if plateau.is_empty() {
        return Err(Error::Extraction(format!(
            "no cells behind the front at X = {pos}"
        )));
    }
    let mean = plateau.iter().copied().sum::<T>() / T::from_count(plateau.len());
    Ok((pos / field.t, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelSpec64 as ModelSpec;

    fn linear_unit_speed() -> ModelSpec {
        // (λ + 2μ)/ρ₀ = 1
        ModelSpec::linear(1.0, 0.25, 0.5).unwrap()
    }

    #[test]
    fn rest_stays_at_rest() {
        let cfg = SimConfig::new(linear_unit_speed(), 0.0, 1.0, 64, 0.9, 0.5).unwrap();
        let f = simulate(&cfg).unwrap();
        assert!(f.v.iter().chain(&f.gamma).all(|&x| x == 0.0));
        assert!((f.t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_shock_position_and_strain() {
        let m = linear_unit_speed();
        let cfg = SimConfig::new(m, 0.3, 1.0, 2000, 0.9, 0.5).unwrap();
        let field = simulate(&cfg).unwrap();
        let sol = solve_rankine_hugoniot(&m, 0.3).unwrap();
        let (sigma, gamma) = extract_shock(&field, &sol).unwrap();
        assert!((sigma - 1.0).abs() < 0.01);
        assert!((gamma + 0.3).abs() < 0.003);
    }

    #[test]
    fn exact_field_extracts_exactly() {
        let m = ModelSpec::ogden(1.0, 1.0, 1.0).unwrap();
        let sol = solve_rankine_hugoniot(&m, 1.0).unwrap();
        let t = 0.2;
        let field = SimField::sample(&sol, 1000, 1.0, t);
        let (sigma, gamma) = extract_shock(&field, &sol).unwrap();
        assert!((sigma - sol.sigma.unwrap()).abs() <= 1e-3 / t);
        assert_eq!(gamma, sol.gamma_l);
    }

    #[test]
    fn conservation_up_to_boundary_fluxes() {
        let m = ModelSpec::ogden(1.0, 1.0, 1.0).unwrap();
        let cfg = SimConfig::new(m, 1.0, 1.0, 200, 0.9, 0.1).unwrap();
        let mut fv = FiniteVolume::impact(&cfg);
        for _ in 0..50 {
            let before = fv.totals();
            let dt = fv.stable_dt(cfg.cfl).unwrap();
            let fl = fv.step(dt).unwrap();
            let after = fv.totals();
            let ev = before.0 - dt * (fl.right.0 - fl.left.0);
            let eg = before.1 - dt * (fl.right.1 - fl.left.1);
            assert!((after.0 - ev).abs() <= 1e-10 * before.0.abs().max(1.0));
            assert!((after.1 - eg).abs() <= 1e-10 * before.1.abs().max(1.0));
        }
    }

    #[test]
    fn hyperbolicity_loss_is_reported() {
        // St.Venant-Kirchhoff loses hyperbolicity below Γ ≈ -0.42
        let m = ModelSpec::stvk(1.0, 1.0, 1.0).unwrap();
        let cfg = SimConfig::new(m, 0.9, 1.0, 100, 0.9, 0.3).unwrap();
        let err = simulate(&cfg).unwrap_err();
        assert!(matches!(err, Error::HyperbolicityLoss { .. }), "{err:?}");
    }

    #[test]
    fn config_validation() {
        let m = linear_unit_speed();
        assert!(SimConfig::new(m, 0.3, 1.0, 8, 0.9, 0.5).unwrap_err().is_usage());
        assert!(SimConfig::new(m, 0.3, 1.0, 100, 0.95, 0.5).unwrap_err().is_usage());
        assert!(SimConfig::new(m, 0.3, 1.0, 100, 0.9, 2.0).unwrap_err().is_usage());
        let text = r#"{"model": {"kind": "linear", "rho0": 1, "mu": 0.25, "lambda": 0.5},
                       "v0": 0.3, "domain_length": 1, "cells": 10, "cfl": 0.5, "t_end": 0.5}"#;
        let err = serde_json::from_str::<SimConfig<f64>>(text).unwrap_err();
        assert!(err.to_string().contains("`cells`"));
    }

    #[test]
    fn csv_export() {
        let m = linear_unit_speed();
        let sol = solve_rankine_hugoniot(&m, 0.3).unwrap();
        let f = SimField::sample(&sol, 16, 1.0, 0.5);
        let csv = f.to_csv();
        assert!(csv.starts_with("x,V,Gamma\n"));
        assert_eq!(csv.lines().count(), 17);
    }
}
