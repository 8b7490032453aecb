//! Parameter scans over pulse delay, pulse area and atomic momentum,
//! tabulating the final populations, the peak intermediate population and
//! the momentum kick for each grid point.
//!
//! Grid points are independent propagations evaluated by a parallel map with
//! deterministic result ordering; a single failing point aborts the sweep
//! and names the offending parameter value.

use rayon::prelude::*;

use crate::analysis::{max_intermediate_population, momentum_kick, populations};
use crate::config::SimulationConfig;
use crate::propagator::simulate;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Which parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweptParameter {
    /// Pulse delay `tau`; positive values put Stokes first.
    Delay,
    /// Pulse area `omega0 * pulse_width`; the peak Rabi frequency is derived
    /// from each grid value at fixed width.
    Area,
    /// Momentum `q`.
    Momentum,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::Delay => "delay",
            SweptParameter::Area => "area",
            SweptParameter::Momentum => "momentum",
        }
    }
}

/// A sweep request: base configuration, the swept parameter and its grid.
#[derive(Clone, Debug)]
pub struct SweepSpec<T> {
    pub base: SimulationConfig<T>,
    pub parameter: SweptParameter,
    /// Strictly monotone, nonempty grid of parameter values.
    pub grid: Vec<T>,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(base: SimulationConfig<T>, parameter: SweptParameter, grid: Vec<T>) -> Self {
        SweepSpec {
            base,
            parameter,
            grid,
        }
    }

    /// Default delay grid: `tau / T` from -2 to 2 with 81 points, which
    /// resolves the structure of both the slow- and fast-atom scans.
    pub fn default_delay(base: SimulationConfig<T>) -> Self {
        let half_range = real::<T>(2.0) * base.pulse_width;
        Self::new(
            base,
            SweptParameter::Delay,
            linspace(-half_range, half_range, 81),
        )
    }

    /// Default area grid: `omega0 * T` from 0 to 200 with 51 points, which
    /// covers the transfer threshold region.
    pub fn default_area(base: SimulationConfig<T>) -> Self {
        Self::new(
            base,
            SweptParameter::Area,
            linspace(T::zero(), real(200.0), 51),
        )
    }

    /// Default momentum grid: `q` from 0.1 to 10 with 100 points, spanning
    /// the slow- and fast-atom regimes.
    pub fn default_momentum(base: SimulationConfig<T>) -> Self {
        Self::new(
            base,
            SweptParameter::Momentum,
            linspace(real(0.1), real(10.0), 100),
        )
    }

    fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("sweep grid is empty".into()));
        }
        let increasing = self.grid.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.grid.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidParameter(
                "sweep grid must be strictly monotone".into(),
            ));
        }
        if self.parameter == SweptParameter::Area {
            if self.grid.iter().any(|v| *v < T::zero()) {
                return Err(Error::InvalidParameter(
                    "pulse areas must be nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    /// The per-point configuration for one grid value.
    pub fn point_config(&self, value: T) -> SimulationConfig<T> {
        let mut cfg = self.base;
        match self.parameter {
            SweptParameter::Delay => cfg.delay = value,
            SweptParameter::Area => cfg.omega0 = value / cfg.pulse_width,
            SweptParameter::Momentum => cfg.q = value,
        }
        cfg
    }
}

/// Evenly spaced values from `start` to `end` inclusive.
pub fn linspace<T: Real>(start: T, end: T, points: usize) -> Vec<T> {
    if points == 1 {
        return vec![start];
    }
    let steps = real::<T>((points - 1) as f64);
    (0..points)
        .map(|k| {
            if k + 1 == points {
                end
            } else {
                start + (end - start) * real::<T>(k as f64) / steps
            }
        })
        .collect()
}

/// Observables of one grid point.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow<T> {
    pub value: T,
    pub p1: T,
    pub p2: T,
    pub p3: T,
    pub max_p2: T,
    pub kick: T,
}

/// Table of observables versus the swept parameter, with the provenance
/// needed to reproduce it.
#[derive(Clone, Debug)]
pub struct SweepResult<T> {
    pub parameter: SweptParameter,
    pub base: SimulationConfig<T>,
    pub grid: Vec<T>,
    pub rows: Vec<SweepRow<T>>,
    /// For momentum sweeps: the interpolated `q` where the final
    /// intermediate population first rises through one half, i.e. where the
    /// intuitive-order outcome switches from |3> to |2>.
    pub transition_q: Option<T>,
}

fn run_point<T: Real>(spec: &SweepSpec<T>, value: T) -> Result<SweepRow<T>> {
    let wrap = |source: Error| Error::SweepPoint {
        parameter: spec.parameter.name(),
        value: value.to_f64().unwrap_or(f64::NAN),
        source: Box::new(source),
    };
    let cfg = spec.point_config(value).validate().map_err(wrap)?;
    let (fin, traj) = simulate(&cfg).map_err(wrap)?;
    let p = populations(&fin).map_err(wrap)?;
    let max_p2 = max_intermediate_population(&traj).map_err(wrap)?;
    let kick = momentum_kick(p).map_err(wrap)?;
    Ok(SweepRow {
        value,
        p1: p[0],
        p2: p[1],
        p3: p[2],
        max_p2,
        kick,
    })
}

fn run_sweep<T: Real>(spec: &SweepSpec<T>, expected: SweptParameter) -> Result<SweepResult<T>> {
    if spec.parameter != expected {
        return Err(Error::InvalidParameter(format!(
            "sweep expects the {} parameter, spec carries {}",
            expected.name(),
            spec.parameter.name()
        )));
    }
    spec.validate()?;
    let outcomes: Vec<Result<SweepRow<T>>> = spec
        .grid
        .par_iter()
        .map(|value| run_point(spec, *value))
        .collect();
    // surface the first failure in grid order, deterministically
    let mut rows = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        rows.push(outcome?);
    }
    let transition_q = match expected {
        SweptParameter::Momentum => transition_midpoint(&rows),
        _ => None,
    };
    Ok(SweepResult {
        parameter: spec.parameter,
        base: spec.base,
        grid: spec.grid.clone(),
        rows,
        transition_q,
    })
}

/// Interpolated parameter value where the final intermediate population
/// first rises through one half.
fn transition_midpoint<T: Real>(rows: &[SweepRow<T>]) -> Option<T> {
    let half = real::<T>(0.5);
    rows.windows(2)
        .find(|w| w[0].p2 < half && w[1].p2 >= half)
        .map(|w| {
            let run = w[1].p2 - w[0].p2;
            let frac = if run == T::zero() {
                half
            } else {
                (half - w[0].p2) / run
            };
            w[0].value + (w[1].value - w[0].value) * frac
        })
}

/// Propagate every delay in the grid from the bare ground level.
pub fn sweep_delay<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    run_sweep(spec, SweptParameter::Delay)
}

/// Propagate every pulse area in the grid at fixed delay.
pub fn sweep_area<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    run_sweep(spec, SweptParameter::Area)
}

/// Propagate every momentum in the grid at fixed pulses, recording the
/// momentum where the intuitive-order outcome switches from |3> to |2>.
pub fn sweep_momentum<T: Real>(spec: &SweepSpec<T>) -> Result<SweepResult<T>> {
    run_sweep(spec, SweptParameter::Momentum)
}
