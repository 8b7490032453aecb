//! Dimensionless unit system and the validated parameter record shared by
//! every other module.
//!
//! Units: `hbar = 1`, energies in the recoil frequency `w_r = hbar k^2 / 2M`,
//! time in `1/w_r`, momentum in `hbar k`. The single-photon detuning enters
//! only through the replacement `1 -> 1 + detuning` on the intermediate
//! level, so the bare diagonal reads `(2q, -(1 + detuning), -2q)`.

use std::collections::BTreeMap;

use crate::pulses::PulsePair;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Integrator and root-finder tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Relative local error bound of the adaptive integrator.
    pub rtol: T,
    /// Absolute local error bound of the adaptive integrator.
    pub atol: T,
    /// Largest allowed drift of the state norm over a full run.
    pub norm_tol: T,
    /// Accepted residual of the crossing-time root search.
    pub root_tol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            rtol: real(1e-9),
            atol: real(1e-10),
            norm_tol: real(1e-9),
            root_tol: real(1e-10),
        }
    }
}

/// Dimensionless physical and pulse parameters of one run.
///
/// Immutable after validation; safe to share across concurrent sweep
/// evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig<T> {
    /// Atomic momentum projection onto the beams, in units of `hbar k`.
    pub q: T,
    /// Peak Rabi frequency of both pulses, in units of `w_r`.
    pub omega0: T,
    /// Gaussian width `T` of both pulses, in units of `1/w_r`.
    pub pulse_width: T,
    /// Pulse delay `tau`: pump centered at `+tau`, Stokes at `-tau`.
    /// Positive delay puts Stokes first (counterintuitive, STIRAP ordering).
    pub delay: T,
    /// Single-photon detuning in units of `w_r`.
    pub detuning: T,
    /// Integration window. `None` selects the default window, which extends
    /// four pulse widths beyond the farther pulse center so each Gaussian is
    /// truncated only where it has fallen to `exp(-16)` of its peak.
    pub t_span: Option<(T, T)>,
    pub tolerances: Tolerances<T>,
}

impl<T: Real> SimulationConfig<T> {
    pub fn new(q: T, omega0: T, pulse_width: T, delay: T) -> Self {
        SimulationConfig {
            q,
            omega0,
            pulse_width,
            delay,
            detuning: T::zero(),
            t_span: None,
            tolerances: Tolerances::default(),
        }
    }

    /// The resolved integration window.
    pub fn time_span(&self) -> (T, T) {
        match self.t_span {
            Some(span) => span,
            None => {
                let reach = self.delay.abs() + real::<T>(4.0) * self.pulse_width;
                (-reach, reach)
            }
        }
    }

    pub fn pulses(&self) -> PulsePair<T> {
        PulsePair {
            omega0: self.omega0,
            pulse_width: self.pulse_width,
            delay: self.delay,
        }
    }

    /// Check every invariant, returning the record unchanged when all hold.
    /// The error names the first violated invariant. Idempotent.
    pub fn validate(self) -> Result<Self> {
        fn finite<T: Real>(name: &str, value: T) -> Result<()> {
            if value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be finite")))
            }
        }
        finite("q", self.q)?;
        finite("omega0", self.omega0)?;
        finite("pulse_width", self.pulse_width)?;
        finite("delay", self.delay)?;
        finite("detuning", self.detuning)?;
        if !(self.pulse_width > T::zero()) {
            return Err(Error::InvalidParameter(
                "pulse_width must be positive".into(),
            ));
        }
        if !(self.omega0 >= T::zero()) {
            return Err(Error::InvalidParameter(
                "omega0 must be nonnegative".into(),
            ));
        }
        if let Some((start, end)) = self.t_span {
            finite("t_start", start)?;
            finite("t_end", end)?;
            if !(start < end) {
                return Err(Error::InvalidParameter(
                    "t_start must be less than t_end".into(),
                ));
            }
        }
        let tol = &self.tolerances;
        for (name, value) in [
            ("rtol", tol.rtol),
            ("atol", tol.atol),
            ("norm_tol", tol.norm_tol),
            ("root_tol", tol.root_tol),
        ] {
            finite(name, value)?;
            if !(value > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive"
                )));
            }
        }
        Ok(self)
    }
}

/// Convert a beam geometry to the dimensionless momentum `q`.
///
/// An atom of mass `mass` moving at `speed` crosses the laser axis at angle
/// `angle`; the projection onto the beams gives
/// `q = mass * speed * cos(angle) / (hbar * wavenumber)`. The projection, and
/// with it the Doppler shift, vanishes for perpendicular crossing.
pub fn momentum_from_geometry<T: Real>(
    speed: T,
    angle: T,
    wavenumber: T,
    mass: T,
    hbar: T,
) -> Result<T> {
    for (name, value) in [("wavenumber", wavenumber), ("mass", mass), ("hbar", hbar)] {
        if !(value > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive"
            )));
        }
    }
    Ok(mass * speed * angle.cos() / (hbar * wavenumber))
}

/// Keys accepted in config files and `--set` overrides.
pub const CONFIG_KEYS: [&str; 9] = [
    "q",
    "omega0",
    "pulse_width",
    "delay",
    "detuning",
    "t_start",
    "t_end",
    "rtol",
    "norm_tol",
];

const REQUIRED_KEYS: [&str; 4] = ["q", "omega0", "pulse_width", "delay"];

/// Parse the flat `key = value` config format into a key map.
///
/// Blank lines and lines starting with `#` are ignored. Unknown or duplicate
/// keys are errors.
pub fn parse_config_str(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", idx + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::UnknownKey(key.to_string()));
        }
        let parsed: f64 = value.parse().map_err(|_| {
            Error::Config(format!("line {}: invalid number `{value}`", idx + 1))
        })?;
        if map.insert(key.to_string(), parsed).is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{key}`",
                idx + 1
            )));
        }
    }
    Ok(map)
}

/// Apply a `key=value` override to a parsed key map.
pub fn apply_override(map: &mut BTreeMap<String, f64>, setting: &str) -> Result<()> {
    let (key, value) = setting
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{setting}`: expected KEY=VALUE")))?;
    let key = key.trim();
    if !CONFIG_KEYS.contains(&key) {
        return Err(Error::UnknownKey(key.to_string()));
    }
    let parsed: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("override `{setting}`: invalid number")))?;
    map.insert(key.to_string(), parsed);
    Ok(())
}

/// Build a validated config from a key map.
///
/// `q`, `omega0`, `pulse_width` and `delay` are required. `detuning`
/// defaults to zero, the window to the derived default, and the integrator
/// to `rtol = 1e-9` with `atol = rtol / 10`. `t_start` and `t_end` must be
/// given together.
pub fn config_from_map<T: Real>(map: &BTreeMap<String, f64>) -> Result<SimulationConfig<T>> {
    for key in REQUIRED_KEYS {
        if !map.contains_key(key) {
            return Err(Error::Config(format!("missing required key `{key}`")));
        }
    }
    let get = |key: &str| map.get(key).copied().map(real::<T>);
    let mut cfg = SimulationConfig::new(
        get("q").unwrap(),
        get("omega0").unwrap(),
        get("pulse_width").unwrap(),
        get("delay").unwrap(),
    );
    if let Some(det) = get("detuning") {
        cfg.detuning = det;
    }
    match (get("t_start"), get("t_end")) {
        (Some(start), Some(end)) => cfg.t_span = Some((start, end)),
        (None, None) => {}
        _ => {
            return Err(Error::Config(
                "t_start and t_end must be given together".into(),
            ))
        }
    }
    if let Some(rtol) = get("rtol") {
        cfg.tolerances.rtol = rtol;
        cfg.tolerances.atol = rtol * real(0.1);
    }
    if let Some(norm_tol) = get("norm_tol") {
        cfg.tolerances.norm_tol = norm_tol;
    }
    cfg.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig2_config() -> SimulationConfig<f64> {
        SimulationConfig::new(0.1, 10.0, 10.0, 10.0)
    }

    #[test]
    fn fig2_parameters_are_valid() {
        assert!(fig2_config().validate().is_ok());
    }

    #[test]
    fn zero_pulse_width_names_the_invariant() {
        let cfg = SimulationConfig::new(0.1, 10.0, 0.0, 10.0);
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("pulse_width must be positive"));
    }

    #[test]
    fn reversed_span_names_the_invariant() {
        let mut cfg = fig2_config();
        cfg.t_span = Some((5.0, -5.0));
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("t_start must be less than t_end"));
    }

    #[test]
    fn default_span_truncates_at_exp_minus_16() {
        let cfg = fig2_config();
        let (start, end) = cfg.time_span();
        assert_eq!((start, end), (-50.0, 50.0));
        let pulses = cfg.pulses();
        // the nearer pulse edge sits exactly four widths from its center
        let edge = pulses.pump(end) / cfg.omega0;
        assert!((edge - (-16.0f64).exp()).abs() < 1e-22);
        assert!(pulses.stokes(start) / cfg.omega0 <= (-16.0f64).exp());
    }

    #[test]
    fn momentum_projection_examples() {
        let q = momentum_from_geometry(2.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert!((q - 2.0).abs() < 1e-15);
        let q = momentum_from_geometry(7.3, std::f64::consts::FRAC_PI_2, 1.0, 1.0, 1.0).unwrap();
        assert!(q.abs() < 1e-15);
        let q =
            momentum_from_geometry(1.0, std::f64::consts::FRAC_PI_3, 2.0, 4.0, 1.0).unwrap();
        assert!((q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn momentum_rejects_nonpositive_scales() {
        assert!(momentum_from_geometry(1.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(momentum_from_geometry(1.0, 0.0, 1.0, -2.0, 1.0).is_err());
        assert!(momentum_from_geometry(1.0, 0.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn parses_flat_key_value_text() {
        let text = "# comment\nq = 0.1\nomega0 = 10\npulse_width = 10\ndelay = 10\n\nrtol = 1e-8\n";
        let map = parse_config_str(text).unwrap();
        let cfg: SimulationConfig<f64> = config_from_map(&map).unwrap();
        assert_eq!(cfg.q, 0.1);
        assert_eq!(cfg.tolerances.rtol, 1e-8);
        assert_eq!(cfg.tolerances.atol, 1e-9);
        assert_eq!(cfg.detuning, 0.0);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = parse_config_str("qq = 1\n").unwrap_err();
        assert!(matches!(err, Error::UnknownKey(ref k) if k == "qq"));
    }

    #[test]
    fn duplicate_key_is_an_error() {
        assert!(parse_config_str("q = 1\nq = 2\n").is_err());
    }

    #[test]
    fn missing_required_key_is_an_error() {
        let map = parse_config_str("q = 1\nomega0 = 2\npulse_width = 3\n").unwrap();
        let err = config_from_map::<f64>(&map).unwrap_err();
        assert!(err.to_string().contains("delay"));
    }

    #[test]
    fn half_open_window_is_an_error() {
        let map =
            parse_config_str("q = 1\nomega0 = 2\npulse_width = 3\ndelay = 0\nt_start = -1\n")
                .unwrap();
        assert!(config_from_map::<f64>(&map).is_err());
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut map = parse_config_str("q = 1\nomega0 = 2\npulse_width = 3\ndelay = 0\n").unwrap();
        apply_override(&mut map, "q=10").unwrap();
        assert_eq!(map["q"], 10.0);
        assert!(apply_override(&mut map, "bogus=1").is_err());
        assert!(apply_override(&mut map, "q:1").is_err());
    }

    proptest! {
        #[test]
        fn validate_is_idempotent(
            q in -20.0..20.0f64,
            omega0 in 0.0..100.0f64,
            width in 0.01..50.0f64,
            delay in -50.0..50.0f64,
        ) {
            let cfg = SimulationConfig::new(q, omega0, width, delay);
            let once = cfg.validate().unwrap();
            let twice = once.validate().unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn momentum_is_linear_in_speed(
            v in -10.0..10.0f64,
            angle in 0.0..std::f64::consts::PI,
            k in 0.1..10.0f64,
            m in 0.1..10.0f64,
        ) {
            let q1 = momentum_from_geometry(v, angle, k, m, 1.0).unwrap();
            let q2 = momentum_from_geometry(2.0 * v, angle, k, m, 1.0).unwrap();
            prop_assert!((q2 - 2.0 * q1).abs() <= 1e-12 * q1.abs().max(1.0));
        }
    }
}
