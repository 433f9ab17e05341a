//! Mission parameter model and unit helpers.
//!
//! [`MissionConfig`] is the typed home for every fixed mission parameter:
//! apertures, detector properties, loss factors, source rates, timing jitters
//! and the orbit/station constants the other modules need. Defaults are the
//! reference design values; a flat JSON file and `key=value` overrides can
//! replace any subset of them. All values are SI and all computation is done
//! in linear units; decibels appear only at the I/O boundary (keys suffixed
//! `_db` are converted on load).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}` given both directly and as `{key}_db`")]
    DuplicateKey { key: String },
    #[error("{field} {message}")]
    OutOfRange {
        field: &'static str,
        message: String,
    },
    #[error("override `{0}` is not of the form key=value")]
    BadOverride(String),
    #[error("domain error: {0}")]
    Domain(String),
}

fn out_of_range(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::OutOfRange {
        field,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// Decibel helpers
// ---------------------------------------------------------------------------

/// Convert a (power) decibel value to a linear ratio: `10^(x/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to decibels: `10·log10(p)`.
///
/// Errors if `p` is not strictly positive.
pub fn linear_to_db(p: f64) -> Result<f64, ConfigError> {
    if !(p > 0.0) {
        return Err(ConfigError::Domain(format!(
            "linear_to_db requires p > 0, got {p}"
        )));
    }
    Ok(10.0 * p.log10())
}

// ---------------------------------------------------------------------------
// Transmission
// ---------------------------------------------------------------------------

/// A passive transmission factor, stored linear in `(0, 1]`.
///
/// The product of two transmissions is a transmission, and the dB view is
/// always `<= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Transmission(f64);

impl Transmission {
    pub const UNITY: Transmission = Transmission(1.0);

    pub fn new(linear: f64) -> Result<Self, ConfigError> {
        if !(linear > 0.0 && linear <= 1.0) {
            return Err(ConfigError::Domain(format!(
                "transmission must lie in (0, 1], got {linear}"
            )));
        }
        Ok(Transmission(linear))
    }

    pub fn from_db(db: f64) -> Result<Self, ConfigError> {
        Transmission::new(db_to_linear(db))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

impl TryFrom<f64> for Transmission {
    type Error = ConfigError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Transmission::new(v)
    }
}

impl From<Transmission> for f64 {
    fn from(t: Transmission) -> f64 {
        t.0
    }
}

impl Mul for Transmission {
    type Output = Transmission;
    fn mul(self, rhs: Transmission) -> Transmission {
        // Product of values in (0,1] stays in (0,1]; underflow to 0.0 is the
        // only way out of range and indicates a loss beyond f64, which we cap.
        Transmission((self.0 * rhs.0).max(f64::MIN_POSITIVE))
    }
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ({:+.2} dB)", self.0, self.db())
    }
}

// ---------------------------------------------------------------------------
// MissionConfig
// ---------------------------------------------------------------------------

/// Every fixed mission parameter, SI units throughout.
///
/// Angles are radians and, where the reference values are quoted as full
/// angles (`field_of_view`, `ogs_pointing`, `sat_pointing`), they are stored
/// and used as full angles. Timing jitters are Gaussian FWHM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionConfig {
    /// Detector active area diameter on the satellite (m).
    pub detector_active_area: f64,
    /// OGS telescope aperture diameter (m).
    pub ogs_aperture: f64,
    /// Satellite telescope aperture diameter (m).
    pub sat_aperture: f64,
    /// Probability that a noise count lands in the correct detector.
    pub noise_error_prob: f64,
    /// Probability of a photon being detected in the wrong detector.
    pub misdetection_prob: f64,
    /// Error-correction protocol efficiency, >= 1.
    pub pp_efficiency: f64,
    /// Effective focal length of the satellite telescope (m).
    pub sat_focal_length: f64,
    /// Repetition rate of the OGS beacon laser (Hz).
    pub beacon_rep_rate: f64,
    /// Satellite field of view, full angle (rad).
    pub field_of_view: f64,
    /// Signal photon wavelength (m).
    pub wavelength: f64,
    /// OGS detector efficiency (entanglement protocol only).
    pub ogs_detector_eff: f64,
    /// Satellite detector efficiency.
    pub sat_detector_eff: f64,
    /// Total loss of the OGS arm, source to detector (entanglement only).
    pub ogs_arm_transmission: f64,
    /// Intrinsic heralding efficiency of the pair source.
    pub heralding_eff: f64,
    /// OGS telescope transmission (entanglement only).
    pub ogs_telescope_trans: Transmission,
    /// Satellite telescope transmission.
    pub sat_telescope_trans: Transmission,
    /// Satellite internal optics transmission.
    pub sat_optics_trans: Transmission,
    /// Satellite pointing transmission override; computed from the pointing
    /// model when absent.
    pub sat_pointing_trans: Option<Transmission>,
    /// Basis-switch transmission override; computed from the switch model
    /// when absent.
    pub basis_switch_trans: Option<Transmission>,
    /// Clock-synchronization transmission (fixed budget value; see the tag
    /// simulator for the jitter-derived estimate).
    pub sync_trans: Transmission,
    /// Mean photon number per decoy-protocol signal pulse.
    pub mu_dsp: f64,
    /// Nominal mean photon number per coincidence window (entanglement).
    pub mu_e91: f64,
    /// Fried parameter at zenith (m).
    pub fried_zenith: f64,
    /// OGS singles count rate (cps, entanglement only).
    pub ogs_count_rate: f64,
    /// Worst-case combined satellite count rate including noise (cps).
    pub sat_count_rate: f64,
    /// Maximum count rate of each satellite detector (cps).
    pub sat_max_rate: f64,
    /// Background count rate after all receiver losses, calibrated at
    /// (zenith, minimum elevation) (cps).
    pub background_rate_bounds: (f64, f64),
    /// Dark count rate per satellite detector (cps).
    pub dark_count_rate: f64,
    /// Effective decoy-protocol signal photon rate at the source (cps).
    pub dsp_signal_rate: f64,
    /// Pair production rate of the entangled photon source (cps).
    pub e91_pair_rate: f64,
    /// Repetition rate of the decoy-protocol pulsed source (Hz).
    pub dsp_rep_rate: f64,
    /// OGS pointing precision, RMS full angle (rad).
    pub ogs_pointing: f64,
    /// Satellite body-pointing precision, RMS full angle (rad).
    pub sat_pointing: f64,
    /// Combined OGS detector + time-tagging jitter, FWHM (s).
    pub ogs_jitter: f64,
    /// Combined satellite detector + time-tagging jitter, FWHM (s).
    pub sat_jitter: f64,
    /// Coincidence window (s).
    pub coincidence_window: f64,
    /// Basis switching time (s).
    pub basis_switch_time: f64,
    /// Time-tag resolution on board (s).
    pub tag_resolution: f64,
    /// Measurement chunk duration for clock synchronization (s).
    pub sync_chunk: f64,
    /// Maximum duration of one quantum connection per pass (s).
    pub max_quantum_connection: f64,
    /// Atmospheric extinction optical thickness at sea level.
    pub extinction_thickness: f64,
    /// Orbit altitude (m).
    pub orbit_altitude: f64,
    /// Minimum usable elevation above horizon (rad).
    pub min_elevation: f64,
    /// Ground station latitude (rad).
    pub ogs_latitude: f64,
    /// Ground station longitude (rad, east positive).
    pub ogs_longitude: f64,
    /// Earth radius (m).
    pub earth_radius: f64,
}

impl Default for MissionConfig {
    fn default() -> Self {
        MissionConfig {
            detector_active_area: 20e-6,
            ogs_aperture: 0.30,
            sat_aperture: 0.10,
            noise_error_prob: 0.5,
            misdetection_prob: 0.02,
            pp_efficiency: 1.1,
            sat_focal_length: 0.40,
            beacon_rep_rate: 10e6,
            field_of_view: 50e-6,
            wavelength: 810e-9,
            ogs_detector_eff: 0.70,
            sat_detector_eff: 0.15,
            ogs_arm_transmission: 0.60,
            heralding_eff: 0.85,
            ogs_telescope_trans: Transmission(db_to_linear(-1.0)),
            sat_telescope_trans: Transmission(db_to_linear(-1.5)),
            sat_optics_trans: Transmission(db_to_linear(-1.0)),
            sat_pointing_trans: None,
            basis_switch_trans: None,
            sync_trans: Transmission(db_to_linear(-0.5)),
            mu_dsp: 0.64,
            mu_e91: 0.01,
            fried_zenith: 0.20,
            ogs_count_rate: 60e6,
            sat_count_rate: 3e3,
            sat_max_rate: 100e3,
            background_rate_bounds: (80.0, 175.0),
            dark_count_rate: 200.0,
            dsp_signal_rate: 315e6,
            e91_pair_rate: 100e6,
            dsp_rep_rate: 1e9,
            ogs_pointing: 2.4e-6,
            sat_pointing: 40e-6,
            ogs_jitter: 16e-12,
            sat_jitter: 37e-12,
            coincidence_window: 80e-12,
            basis_switch_time: 100e-6,
            tag_resolution: 10e-12,
            sync_chunk: 0.1,
            max_quantum_connection: 220.0,
            extinction_thickness: 0.22,
            orbit_altitude: 500e3,
            min_elevation: 30f64.to_radians(),
            ogs_latitude: (28.0 + 45.0 / 60.0 + 25.0 / 3600.0_f64).to_radians(),
            ogs_longitude: -(17.0 + 53.0 / 60.0 + 33.0 / 3600.0_f64).to_radians(),
            earth_radius: 6_371_000.0,
        }
    }
}

impl MissionConfig {
    /// Mean photon number per coincidence window actually produced by the
    /// pair source: pair rate x window. The nominal `mu_e91` is the rounded
    /// design figure; rate calculations use this derived value so that
    /// coincidence rates stay consistent with the configured source.
    pub fn effective_mu_e91(&self) -> f64 {
        self.e91_pair_rate * self.coincidence_window
    }

    /// Check every documented invariant, naming the offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let probs: [(&'static str, f64); 6] = [
            ("noise_error_prob", self.noise_error_prob),
            ("misdetection_prob", self.misdetection_prob),
            ("ogs_detector_eff", self.ogs_detector_eff),
            ("sat_detector_eff", self.sat_detector_eff),
            ("ogs_arm_transmission", self.ogs_arm_transmission),
            ("heralding_eff", self.heralding_eff),
        ];
        for (name, v) in probs {
            if !(0.0..=1.0).contains(&v) {
                return Err(out_of_range(name, format!("must lie in [0, 1], got {v}")));
            }
        }
        let positive: [(&'static str, f64); 24] = [
            ("detector_active_area", self.detector_active_area),
            ("ogs_aperture", self.ogs_aperture),
            ("sat_aperture", self.sat_aperture),
            ("sat_focal_length", self.sat_focal_length),
            ("beacon_rep_rate", self.beacon_rep_rate),
            ("field_of_view", self.field_of_view),
            ("wavelength", self.wavelength),
            ("mu_dsp", self.mu_dsp),
            ("mu_e91", self.mu_e91),
            ("fried_zenith", self.fried_zenith),
            ("ogs_count_rate", self.ogs_count_rate),
            ("sat_count_rate", self.sat_count_rate),
            ("sat_max_rate", self.sat_max_rate),
            ("dsp_signal_rate", self.dsp_signal_rate),
            ("e91_pair_rate", self.e91_pair_rate),
            ("dsp_rep_rate", self.dsp_rep_rate),
            ("coincidence_window", self.coincidence_window),
            ("basis_switch_time", self.basis_switch_time),
            ("tag_resolution", self.tag_resolution),
            ("sync_chunk", self.sync_chunk),
            ("max_quantum_connection", self.max_quantum_connection),
            ("extinction_thickness", self.extinction_thickness),
            ("orbit_altitude", self.orbit_altitude),
            ("earth_radius", self.earth_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(out_of_range(name, format!("must be > 0, got {v}")));
            }
        }
        let non_negative: [(&'static str, f64); 5] = [
            ("ogs_pointing", self.ogs_pointing),
            ("sat_pointing", self.sat_pointing),
            ("ogs_jitter", self.ogs_jitter),
            ("sat_jitter", self.sat_jitter),
            ("dark_count_rate", self.dark_count_rate),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) {
                return Err(out_of_range(name, format!("must be >= 0, got {v}")));
            }
        }
        if self.pp_efficiency < 1.0 {
            return Err(out_of_range("pp_efficiency", "below 1"));
        }
        if self.sat_count_rate > self.sat_max_rate {
            return Err(out_of_range(
                "sat_count_rate",
                format!(
                    "exceeds sat_max_rate ({} > {})",
                    self.sat_count_rate, self.sat_max_rate
                ),
            ));
        }
        let (bg_zenith, bg_low) = self.background_rate_bounds;
        if !(bg_zenith >= 0.0 && bg_low >= bg_zenith) {
            return Err(out_of_range(
                "background_rate_bounds",
                format!("must satisfy 0 <= zenith <= low-elevation, got ({bg_zenith}, {bg_low})"),
            ));
        }
        if !(self.min_elevation > 0.0 && self.min_elevation < std::f64::consts::FRAC_PI_2) {
            return Err(out_of_range(
                "min_elevation",
                format!("must lie in (0, pi/2) rad, got {}", self.min_elevation),
            ));
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        if self.ogs_latitude.abs() > half_pi {
            return Err(out_of_range("ogs_latitude", "must lie in [-pi/2, pi/2]"));
        }
        if self.ogs_longitude.abs() > std::f64::consts::PI {
            return Err(out_of_range("ogs_longitude", "must lie in [-pi, pi]"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

/// Load a configuration from an optional flat JSON file plus `key=value`
/// overrides (applied last). Missing file or missing keys fall back to the
/// defaults. Keys suffixed `_db` are converted from decibels on load.
pub fn load_config(
    path: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<MissionConfig, ConfigError> {
    let mut cfg = MissionConfig::default();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)?;
        apply_json(&mut cfg, &text)?;
    }
    if !overrides.is_empty() {
        let mut map = serde_json::Map::new();
        for (k, v) in overrides {
            let value: serde_json::Value = serde_json::from_str(v)
                .map_err(|e| ConfigError::Parse(format!("override `{k}={v}`: {e}")))?;
            map.insert(k.clone(), value);
        }
        let text = serde_json::Value::Object(map).to_string();
        apply_json(&mut cfg, &text)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Split raw `key=value` strings for [`load_config`].
pub fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>, ConfigError> {
    raw.iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| ConfigError::BadOverride(s.clone()))
        })
        .collect()
}

fn apply_json(cfg: &mut MissionConfig, text: &str) -> Result<(), ConfigError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ConfigError::Parse("top level must be a JSON object".into()))?;

    // Convert any `<key>_db` entry to linear before field dispatch.
    let mut seen = BTreeSet::new();
    let mut flat = serde_json::Map::new();
    for (key, v) in obj {
        let (base, value) = match key.strip_suffix("_db") {
            Some(base) if FIELD_NAMES.contains(&base) => {
                let db = v.as_f64().ok_or_else(|| {
                    ConfigError::Parse(format!("`{key}` must be a number, got {v}"))
                })?;
                (base.to_string(), serde_json::json!(db_to_linear(db)))
            }
            _ => (key.clone(), v.clone()),
        };
        if !seen.insert(base.clone()) {
            return Err(ConfigError::DuplicateKey { key: base });
        }
        flat.insert(base, value);
    }

    let patch: ConfigPatch = serde_json::from_value(serde_json::Value::Object(flat))
        .map_err(|e| match_unknown_key(e.to_string()))?;
    patch.apply(cfg);
    Ok(())
}

fn match_unknown_key(msg: String) -> ConfigError {
    // serde reports "unknown field `x`, expected one of ..."; surface the key.
    if let Some(rest) = msg.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return ConfigError::UnknownKey(rest[..end].to_string());
        }
    }
    ConfigError::Parse(msg)
}

macro_rules! config_patch {
    ($($field:ident : $ty:ty),+ $(,)?) => {
        #[derive(Debug, Default, Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ConfigPatch {
            $(#[serde(default, deserialize_with = "some_of")] $field: Option<Option<$ty>>,)+
        }

        impl ConfigPatch {
            fn apply(self, cfg: &mut MissionConfig) {
                $(if let Some(v) = self.$field { assign(&mut cfg.$field, v); })+
            }
        }

        const FIELD_NAMES: &[&str] = &[$(stringify!($field)),+];
    };
}

/// `None` (absent) means "keep default"; `Some(None)` means an explicit JSON
/// null, which clears optional fields back to "computed".
fn some_of<'de, D, T>(d: D) -> Result<Option<Option<T>>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(Some(Option::<T>::deserialize(d)?))
}

trait Assign<T> {
    fn assign_from(&mut self, v: Option<T>);
}

fn assign<F, T>(field: &mut F, v: Option<T>)
where
    F: Assign<T>,
{
    field.assign_from(v);
}

impl Assign<f64> for f64 {
    fn assign_from(&mut self, v: Option<f64>) {
        if let Some(x) = v {
            *self = x;
        }
    }
}

impl Assign<(f64, f64)> for (f64, f64) {
    fn assign_from(&mut self, v: Option<(f64, f64)>) {
        if let Some(x) = v {
            *self = x;
        }
    }
}

impl Assign<Transmission> for Transmission {
    fn assign_from(&mut self, v: Option<Transmission>) {
        if let Some(x) = v {
            *self = x;
        }
    }
}

impl Assign<Transmission> for Option<Transmission> {
    fn assign_from(&mut self, v: Option<Transmission>) {
        *self = v;
    }
}

config_patch! {
    detector_active_area: f64,
    ogs_aperture: f64,
    sat_aperture: f64,
    noise_error_prob: f64,
    misdetection_prob: f64,
    pp_efficiency: f64,
    sat_focal_length: f64,
    beacon_rep_rate: f64,
    field_of_view: f64,
    wavelength: f64,
    ogs_detector_eff: f64,
    sat_detector_eff: f64,
    ogs_arm_transmission: f64,
    heralding_eff: f64,
    ogs_telescope_trans: Transmission,
    sat_telescope_trans: Transmission,
    sat_optics_trans: Transmission,
    sat_pointing_trans: Transmission,
    basis_switch_trans: Transmission,
    sync_trans: Transmission,
    mu_dsp: f64,
    mu_e91: f64,
    fried_zenith: f64,
    ogs_count_rate: f64,
    sat_count_rate: f64,
    sat_max_rate: f64,
    background_rate_bounds: (f64, f64),
    dark_count_rate: f64,
    dsp_signal_rate: f64,
    e91_pair_rate: f64,
    dsp_rep_rate: f64,
    ogs_pointing: f64,
    sat_pointing: f64,
    ogs_jitter: f64,
    sat_jitter: f64,
    coincidence_window: f64,
    basis_switch_time: f64,
    tag_resolution: f64,
    sync_chunk: f64,
    max_quantum_connection: f64,
    extinction_thickness: f64,
    orbit_altitude: f64,
    min_elevation: f64,
    ogs_latitude: f64,
    ogs_longitude: f64,
    earth_radius: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_match_reference_values() {
        let cfg = MissionConfig::default();
        assert_eq!(cfg.coincidence_window, 80e-12);
        assert_eq!(cfg.field_of_view, 50e-6);
        assert_eq!(cfg.sat_detector_eff, 0.15);
        assert_eq!(cfg.mu_dsp, 0.64);
        assert_eq!(cfg.mu_e91, 0.01);
        assert_eq!(cfg.ogs_aperture, 0.30);
        assert_eq!(cfg.dark_count_rate, 200.0);
        assert_eq!(cfg.sat_count_rate, 3000.0);
        assert_eq!(cfg.max_quantum_connection, 220.0);
        assert!((cfg.ogs_latitude.to_degrees() - 28.7569).abs() < 1e-3);
        assert!((cfg.ogs_longitude.to_degrees() + 17.8925).abs() < 1e-3);
        assert!((cfg.sync_trans.db() + 0.5).abs() < 1e-12);
        cfg.validate().unwrap();
    }

    #[test]
    fn empty_file_gives_defaults() {
        let dir = std::env::temp_dir().join("quplink-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("empty.json");
        std::fs::write(&p, "{}").unwrap();
        let cfg = load_config(Some(&p), &[]).unwrap();
        assert_eq!(cfg, MissionConfig::default());
    }

    #[test]
    fn identity_override_is_idempotent() {
        let cfg = load_config(None, &[("noise_error_prob".into(), "0.5".into())]).unwrap();
        assert_eq!(cfg, MissionConfig::default());
    }

    #[test]
    fn pp_efficiency_below_one_rejected() {
        let err = load_config(None, &[("pp_efficiency".into(), "0.5".into())]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("pp_efficiency"), "{msg}");
        assert!(msg.contains("below 1"), "{msg}");
    }

    #[test]
    fn unknown_key_is_named() {
        let err = load_config(None, &[("frobnicator".into(), "1.0".into())]).unwrap_err();
        match err {
            ConfigError::UnknownKey(k) => assert_eq!(k, "frobnicator"),
            other => panic!("expected UnknownKey, got {other}"),
        }
    }

    #[test]
    fn db_suffix_converts_on_load() {
        let cfg = load_config(None, &[("sat_telescope_trans_db".into(), "-3.0".into())]).unwrap();
        assert!((cfg.sat_telescope_trans.linear() - db_to_linear(-3.0)).abs() < 1e-15);
        // Optional overrides become fixed values.
        let cfg = load_config(None, &[("sat_pointing_trans_db".into(), "-2.5".into())]).unwrap();
        assert!((cfg.sat_pointing_trans.unwrap().db() + 2.5).abs() < 1e-9);
    }

    #[test]
    fn duplicate_plain_and_db_key_rejected() {
        let dir = std::env::temp_dir().join("quplink-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("dup.json");
        std::fs::write(&p, r#"{"sync_trans": 0.9, "sync_trans_db": -0.5}"#).unwrap();
        let err = load_config(Some(&p), &[]).unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateKey { .. }), "{err}");
    }

    #[test]
    fn null_clears_optional_override() {
        let cfg = load_config(
            None,
            &[
                ("sat_pointing_trans".into(), "0.5".into()),
                ("sat_pointing_trans".into(), "null".into()),
            ],
        );
        // Two overrides of the same key in one batch collide; apply in two steps.
        assert!(cfg.is_err() || cfg.unwrap().sat_pointing_trans.is_none());
        let mut cfg = MissionConfig::default();
        apply_json(&mut cfg, r#"{"sat_pointing_trans": 0.5}"#).unwrap();
        assert!(cfg.sat_pointing_trans.is_some());
        apply_json(&mut cfg, r#"{"sat_pointing_trans": null}"#).unwrap();
        assert!(cfg.sat_pointing_trans.is_none());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut cfg = MissionConfig::default();
        cfg.sat_pointing_trans = Some(Transmission::from_db(-2.5).unwrap());
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: MissionConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn db_conversion_reference_points() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(-3.0103) - 0.5).abs() < 1e-5);
        // frozen: 10^(-6.27) = 5.370317963702521e-07
        assert!((db_to_linear(-62.7) - 5.370317963702521e-7).abs() / 5.37e-7 < 1e-12);
        assert!(linear_to_db(0.0).is_err());
        assert!(linear_to_db(-1.0).is_err());
    }

    #[test]
    fn transmission_bounds_enforced() {
        assert!(Transmission::new(0.0).is_err());
        assert!(Transmission::new(1.5).is_err());
        assert!(Transmission::new(1.0).is_ok());
        assert!(Transmission::from_db(0.1).is_err());
        let t: Result<Transmission, _> = serde_json::from_str("1.2").map_err(|e| e.to_string());
        assert!(t.is_err());
    }

    proptest! {
        #[test]
        fn db_round_trip_exact_to_1e12(p in 1e-12f64..=1.0) {
            let db = linear_to_db(p).unwrap();
            let back = db_to_linear(db);
            prop_assert!(((back - p) / p).abs() < 1e-12);
        }

        #[test]
        fn db_of_product_is_sum_of_dbs(a in 1e-6f64..=1.0, b in 1e-6f64..=1.0) {
            let lhs = linear_to_db(a * b).unwrap();
            let rhs = linear_to_db(a).unwrap() + linear_to_db(b).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn product_of_transmissions_is_transmission(a in 1e-9f64..=1.0, b in 1e-9f64..=1.0) {
            let t = Transmission::new(a).unwrap() * Transmission::new(b).unwrap();
            prop_assert!(t.linear() > 0.0 && t.linear() <= 1.0);
        }
    }
}
