//! Circular-orbit propagation, ground-station visibility and pass statistics.
//!
//! The propagator is deliberately simple: two-body circular motion at
//! `R_E + h`, Earth rotation at the sidereal rate, and (for sun-synchronous
//! orbits) a fixed nodal precession of 0.9856 deg/day. A low-precision
//! analytic solar ephemeris gates night (station sun elevation below -12 deg)
//! and satellite eclipse (cylindrical shadow). Pass edges are refined to one
//! second by bisection on the visibility condition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::Add;
use std::io::Write;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("zenith angle {0} rad is at or below the horizon (>= pi/2)")]
    BelowHorizon(f64),
    #[error("orbit altitude {0} m outside the supported 400-700 km band")]
    AltitudeOutOfRange(f64),
    #[error("inclination {0} rad outside [0, pi]")]
    InclinationOutOfRange(f64),
    #[error("propagation step must be > 0, got {0}")]
    BadStep(f64),
    #[error("propagation interval is empty")]
    EmptyInterval,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Mean Earth radius (m); spherical model throughout.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
/// Standard gravitational parameter of Earth (m^3/s^2).
pub const MU_EARTH: f64 = 3.986004418e14;
/// Sidereal rotation rate of Earth (rad/s).
pub const EARTH_ROTATION_RATE: f64 = 7.292115146706979e-5;
/// Nodal precession applied to sun-synchronous orbits (rad/s) = 0.9856 deg/day.
pub const SSO_RAAN_RATE: f64 = 0.9856 * (PI / 180.0) / 86_400.0;
/// Station sun elevation below which it counts as night (rad).
pub const NIGHT_SUN_ELEVATION: f64 = -12.0 * PI / 180.0;
/// Inclination of the 500 km sun-synchronous orbit (rad).
pub const SSO_INCLINATION: f64 = 97.3 * PI / 180.0;

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

/// A UTC instant stored as a Julian date.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Epoch(f64);

const J2000_JD: f64 = 2_451_545.0;
/// Julian date of the Unix epoch 1970-01-01T00:00:00Z.
const UNIX_JD: f64 = 2_440_587.5;

impl Epoch {
    pub fn from_jd(jd: f64) -> Self {
        Epoch(jd)
    }

    pub fn jd(self) -> f64 {
        self.0
    }

    pub fn from_datetime(dt: chrono::DateTime<chrono::Utc>) -> Self {
        let secs = dt.timestamp() as f64 + f64::from(dt.timestamp_subsec_nanos()) * 1e-9;
        Epoch(UNIX_JD + secs / 86_400.0)
    }

    pub fn to_datetime(self) -> chrono::DateTime<chrono::Utc> {
        let secs = (self.0 - UNIX_JD) * 86_400.0;
        let whole = secs.floor();
        let nanos = ((secs - whole) * 1e9).round() as u32;
        chrono::DateTime::from_timestamp(whole as i64, nanos.min(999_999_999))
            .expect("epoch within chrono range")
    }

    /// Days since J2000.0.
    pub fn days_since_j2000(self) -> f64 {
        self.0 - J2000_JD
    }

    pub fn add_seconds(self, s: f64) -> Self {
        Epoch(self.0 + s / 86_400.0)
    }

    /// Seconds from `earlier` to `self`.
    pub fn seconds_since(self, earlier: Epoch) -> f64 {
        (self.0 - earlier.0) * 86_400.0
    }
}

/// Greenwich mean sidereal time (rad).
pub fn gmst(t: Epoch) -> f64 {
    let deg = 280.460_618_37 + 360.985_647_366_29 * t.days_since_j2000();
    (deg.rem_euclid(360.0)).to_radians()
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn unit(self) -> Vec3 {
        self.scale(1.0 / self.norm())
    }

    /// Rotate about the z axis by `angle` (right-handed).
    pub fn rot_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }
}

fn eci_to_ecef(v: Vec3, t: Epoch) -> Vec3 {
    v.rot_z(-gmst(t))
}

// ---------------------------------------------------------------------------
// Sun
// ---------------------------------------------------------------------------

/// Low-precision solar ephemeris (about 0.01 deg): unit vector toward the sun
/// in the inertial frame.
pub fn sun_direction_eci(t: Epoch) -> Vec3 {
    let n = t.days_since_j2000();
    let mean_lon = (280.460 + 0.985_647_4 * n).rem_euclid(360.0).to_radians();
    let mean_anom = (357.528 + 0.985_600_3 * n).rem_euclid(360.0).to_radians();
    let ecl_lon =
        mean_lon + (1.915 * mean_anom.sin() + 0.020 * (2.0 * mean_anom).sin()).to_radians();
    let obliquity = (23.439 - 4.0e-7 * n).to_radians();
    Vec3::new(
        ecl_lon.cos(),
        obliquity.cos() * ecl_lon.sin(),
        obliquity.sin() * ecl_lon.sin(),
    )
}

/// Apparent right ascension of the sun (rad), used to place local-midnight
/// ascending nodes.
pub fn sun_right_ascension(t: Epoch) -> f64 {
    let s = sun_direction_eci(t);
    s.y.atan2(s.x).rem_euclid(TAU)
}

// ---------------------------------------------------------------------------
// Ground station
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GroundStation {
    /// Geocentric latitude (rad).
    pub latitude: f64,
    /// Longitude, east positive (rad).
    pub longitude: f64,
}

impl GroundStation {
    pub fn new(latitude: f64, longitude: f64) -> Self {
        GroundStation {
            latitude,
            longitude,
        }
    }

    fn ecef_unit(&self) -> Vec3 {
        let (slat, clat) = self.latitude.sin_cos();
        let (slon, clon) = self.longitude.sin_cos();
        Vec3::new(clat * clon, clat * slon, slat)
    }

    fn ecef(&self) -> Vec3 {
        self.ecef_unit().scale(EARTH_RADIUS_M)
    }

    /// Elevation of the sun above the local horizon (rad).
    pub fn sun_elevation(&self, t: Epoch) -> f64 {
        let sun_ecef = eci_to_ecef(sun_direction_eci(t), t);
        self.ecef_unit().dot(sun_ecef).asin()
    }
}

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    Circular,
    SunSynchronous,
}

/// Earth oblateness coefficient, used for the secular node regression.
pub const J2: f64 = 1.08262668e-3;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrbitSpec {
    /// Altitude above the spherical Earth (m).
    pub altitude: f64,
    /// Inclination (rad).
    pub inclination: f64,
    /// Right ascension of the ascending node at epoch (rad).
    pub raan: f64,
    /// Epoch; the satellite sits at the ascending node at this instant.
    pub epoch: Epoch,
    pub kind: OrbitKind,
}

impl OrbitSpec {
    pub fn new(
        altitude: f64,
        inclination: f64,
        raan: f64,
        epoch: Epoch,
        kind: OrbitKind,
    ) -> Result<Self, GeometryError> {
        if !(400e3..=700e3).contains(&altitude) {
            return Err(GeometryError::AltitudeOutOfRange(altitude));
        }
        if !(0.0..=PI).contains(&inclination) {
            return Err(GeometryError::InclinationOutOfRange(inclination));
        }
        Ok(OrbitSpec {
            altitude,
            inclination,
            raan,
            epoch,
            kind,
        })
    }

    /// The single 500 km-class sun-synchronous option, with the node placed
    /// at local midnight so that one of the two daily pass windows falls at
    /// night.
    pub fn sun_synchronous(altitude: f64, epoch: Epoch) -> Result<Self, GeometryError> {
        let raan = (sun_right_ascension(epoch) + PI).rem_euclid(TAU);
        OrbitSpec::new(
            altitude,
            SSO_INCLINATION,
            raan,
            epoch,
            OrbitKind::SunSynchronous,
        )
    }

    pub fn semi_major_axis(&self) -> f64 {
        EARTH_RADIUS_M + self.altitude
    }

    /// Orbital period from Kepler's third law (s).
    pub fn period(&self) -> f64 {
        TAU * (self.semi_major_axis().powi(3) / MU_EARTH).sqrt()
    }

    pub fn mean_motion(&self) -> f64 {
        TAU / self.period()
    }

    /// Secular node regression. Circular orbits use the first-order J2 rate
    /// (the slow sweep of pass local times it causes is what decides which
    /// passes fall at night, so it cannot be dropped); sun-synchronous orbits
    /// precess at the defining 0.9856 deg/day.
    fn raan_rate(&self) -> f64 {
        match self.kind {
            OrbitKind::Circular => {
                let ratio = EARTH_RADIUS_M / self.semi_major_axis();
                -1.5 * J2 * self.mean_motion() * ratio * ratio * self.inclination.cos()
            }
            OrbitKind::SunSynchronous => SSO_RAAN_RATE,
        }
    }

    /// Inertial position at `t`.
    pub fn position_eci(&self, t: Epoch) -> Vec3 {
        let dt = t.seconds_since(self.epoch);
        let u = self.mean_motion() * dt;
        let raan = self.raan + self.raan_rate() * dt;
        let (su, cu) = u.sin_cos();
        let (si, ci) = self.inclination.sin_cos();
        let (sr, cr) = raan.sin_cos();
        let r = self.semi_major_axis();
        Vec3::new(
            r * (cr * cu - sr * su * ci),
            r * (sr * cu + cr * su * ci),
            r * su * si,
        )
    }

    /// Earth-fixed position at `t`.
    pub fn position_ecef(&self, t: Epoch) -> Vec3 {
        eci_to_ecef(self.position_eci(t), t)
    }
}

/// Orbital period at a given altitude (s); convenience for tests and sizing.
pub fn orbital_period(altitude: f64) -> f64 {
    TAU * ((EARTH_RADIUS_M + altitude).powi(3) / MU_EARTH).sqrt()
}

// ---------------------------------------------------------------------------
// Slant range
// ---------------------------------------------------------------------------

/// Line-of-sight distance from station to satellite at zenith angle `phi`
/// (spherical-Earth chord solution). Strictly increasing in `phi`.
pub fn slant_range(
    zenith_angle: f64,
    altitude: f64,
    earth_radius: f64,
) -> Result<f64, GeometryError> {
    if !(0.0..FRAC_PI_2).contains(&zenith_angle) {
        return Err(GeometryError::BelowHorizon(zenith_angle));
    }
    let c = earth_radius * zenith_angle.cos();
    Ok((c * c + 2.0 * earth_radius * altitude + altitude * altitude).sqrt() - c)
}

// ---------------------------------------------------------------------------
// Ephemeris
// ---------------------------------------------------------------------------

/// Sampled Earth-fixed trajectory plus the generating elements, so that pass
/// edges can be refined at exact intermediate times.
#[derive(Debug, Clone)]
pub struct Ephemeris {
    pub orbit: OrbitSpec,
    pub start: Epoch,
    pub end: Epoch,
    pub step: f64,
    pub samples: Vec<(Epoch, Vec3)>,
}

/// Sample the orbit over `[start, end]` at `step` seconds.
pub fn propagate(
    orbit: &OrbitSpec,
    start: Epoch,
    end: Epoch,
    step: f64,
) -> Result<Ephemeris, GeometryError> {
    if !(step > 0.0) {
        return Err(GeometryError::BadStep(step));
    }
    let span = end.seconds_since(start);
    if span <= 0.0 {
        return Err(GeometryError::EmptyInterval);
    }
    let n = (span / step).floor() as usize;
    let mut samples = Vec::with_capacity(n + 2);
    for i in 0..=n {
        let t = start.add_seconds(i as f64 * step);
        samples.push((t, orbit.position_ecef(t)));
    }
    if span - n as f64 * step > 1e-9 {
        samples.push((end, orbit.position_ecef(end)));
    }
    Ok(Ephemeris {
        orbit: *orbit,
        start,
        end,
        step,
        samples,
    })
}

// ---------------------------------------------------------------------------
// Passes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PassSample {
    pub time: Epoch,
    /// Zenith angle of the satellite seen from the station (rad).
    pub zenith_angle: f64,
    /// Station-satellite distance (m).
    pub slant_range: f64,
    /// Sun more than 12 deg below the station horizon.
    pub ogs_night: bool,
    /// Satellite inside the cylindrical Earth shadow.
    pub sat_eclipsed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassGeometry {
    /// One-second samples, strictly time ordered.
    pub samples: Vec<PassSample>,
    /// Maximum elevation over the pass (rad).
    pub max_elevation: f64,
    /// Pass duration (s).
    pub duration: f64,
}

impl PassGeometry {
    pub fn start(&self) -> Epoch {
        self.samples.first().expect("pass has samples").time
    }

    pub fn end(&self) -> Epoch {
        self.samples.last().expect("pass has samples").time
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassCatalog {
    pub passes: Vec<PassGeometry>,
    pub total_link_time: f64,
    pub pass_count: usize,
    pub mean_pass_duration: f64,
}

impl PassCatalog {
    fn from_passes(passes: Vec<PassGeometry>) -> Self {
        let total = passes.iter().map(|p| p.duration).fold(0.0, f64::add);
        let count = passes.len();
        PassCatalog {
            total_link_time: total,
            pass_count: count,
            mean_pass_duration: if count > 0 { total / count as f64 } else { 0.0 },
            passes,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PassFilter {
    /// Minimum elevation above horizon (rad).
    pub min_elevation: f64,
    /// Require the station sun elevation below -12 deg.
    pub require_night: bool,
    /// Require the satellite inside the Earth shadow.
    pub require_sat_eclipse: bool,
    /// Minimum spacing between the starts of retained passes (s). The power
    /// budget supports one quantum connection per ~1.5 orbits, so of the
    /// back-to-back passes a near-resonant orbit produces each night only
    /// alternating ones are usable. `None` keeps every pass.
    pub min_pass_separation: Option<f64>,
}

/// Local night bucket of an epoch: nights run noon to noon in local mean
/// solar time.
pub fn night_index(t: Epoch, station_longitude: f64) -> i64 {
    (t.jd() + station_longitude / TAU - 0.5).floor() as i64
}

struct Observation {
    elevation: f64,
    zenith_angle: f64,
    slant_range: f64,
    night: bool,
    eclipsed: bool,
}

fn observe(orbit: &OrbitSpec, station_ecef: Vec3, up: Vec3, t: Epoch) -> Observation {
    let sat_eci = orbit.position_eci(t);
    let sat_ecef = eci_to_ecef(sat_eci, t);
    let rel = sat_ecef.sub(station_ecef);
    let elevation = (rel.unit().dot(up)).asin();
    let sun = sun_direction_eci(t);
    let sun_elev = up.dot(eci_to_ecef(sun, t)).asin();
    let along = sat_eci.dot(sun);
    let perp = sat_eci.sub(sun.scale(along)).norm();
    Observation {
        elevation,
        zenith_angle: FRAC_PI_2 - elevation,
        slant_range: rel.norm(),
        night: sun_elev < NIGHT_SUN_ELEVATION,
        eclipsed: along < 0.0 && perp < EARTH_RADIUS_M,
    }
}

fn passes_filter(obs: &Observation, filter: &PassFilter) -> bool {
    obs.elevation >= filter.min_elevation
        && (!filter.require_night || obs.night)
        && (!filter.require_sat_eclipse || obs.eclipsed)
}

/// Find contiguous intervals over the ephemeris where the filter condition
/// holds, refine their edges to one second, and sample each pass at one
/// second resolution. An empty ephemeris yields an empty catalog.
pub fn find_passes(eph: &Ephemeris, station: &GroundStation, filter: &PassFilter) -> PassCatalog {
    let st_ecef = station.ecef();
    let up = station.ecef_unit();
    let cond = |t: Epoch| passes_filter(&observe(&eph.orbit, st_ecef, up, t), filter);

    let mut passes = Vec::new();
    let mut i = 0;
    let n = eph.samples.len();
    while i < n {
        if !cond(eph.samples[i].0) {
            i += 1;
            continue;
        }
        // Extend the run of visible coarse samples.
        let mut j = i;
        while j + 1 < n && cond(eph.samples[j + 1].0) {
            j += 1;
        }
        let start = if i == 0 {
            eph.samples[0].0
        } else {
            refine_edge(&cond, eph.samples[i - 1].0, eph.samples[i].0, true)
        };
        let end = if j + 1 == n {
            eph.samples[n - 1].0
        } else {
            refine_edge(&cond, eph.samples[j].0, eph.samples[j + 1].0, false)
        };
        if end.seconds_since(start) > 0.0 {
            passes.push(build_pass(&eph.orbit, st_ecef, up, start, end));
        }
        i = j + 1;
    }
    if let Some(gap) = filter.min_pass_separation {
        passes = space_passes(passes, gap);
    }
    PassCatalog::from_passes(passes)
}

/// Greedy earliest-first selection keeping pass starts at least `gap` apart.
fn space_passes(passes: Vec<PassGeometry>, gap: f64) -> Vec<PassGeometry> {
    let mut kept: Vec<PassGeometry> = Vec::new();
    for p in passes {
        match kept.last() {
            Some(prev) if p.start().seconds_since(prev.start()) < gap => {}
            _ => kept.push(p),
        }
    }
    kept
}

/// Bisect the condition edge down to one second. For `rising`, `lo` fails and
/// `hi` holds; the returned time holds. Vice versa for falling edges.
fn refine_edge(cond: &dyn Fn(Epoch) -> bool, lo: Epoch, hi: Epoch, rising: bool) -> Epoch {
    let mut lo = lo;
    let mut hi = hi;
    while hi.seconds_since(lo) > 1.0 {
        let mid = lo.add_seconds(0.5 * hi.seconds_since(lo));
        let holds = cond(mid);
        if holds == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if rising {
        hi
    } else {
        lo
    }
}

fn build_pass(
    orbit: &OrbitSpec,
    st_ecef: Vec3,
    up: Vec3,
    start: Epoch,
    end: Epoch,
) -> PassGeometry {
    let duration = end.seconds_since(start);
    let n = duration.floor() as usize;
    let mut samples = Vec::with_capacity(n + 2);
    let mut max_elev = f64::MIN;
    let mut push = |t: Epoch| {
        let o = observe(orbit, st_ecef, up, t);
        max_elev = max_elev.max(o.elevation);
        samples.push(PassSample {
            time: t,
            zenith_angle: o.zenith_angle,
            slant_range: o.slant_range,
            ogs_night: o.night,
            sat_eclipsed: o.eclipsed,
        });
    };
    for i in 0..=n {
        push(start.add_seconds(i as f64));
    }
    if duration - n as f64 > 1e-6 {
        push(end);
    }
    PassGeometry {
        samples,
        max_elevation: max_elev,
        duration,
    }
}

/// Total one-interval link time per inclination, everything else held fixed.
/// Evaluated in parallel; output order follows the input order.
pub fn link_time_vs_inclination(
    inclinations: &[f64],
    altitude: f64,
    epoch: Epoch,
    days: f64,
    station: &GroundStation,
    filter: &PassFilter,
    step: f64,
) -> Result<Vec<InclinationLinkTime>, GeometryError> {
    use rayon::prelude::*;
    if inclinations.is_empty() {
        return Err(GeometryError::EmptyInterval);
    }
    inclinations
        .par_iter()
        .map(|&inc| {
            let orbit = OrbitSpec::new(altitude, inc, 0.0, epoch, OrbitKind::Circular)?;
            let eph = propagate(&orbit, epoch, epoch.add_seconds(days * 86_400.0), step)?;
            let catalog = find_passes(&eph, station, filter);
            Ok(InclinationLinkTime {
                inclination: inc,
                total_link_time: catalog.total_link_time,
                pass_count: catalog.pass_count,
                mean_pass_duration: catalog.mean_pass_duration,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InclinationLinkTime {
    pub inclination: f64,
    pub total_link_time: f64,
    pub pass_count: usize,
    pub mean_pass_duration: f64,
}

/// Canonical straight-overhead pass: equatorial orbit observed from an
/// equatorial station placed so the ground track crosses its zenith. This is
/// the geometry used for per-pass key figures.
pub fn overhead_pass(altitude: f64, min_elevation: f64) -> Result<PassGeometry, GeometryError> {
    let epoch = Epoch::from_jd(2_459_001.5); // 2020-06-01T00:00Z
    let orbit = OrbitSpec::new(altitude, 0.0, 0.0, epoch, OrbitKind::Circular)?;
    // Place the station under the track one sixth of an orbit after epoch.
    let t_mid = epoch.add_seconds(orbit.period() / 6.0);
    let sub = orbit.position_ecef(t_mid);
    let station = GroundStation::new(0.0, sub.y.atan2(sub.x));
    let eph = propagate(&orbit, epoch, epoch.add_seconds(orbit.period() / 3.0), 10.0)?;
    let filter = PassFilter {
        min_elevation,
        require_night: false,
        require_sat_eclipse: false,
        min_pass_separation: None,
    };
    let catalog = find_passes(&eph, &station, &filter);
    catalog
        .passes
        .into_iter()
        .next()
        .ok_or(GeometryError::EmptyInterval)
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

/// One row per pass: start, end, max elevation (deg), duration (s).
pub fn write_pass_summary_csv<W: Write>(
    catalog: &PassCatalog,
    mut w: W,
) -> Result<(), GeometryError> {
    writeln!(w, "start_utc,end_utc,max_elevation_deg,duration_s")?;
    for p in &catalog.passes {
        writeln!(
            w,
            "{},{},{:.3},{:.1}",
            p.start().to_datetime().format("%Y-%m-%dT%H:%M:%SZ"),
            p.end().to_datetime().format("%Y-%m-%dT%H:%M:%SZ"),
            p.max_elevation.to_degrees(),
            p.duration
        )?;
    }
    Ok(())
}

/// One row per sample: time, zenith (deg), range (km), flags.
pub fn write_pass_samples_csv<W: Write>(
    catalog: &PassCatalog,
    mut w: W,
) -> Result<(), GeometryError> {
    writeln!(
        w,
        "pass,time_utc,zenith_deg,range_km,ogs_night,sat_eclipsed"
    )?;
    for (i, p) in catalog.passes.iter().enumerate() {
        for s in &p.samples {
            writeln!(
                w,
                "{},{},{:.4},{:.4},{},{}",
                i,
                s.time.to_datetime().format("%Y-%m-%dT%H:%M:%SZ"),
                s.zenith_angle.to_degrees(),
                s.slant_range / 1e3,
                u8::from(s.ogs_night),
                u8::from(s.sat_eclipsed)
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn june2020() -> Epoch {
        Epoch::from_jd(2_459_001.5)
    }

    fn la_palma() -> GroundStation {
        let cfg = crate::config::MissionConfig::default();
        GroundStation::new(cfg.ogs_latitude, cfg.ogs_longitude)
    }

    #[test]
    fn slant_range_at_zenith_is_altitude() {
        assert_eq!(slant_range(0.0, 500e3, EARTH_RADIUS_M).unwrap(), 500e3);
        assert_eq!(slant_range(0.0, 400e3, EARTH_RADIUS_M).unwrap(), 400e3);
    }

    #[test]
    fn slant_range_at_60deg_matches_triangle_solution() {
        // frozen oracle: law of cosines with R_E = 6371 km -> 909.425 km
        let l = slant_range(60f64.to_radians(), 500e3, EARTH_RADIUS_M).unwrap();
        assert!((l - 909_424.94).abs() < 1.0, "{l}");
    }

    #[test]
    fn slant_range_monotone_on_one_degree_grid() {
        let mut prev = 0.0;
        for d in 0..90 {
            let l = slant_range((d as f64).to_radians(), 500e3, EARTH_RADIUS_M).unwrap();
            assert!(l > prev, "not increasing at {d} deg");
            prev = l;
        }
        assert!(slant_range(FRAC_PI_2, 500e3, EARTH_RADIUS_M).is_err());
    }

    #[test]
    fn period_matches_keplers_third_law() {
        // frozen oracle: 2*pi*sqrt(a^3/mu) = 5668.14 s at 500 km
        assert!((orbital_period(500e3) - 5668.14).abs() < 0.5);
    }

    #[test]
    fn equatorial_orbit_stays_on_equator() {
        let orbit = OrbitSpec::new(500e3, 0.0, 0.0, june2020(), OrbitKind::Circular).unwrap();
        for i in 0..200 {
            let p = orbit.position_ecef(june2020().add_seconds(i as f64 * 60.0));
            let lat = (p.z / p.norm()).asin();
            assert!(lat.abs() < 1e-9);
        }
    }

    #[test]
    fn geocentric_distance_constant() {
        let orbit = OrbitSpec::new(500e3, 0.6, 1.0, june2020(), OrbitKind::SunSynchronous).unwrap();
        let a = orbit.semi_major_axis();
        for i in 0..500 {
            let p = orbit.position_eci(june2020().add_seconds(i as f64 * 97.0));
            assert!((p.norm() - a).abs() / a < 1e-6);
        }
    }

    #[test]
    fn propagation_is_deterministic_and_continuous() {
        let orbit = OrbitSpec::new(500e3, 0.52, 0.3, june2020(), OrbitKind::Circular).unwrap();
        let end = june2020().add_seconds(7200.0);
        let a = propagate(&orbit, june2020(), end, 30.0).unwrap();
        let b = propagate(&orbit, june2020(), end, 30.0).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        let speed = orbit.mean_motion() * orbit.semi_major_axis() + 500.0;
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.1, y.1);
        }
        for w in a.samples.windows(2) {
            let gap = w[1].1.sub(w[0].1).norm();
            assert!(gap <= speed * 30.0, "gap {gap}");
        }
    }

    #[test]
    fn altitude_band_enforced() {
        assert!(OrbitSpec::new(300e3, 0.0, 0.0, june2020(), OrbitKind::Circular).is_err());
        assert!(OrbitSpec::new(800e3, 0.0, 0.0, june2020(), OrbitKind::Circular).is_err());
    }

    #[test]
    fn epoch_datetime_round_trip() {
        let dt = chrono::DateTime::parse_from_rfc3339("2020-06-01T00:00:00Z")
            .unwrap()
            .with_timezone(&chrono::Utc);
        let e = Epoch::from_datetime(dt);
        assert!((e.jd() - 2_459_001.5).abs() < 1e-9);
        assert_eq!(e.to_datetime(), dt);
    }

    #[test]
    fn night_flag_tracks_sun() {
        let ogs = la_palma();
        // Local solar noon at La Palma is near 13:11 UTC; midnight near 01:11.
        let noon = Epoch::from_datetime(
            chrono::DateTime::parse_from_rfc3339("2020-06-10T13:11:00Z")
                .unwrap()
                .with_timezone(&chrono::Utc),
        );
        let midnight = noon.add_seconds(12.0 * 3600.0);
        assert!(ogs.sun_elevation(noon) > 0.0);
        assert!(ogs.sun_elevation(noon).to_degrees() > 70.0);
        assert!(ogs.sun_elevation(midnight) < NIGHT_SUN_ELEVATION);
    }

    #[test]
    fn equatorial_orbit_never_visible_from_la_palma() {
        // Independent oracle: the maximum elevation of a 500 km equatorial
        // orbit seen from 28.76 deg latitude is -6 deg (below horizon).
        let orbit = OrbitSpec::new(500e3, 0.0, 0.0, june2020(), OrbitKind::Circular).unwrap();
        let eph = propagate(
            &orbit,
            june2020(),
            june2020().add_seconds(30.0 * 86400.0),
            30.0,
        )
        .unwrap();
        let catalog = find_passes(
            &eph,
            &la_palma(),
            &PassFilter {
                min_elevation: 30f64.to_radians(),
                require_night: false,
                require_sat_eclipse: false,
                min_pass_separation: None,
            },
        );
        assert_eq!(catalog.pass_count, 0);
        assert_eq!(catalog.total_link_time, 0.0);
    }

    #[test]
    fn passes_respect_min_elevation_and_aggregate() {
        let orbit = OrbitSpec::new(500e3, 0.55, 0.0, june2020(), OrbitKind::Circular).unwrap();
        let eph = propagate(
            &orbit,
            june2020(),
            june2020().add_seconds(10.0 * 86400.0),
            30.0,
        )
        .unwrap();
        let filter = PassFilter {
            min_elevation: 30f64.to_radians(),
            require_night: false,
            require_sat_eclipse: false,
            min_pass_separation: None,
        };
        let catalog = find_passes(&eph, &la_palma(), &filter);
        assert!(catalog.pass_count > 0);
        let sum: f64 = catalog.passes.iter().map(|p| p.duration).sum();
        assert!((catalog.total_link_time - sum).abs() < 1e-9);
        assert!((catalog.mean_pass_duration - sum / catalog.pass_count as f64).abs() < 1e-9);
        for p in &catalog.passes {
            assert!(p.duration > 0.0);
            let mut prev = None;
            for s in &p.samples {
                // retained samples at or above the threshold (1 s edge slack)
                assert!(
                    FRAC_PI_2 - s.zenith_angle >= filter.min_elevation - 2e-3,
                    "elevation {} deg",
                    (FRAC_PI_2 - s.zenith_angle).to_degrees()
                );
                if let Some(t) = prev {
                    assert!(s.time.seconds_since(t) > 0.0);
                }
                prev = Some(s.time);
            }
            let dur = p.end().seconds_since(p.start());
            assert!((dur - p.duration).abs() < 1e-6);
        }
    }

    #[test]
    fn night_filter_only_keeps_night_samples() {
        // The pass local time of a fixed-plane orbit drifts ~4 min/day, so
        // night passes cluster seasonally; scan a full year to see them.
        let orbit = OrbitSpec::new(500e3, 0.55, 0.0, june2020(), OrbitKind::Circular).unwrap();
        let eph = propagate(
            &orbit,
            june2020(),
            june2020().add_seconds(365.0 * 86400.0),
            60.0,
        )
        .unwrap();
        let catalog = find_passes(
            &eph,
            &la_palma(),
            &PassFilter {
                min_elevation: 30f64.to_radians(),
                require_night: true,
                require_sat_eclipse: false,
                min_pass_separation: None,
            },
        );
        assert!(catalog.pass_count > 0);
        for p in &catalog.passes {
            for s in &p.samples {
                assert!(s.ogs_night);
            }
        }
    }

    #[test]
    fn overhead_pass_reaches_zenith_and_caps_near_222s() {
        let pass = overhead_pass(500e3, 30f64.to_radians()).unwrap();
        assert!(
            pass.max_elevation.to_degrees() > 89.0,
            "{}",
            pass.max_elevation.to_degrees()
        );
        // frozen oracle: 2*psi_max/(n - omega_earth) = 221.86 s
        assert!((pass.duration - 221.86).abs() < 2.0, "{}", pass.duration);
        assert!(pass.samples.len() >= 220);
    }

    #[test]
    fn csv_exports_have_expected_shape() {
        let pass = overhead_pass(500e3, 30f64.to_radians()).unwrap();
        let catalog = PassCatalog::from_passes(vec![pass]);
        let mut buf = Vec::new();
        write_pass_summary_csv(&catalog, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("start_utc,end_utc,max_elevation_deg,duration_s\n"));
        assert_eq!(text.lines().count(), 2);
        let mut buf = Vec::new();
        write_pass_samples_csv(&catalog, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().count() > 220);
    }
}
