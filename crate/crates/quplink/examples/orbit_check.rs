//! Quick look at one-year pass statistics for the two candidate orbits.

use quplink::config::MissionConfig;
use quplink::geometry::*;

fn main() {
    let cfg = MissionConfig::default();
    let ogs = GroundStation::new(cfg.ogs_latitude, cfg.ogs_longitude);
    let epoch = Epoch::from_jd(2_459_001.5); // 2020-06-01
    let end = epoch.add_seconds(365.0 * 86_400.0);
    let gap = Some(1.5 * orbital_period(500e3));
    for (night, ecl, sep) in [
        (true, false, None),
        (true, false, gap),
        (true, true, gap),
    ] {
        let filter = PassFilter {
            min_elevation: cfg.min_elevation,
            require_night: night,
            require_sat_eclipse: ecl,
            min_pass_separation: sep,
        };
        println!("--- night={night} eclipse={ecl} sep={}", sep.is_some());
        let co =
            OrbitSpec::new(500e3, 30f64.to_radians(), 0.0, epoch, OrbitKind::Circular).unwrap();
        let eph = propagate(&co, epoch, end, 30.0).unwrap();
        let cat = find_passes(&eph, &ogs, &filter);
        println!(
            "CO 30deg:  total {:.0} s, passes {}, mean {:.1} s",
            cat.total_link_time, cat.pass_count, cat.mean_pass_duration
        );

        let sso = OrbitSpec::sun_synchronous(500e3, epoch).unwrap();
        let eph = propagate(&sso, epoch, end, 30.0).unwrap();
        let cat = find_passes(&eph, &ogs, &filter);
        println!(
            "SSO 97.3:  total {:.0} s, passes {}, mean {:.1} s",
            cat.total_link_time, cat.pass_count, cat.mean_pass_duration
        );
    }
    let filter = PassFilter {
        min_elevation: cfg.min_elevation,
        require_night: true,
        require_sat_eclipse: false,
        min_pass_separation: gap,
    };

    let incs: Vec<f64> = [
        0.0, 10.0, 20.0, 25.0, 28.76, 30.0, 35.0, 40.0, 50.0, 70.0, 90.0,
    ]
    .iter()
    .map(|d: &f64| d.to_radians())
    .collect();
    let table = link_time_vs_inclination(&incs, 500e3, epoch, 365.0, &ogs, &filter, 30.0).unwrap();
    for r in &table {
        println!(
            "incl {:6.2} deg -> {:8.0} s  ({} passes)",
            r.inclination.to_degrees(),
            r.total_link_time,
            r.pass_count
        );
    }
}
