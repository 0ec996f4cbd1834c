//! Lifts a planar hexagram to a trefoil with heights that vanish on a chosen
//! one-sided set, then checks both handednesses.

use hexaknot::config_geometry::synth::hexagram_points;
use hexaknot::config_geometry::{check_crossing_rules, construct_case_heights, lift_configuration, CaseParams, PlanarConfiguration};
use hexaknot::invariants::classify_hexagon;

fn main() -> hexaknot::Result<()> {
    let cfg = PlanarConfiguration::from_points(hexagram_points(&[0.05, -0.1, 0.0, 0.12, -0.03, 0.07], false))?;
    println!("pattern {:?}, {} crossings", cfg.pattern, cfg.crossings.len());
    for u in [vec![], vec![3], vec![1, 2], vec![2, 5], vec![3, 4, 6], vec![1, 3, 5]] {
        match construct_case_heights(&cfg, &u, &CaseParams::default()) {
            Ok(h) => {
                let right = classify_hexagon(&lift_configuration(&cfg, &h.f)?, 0)?;
                let left = classify_hexagon(&lift_configuration(&cfg, &h.negated().f)?, 0)?;
                println!(
                    "U = {u:?}: {:?} via {:?}, f = {:+.4?}, rules {} -> {right} / {left}",
                    h.case,
                    h.symmetry,
                    h.f,
                    check_crossing_rules(&h, &cfg, false)
                );
            }
            Err(e) => println!("U = {u:?}: {e}"),
        }
    }
    Ok(())
}
