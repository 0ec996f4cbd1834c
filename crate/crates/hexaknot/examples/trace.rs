//! Follows the prism solution curve from a solved seed and lists the planar
//! configurations met along the way.

use hexaknot::config_geometry::PrismProblem;
use hexaknot::curves::builtin_curve;
use hexaknot::search::{default_space, scan_planar_events, solve_prism_in, trace_prism_manifold, SolveOptions, TraceOptions};

fn main() -> hexaknot::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "paper-trefoil".into());
    let curve = builtin_curve(&name)?;
    let problem = PrismProblem { curve: &curve, space: default_space(&curve) };
    let (start, _) = solve_prism_in(&problem, &[0.01, 0.18, 0.33, 0.52, 0.66, 0.84], &SolveOptions::default())?;
    let trace = trace_prism_manifold(&problem, &start.tuple.t, &TraceOptions::default())?;
    let arc = trace.points.last().map_or(0.0, |p| p.arc);
    println!("{} points, arc length {arc:.4}, stop {:?}", trace.points.len(), trace.stop);
    let singular = trace.points.iter().filter(|p| p.near_singular).count();
    println!("{singular} points with nearly touching edges");
    let scan = scan_planar_events(&trace, 1e-6);
    for e in &scan.events {
        let ty = e.config_type.map_or("?".to_string(), |t| t.number().to_string());
        println!("planar at point {:>3}: type {ty}, pattern {:?}, bad {:?}", e.index, e.config.pattern, e.bad);
    }
    println!("two-plane condition: {}", scan.two_plane_condition);
    Ok(())
}
