//! Six points on the `paper-trefoil` curve whose long diagonals are concurrent.
//! The solution is unique up to relabeling: equally spaced parameters,
//! with the three diagonals parallel (apex at infinity).

use hexaknot::config_geometry::{distance_to_equally_spaced, PrismProblem};
use hexaknot::curves::builtin_curve;
use hexaknot::search::{solve_prism_in, SolveOptions};

fn main() -> hexaknot::Result<()> {
    let curve = builtin_curve("paper-trefoil")?;
    let problem = PrismProblem::ambient(&curve);
    let seed = [0.01, 0.18, 0.33, 0.52, 0.66, 0.84];
    let (config, stats) = solve_prism_in(&problem, &seed, &SolveOptions::default())?;
    println!("t        = {:.10?}", config.tuple.t);
    println!("residual = {:.2e} after {} iterations", config.residual, stats.iterations);
    println!("apex     = {:?}", config.apex);
    println!("distance to equally spaced = {:.2e}", distance_to_equally_spaced(&config.tuple));
    for (k, r) in stats.history.iter().enumerate() {
        println!("  {k:>2}  {r:.3e}");
    }
    Ok(())
}
