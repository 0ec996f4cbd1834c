//! Quadratic Conway coefficient of every catalog curve at three resolutions.

use hexaknot::curves::{builtin_curve, CATALOG};
use hexaknot::invariants::a2_of_curve;

fn main() -> hexaknot::Result<()> {
    for name in CATALOG {
        let curve = builtin_curve(name)?;
        let values: Vec<String> = [96, 192, 384]
            .iter()
            .map(|&n| a2_of_curve(&curve, n, None, 7, 0).map_or_else(|e| e.to_string(), |v| v.to_string()))
            .collect();
        println!("{name:>14}  a2 = {}", values.join(" / "));
    }
    Ok(())
}
