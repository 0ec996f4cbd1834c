//! Random search for inscribed trefoil hexagons of both handednesses.
//!
//!     cargo run --release --example search -- figure-eight 1000000

use hexaknot::curves::builtin_curve;
use hexaknot::search::{find_inscribed_trefoils, SearchBudget, Target};

fn main() -> hexaknot::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "paper-trefoil".into());
    let budget: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let curve = builtin_curve(&name)?;
    let report = find_inscribed_trefoils(&curve, &SearchBudget::new(budget, 0, Target::Both))?;
    for f in &report.finds {
        println!("sample {:>7}  {:<14}  t = {:.4?}", f.index, f.class.to_string(), f.t);
    }
    let s = &report.stats;
    println!("{} left, {} right in {} samples ({} prescreen hits)", s.left, s.right, s.samples, s.prescreen_hits);
    if report.budget_exhausted {
        println!("budget exhausted before both handednesses were found");
    }
    Ok(())
}
