//! Knot type of a closed polygon, read from a JSON or CSV vertex list.
//!
//!     cargo run --example classify -- fixtures/paper_trefoil_hexagon.json

use hexaknot::diagram::ClosedPolygon;
use hexaknot::invariants::classify_polygon;

fn main() -> hexaknot::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/paper_trefoil_hexagon.json").into());
    let text = std::fs::read_to_string(&path)?;
    let poly = if text.trim_start().starts_with('[') { ClosedPolygon::from_json(&text)? } else { ClosedPolygon::from_csv(&text)? };
    let c = classify_polygon(&poly, 10, 0)?;
    println!("{path}: {}", c.class);
    for d in &c.directions {
        println!("  {} crossings, writhe {:+}, v2 {}, v3 {:+}, jones {}", d.crossings, d.writhe, d.v2, d.v3, d.jones);
    }
    Ok(())
}
