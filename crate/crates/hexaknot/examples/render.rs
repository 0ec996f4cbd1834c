//! SVG of a lifted hexagram trefoil, with heights as vertex labels.
//!
//!     cargo run --example render > trefoil.svg

use hexaknot::config_geometry::synth::hexagram_points;
use hexaknot::config_geometry::{construct_case_heights, lift_configuration, CaseParams, PlanarConfiguration};
use hexaknot::diagram::project_diagram;
use hexaknot::render::{render_svg, RenderOptions};

fn main() -> hexaknot::Result<()> {
    let cfg = PlanarConfiguration::from_points(hexagram_points(&[0.0; 6], false))?;
    let h = construct_case_heights(&cfg, &[], &CaseParams::default())?;
    let diagram = project_diagram(&lift_configuration(&cfg, &h.f)?, &cfg.plane.normal)?;
    let opts = RenderOptions {
        vertex_labels: h.f.iter().enumerate().map(|(i, f)| format!("{} ({f:+.3})", i + 1)).collect(),
        title: Some("lifted hexagram".into()),
    };
    print!("{}", render_svg(&diagram, &opts));
    Ok(())
}
