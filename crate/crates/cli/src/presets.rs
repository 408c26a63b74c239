use elastica::mesh::{
    PRESETS, HYPOTROCHOID_FIXED_RADIUS, HYPOTROCHOID_OFFSET, HYPOTROCHOID_ROLLING_RADIUS,
};

/// Listing of the built-in presets with their default run constants.
pub fn preset_listing() -> String {
    let mut out = String::new();
    for p in &PRESETS {
        out.push_str(&format!(
            "{}\n  {}\n  lambda={} N={} delta={} T={}",
            p.name, p.summary, p.lambda, p.vertices, p.delta, p.t_final
        ));
        match p.name {
            "circle" | "circle-nonequi" => out.push_str(&format!(" radius={}", p.radius)),
            "hypotrochoid" => out.push_str(&format!(
                " fixed_radius={HYPOTROCHOID_FIXED_RADIUS} rolling_radius={HYPOTROCHOID_ROLLING_RADIUS} offset={HYPOTROCHOID_OFFSET} alpha=0"
            )),
            _ => {}
        }
        out.push('\n');
    }
    out.push_str("custom-nodal\n  explicit vertex list via `points = [[x, y], ...]`; no defaults\n");
    out
}
