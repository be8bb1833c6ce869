//! Self-contained SVG heatmaps for 2-axis sweep results.
//!
//! No external assets or stylesheets: every style is inline, so the file
//! renders anywhere. Signed fields use a fixed two-ramp diverging color
//! scale centered at 0 (blue negative, red positive); the operating regime
//! is overlaid on every cell (engine = orange, refrigerator = blue,
//! none = gray), and a color scale is embedded on the right.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{OttoError, Result};
use crate::sweep::{GridResult, PointRecord};
use crate::thermo::Regime;

const ENGINE_COLOR: &str = "#d95f02";
const REFRIGERATOR_COLOR: &str = "#2166ac";
const NONE_COLOR: &str = "#cccccc";
const NEG_COLOR: (u8, u8, u8) = (33, 102, 172); // #2166ac
const POS_COLOR: (u8, u8, u8) = (178, 24, 43); // #b2182b

fn regime_color(r: Regime) -> &'static str {
    match r {
        Regime::Engine => ENGINE_COLOR,
        Regime::Refrigerator => REFRIGERATOR_COLOR,
        Regime::None => NONE_COLOR,
    }
}

fn lerp(a: u8, b: u8, t: f64) -> u8 {
    (a as f64 + (b as f64 - a as f64) * t).round().clamp(0.0, 255.0) as u8
}

/// Diverging color for value v with symmetric range [-vmax, vmax].
fn diverging_color(v: f64, vmax: f64) -> String {
    if !v.is_finite() || vmax <= 0.0 {
        return NONE_COLOR.into();
    }
    let t = (v.abs() / vmax).min(1.0);
    let ramp = if v < 0.0 { NEG_COLOR } else { POS_COLOR };
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(255, ramp.0, t),
        lerp(255, ramp.1, t),
        lerp(255, ramp.2, t)
    )
}

/// Fields the heatmap can render.
pub const SVG_FIELDS: [&str; 6] = ["Q_h", "Q_c", "W", "figure_of_merit", "power", "regime"];

fn field_value(p: &PointRecord, field: &str) -> Option<f64> {
    let v = match field {
        "Q_h" => Some(p.q_h),
        "Q_c" => Some(p.q_c),
        "W" => Some(p.w),
        "figure_of_merit" => p.figure_of_merit,
        "power" => p.power,
        _ => None,
    };
    v.filter(|x| x.is_finite())
}

/// Render the heatmap document.
pub fn svg_string(result: &GridResult, field: &str, width: u32, height: u32) -> Result<String> {
    if result.axes.len() != 2 {
        return Err(OttoError::Config(format!(
            "SVG heatmap needs exactly 2 grid axes, config has {}",
            result.axes.len()
        )));
    }
    if !SVG_FIELDS.contains(&field) {
        return Err(OttoError::Config(format!(
            "unknown SVG field '{field}' (use one of {SVG_FIELDS:?})"
        )));
    }
    let nx = result.axes[0].count.max(1);
    let ny = result.axes[1].count.max(1);
    if result.points.len() != nx * ny {
        return Err(OttoError::Config(format!(
            "point count {} does not match the {nx}x{ny} grid",
            result.points.len()
        )));
    }
    let (ml, mr, mt, mb) = (70.0, 120.0, 40.0, 55.0);
    let (w, h) = (width as f64, height as f64);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let (cw, ch) = (pw / nx as f64, ph / ny as f64);
    let vmax = result
        .points
        .iter()
        .filter_map(|p| field_value(p, field))
        .map(f64::abs)
        .fold(0.0, f64::max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"##
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{} ({} sweep)</text>"##,
        ml + pw / 2.0,
        field,
        result.mode.as_str()
    );

    // cells: axis1 along x (row-major outer loop), axis2 along y
    for (idx, p) in result.points.iter().enumerate() {
        let ix = idx / ny;
        let iy = idx % ny;
        let x = ml + ix as f64 * cw;
        // flip y so axis2 grows upward
        let y = mt + ph - (iy as f64 + 1.0) * ch;
        let fill = if field == "regime" {
            regime_color(p.regime).to_string()
        } else {
            match field_value(p, field) {
                Some(v) => diverging_color(v, vmax),
                None => NONE_COLOR.into(),
            }
        };
        let _ = write!(
            s,
            r##"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="{fill}""##
        );
        if field != "regime" {
            // regime overlay as the cell outline
            let _ = write!(s, r##" stroke="{}" stroke-width="1""##, regime_color(p.regime));
        }
        let _ = writeln!(s, "/>");
    }

    // frame and axis labels
    let _ = writeln!(
        s,
        r##"<rect x="{ml:.2}" y="{mt:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#000000" stroke-width="1"/>"##
    );
    let ax = &result.axes[0];
    let ay = &result.axes[1];
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"##,
        ml + pw / 2.0,
        h - 14.0,
        ax.name
    );
    let _ = writeln!(
        s,
        r##"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"##,
        mt + ph / 2.0,
        mt + ph / 2.0,
        ay.name
    );
    for (val, x) in [(ax.min, ml), (ax.max, ml + pw)] {
        let _ = writeln!(
            s,
            r##"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{val:.4}</text>"##,
            mt + ph + 18.0
        );
    }
    for (val, y) in [(ay.min, mt + ph), (ay.max, mt)] {
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{val:.4}</text>"##,
            ml - 6.0,
            y + 4.0
        );
    }

    // legend: regime swatches plus (for numeric fields) the diverging scale
    let lx = ml + pw + 18.0;
    let mut ly = mt;
    for (regime, label) in [
        (Regime::Engine, "engine"),
        (Regime::Refrigerator, "refrigerator"),
        (Regime::None, "none"),
    ] {
        let _ = writeln!(
            s,
            r##"<rect x="{lx:.2}" y="{ly:.2}" width="14" height="14" fill="{}"/>"##,
            regime_color(regime)
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{label}</text>"##,
            lx + 20.0,
            ly + 11.0
        );
        ly += 20.0;
    }
    if field != "regime" {
        let bar_h = ph - 80.0;
        let bar_y = ly + 12.0;
        let steps = 32usize;
        for i in 0..steps {
            let t = i as f64 / (steps - 1) as f64;
            let v = vmax * (1.0 - 2.0 * t); // top = +vmax, bottom = -vmax
            let seg_h = bar_h / steps as f64;
            let _ = writeln!(
                s,
                r##"<rect x="{lx:.2}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"##,
                bar_y + i as f64 * seg_h,
                seg_h + 0.5,
                diverging_color(v, vmax.max(f64::MIN_POSITIVE))
            );
        }
        for (val, y) in [
            (vmax, bar_y),
            (0.0, bar_y + bar_h / 2.0),
            (-vmax, bar_y + bar_h),
        ] {
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10">{val:.3e}</text>"##,
                lx + 20.0,
                y + 4.0
            );
        }
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

/// Write the heatmap to disk.
pub fn emit_svg(result: &GridResult, path: &Path, field: &str, width: u32, height: u32) -> Result<()> {
    let body = svg_string(result, field, width, height)?;
    std::fs::write(path, body).map_err(|source| OttoError::Io {
        path: path.to_path_buf(),
        source,
    })
}
