use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use quatrange::range::Section2D;
use quatrange::twobytwo::Region2D;

const SIZE: f64 = 600.0;
const PAD: f64 = 40.0;
/// Scatter points drawn at most; the hull uses every sample.
pub const MAX_SCATTER: usize = 4000;

pub fn write_csv<W: Write>(points: &[Complex64], mut w: W) -> io::Result<()> {
    writeln!(w, "re,im")?;
    for z in points {
        writeln!(w, "{},{}", z.re, z.im)?;
    }
    Ok(())
}

/// Section samples as `re,im` rows.
pub fn emit_csv(section: &Section2D, path: &Path) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = io::BufWriter::new(file);
    write_csv(&section.points, &mut w)?;
    w.flush()
}

pub fn emit_svg(section: &Section2D, region: Option<&Region2D>, path: &Path) -> io::Result<()> {
    std::fs::write(path, render_svg(section, region))
}

struct Frame {
    lo: Complex64,
    scale: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = Complex64>) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
        for z in points.chain([Complex64::new(0.0, 0.0)]) {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let c = (lo + hi) * 0.5;
        Frame {
            lo: c - Complex64::new(span, span) * 0.5,
            scale: (SIZE - 2.0 * PAD) / span,
        }
    }

    fn x(&self, re: f64) -> f64 {
        PAD + (re - self.lo.re) * self.scale
    }

    fn y(&self, im: f64) -> f64 {
        SIZE - PAD - (im - self.lo.im) * self.scale
    }

    fn pt(&self, z: Complex64) -> String {
        format!("{:.2},{:.2}", self.x(z.re), self.y(z.im))
    }
}

fn region_points(region: &Region2D) -> Vec<Complex64> {
    match region {
        Region2D::HalfDisk { center, radius } => vec![
            center - *radius,
            center + *radius,
            center + Complex64::new(0.0, *radius),
        ],
        r => r.outline(),
    }
}

/// SVG on a fixed 600×600 canvas: axes, sample scatter, hull outline and the
/// closed-form region in a second stroke.
pub fn render_svg(section: &Section2D, region: Option<&Region2D>) -> String {
    let extra = region.map(region_points).unwrap_or_default();
    let f = Frame::new(section.hull.iter().copied().chain(extra.iter().copied()));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 600 600">"#
    );
    let _ = writeln!(s, r#"<rect width="600" height="600" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<g stroke="#888" stroke-width="1"><line x1="0" y1="{y:.2}" x2="600" y2="{y:.2}"/><line x1="{x:.2}" y1="0" x2="{x:.2}" y2="600"/></g>"##,
        y = f.y(0.0),
        x = f.x(0.0)
    );
    let stride = section.points.len().div_ceil(MAX_SCATTER).max(1);
    let _ = writeln!(s, r##"<g fill="#4477aa" fill-opacity="0.5">"##);
    for z in section.points.iter().step_by(stride) {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, f.x(z.re), f.y(z.im));
    }
    let _ = writeln!(s, "</g>");
    if !section.hull.is_empty() {
        let mut pts: Vec<String> = section.hull.iter().map(|&z| f.pt(z)).collect();
        pts.push(f.pt(section.hull[0]));
        let _ = writeln!(
            s,
            r##"<polyline class="hull" fill="none" stroke="#222" stroke-width="1.5" points="{}"/>"##,
            pts.join(" ")
        );
    }
    if let Some(r) = region {
        let _ = writeln!(s, "{}", region_element(r, &f));
    }
    s.push_str("</svg>\n");
    s
}

fn region_element(region: &Region2D, f: &Frame) -> String {
    const STYLE: &str = r##"class="region" fill="none" stroke="#cc3311" stroke-width="2" stroke-dasharray="6 4""##;
    match region {
        Region2D::Segment { a, b } => format!(
            r#"<line {STYLE} x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            f.x(a.re),
            f.y(a.im),
            f.x(b.re),
            f.y(b.im)
        ),
        Region2D::Triangle { vertices } => format!(
            r#"<polygon {STYLE} points="{}"/>"#,
            vertices.iter().map(|&z| f.pt(z)).collect::<Vec<_>>().join(" ")
        ),
        Region2D::HalfDisk { center, radius } => {
            let r = radius * f.scale;
            format!(
                r#"<path {STYLE} d="M {} A {r:.2} {r:.2} 0 0 0 {} Z"/>"#,
                f.pt(center + *radius),
                f.pt(center - *radius)
            )
        }
        Region2D::MinkowskiBound { .. } => format!(
            r#"<polygon {STYLE} points="{}"/>"#,
            region.outline().iter().map(|&z| f.pt(z)).collect::<Vec<_>>().join(" ")
        ),
    }
}
