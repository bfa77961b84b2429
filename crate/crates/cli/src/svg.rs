use std::fmt::Write;

use num_traits::ToPrimitive;
use tropconic::classify::{PlaneType, SliceLabel};
use tropconic::exactgeom::{ClipBox, LabeledPolygon, Point2, Rational};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;
const LEGEND: f64 = 170.0;

pub fn color(t: PlaneType) -> &'static str {
    match t {
        PlaneType::Eeee => "#8c8c8c",
        PlaneType::EeffA => "#1b9e77",
        PlaneType::EeffB => "#d95f02",
        PlaneType::Effg => "#7570b3",
        PlaneType::Eeeg => "#e7298a",
        PlaneType::Eefg => "#66a61e",
        PlaneType::Fffgg => "#e6ab02",
        PlaneType::Unrecognized => "#ffffff",
    }
}

fn f(r: &Rational) -> f64 {
    r.to_f64().expect("finite")
}

fn screen(b: &ClipBox, p: &Point2) -> (f64, f64) {
    let x = (&p.0 - &b.min.0) / (&b.max.0 - &b.min.0);
    let y = (&b.max.1 - &p.1) / (&b.max.1 - &b.min.1);
    (MARGIN + SIZE * f(&x), MARGIN + SIZE * f(&y))
}

/// Cells filled by plane type and labeled by configuration type; coordinates
/// are rounded to 6 decimals here and nowhere else.
pub fn render(b: &ClipBox, cells: &[LabeledPolygon<SliceLabel>], title: &str) -> String {
    let width = SIZE + 2.0 * MARGIN + LEGEND;
    let height = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##).unwrap();
    writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.6}" height="{height:.6}" viewBox="0 0 {width:.6} {height:.6}">"##
    )
    .unwrap();
    writeln!(s, "<title>{title}</title>").unwrap();
    writeln!(s, r##"<g stroke="#222222" stroke-width="0.8">"##).unwrap();
    for c in cells {
        let pts: Vec<String> = c
            .vertices
            .iter()
            .map(|p| {
                let (x, y) = screen(b, p);
                format!("{x:.6},{y:.6}")
            })
            .collect();
        writeln!(
            s,
            r##"<polygon points="{}" fill="{}"><title>type {} {}</title></polygon>"##,
            pts.join(" "),
            color(c.label.plane_type),
            c.label.type_id,
            c.label.plane_type
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, r##"<g font-family="sans-serif" font-size="11" text-anchor="middle">"##).unwrap();
    for c in cells {
        let (x, y) = screen(b, &c.centroid());
        writeln!(s, r##"<text x="{x:.6}" y="{:.6}">{}</text>"##, y + 4.0, c.label.type_id).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    let lx = SIZE + 2.0 * MARGIN;
    writeln!(s, r##"<g font-family="sans-serif" font-size="13">"##).unwrap();
    for (i, t) in PlaneType::ALL.iter().filter(|&&t| t != PlaneType::Unrecognized).enumerate() {
        let y = MARGIN + 24.0 * i as f64;
        writeln!(
            s,
            r##"<rect x="{lx:.6}" y="{y:.6}" width="16.000000" height="16.000000" fill="{}" stroke="#222222"/><text x="{:.6}" y="{:.6}">{t}</text>"##,
            color(*t),
            lx + 24.0,
            y + 13.0
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, "</svg>").unwrap();
    s
}
