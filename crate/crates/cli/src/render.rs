//! SVG rendering: every disk outline thin, surviving map arcs thick,
//! one group per frame so viewers can toggle them independently.
//!
//! Map arcs live in rotated frames; each sampled arc point is rotated
//! back into input coordinates, so all three frames overlay the same
//! disk drawing. SVG's y axis grows downward, so y is negated.

use std::fmt::Write as _;

use maxdisk::{ArcMap64, Disk64, Frame};

const ARC_SAMPLES: usize = 48;

fn frame_color(f: Frame) -> &'static str {
    match f {
        Frame::Right => "#d62728",
        Frame::Top => "#2ca02c",
        Frame::Bottom => "#1f77b4",
    }
}

pub fn render_svg(disks: &[Disk64], maps: Option<&[ArcMap64; 3]>) -> String {
    let (mut lx, mut hx, mut ly, mut hy) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    if !disks.is_empty() {
        lx = f64::INFINITY;
        hx = f64::NEG_INFINITY;
        ly = f64::INFINITY;
        hy = f64::NEG_INFINITY;
        for d in disks {
            lx = lx.min(d.center.x - d.radius);
            hx = hx.max(d.center.x + d.radius);
            ly = ly.min(d.center.y - d.radius);
            hy = hy.max(d.center.y + d.radius);
        }
    }
    let margin = 0.05 * (hx - lx).max(hy - ly);
    let (lx, hx) = (lx - margin, hx + margin);
    let (ly, hy) = (ly - margin, hy + margin);
    let extent = (hx - lx).max(hy - ly);
    let thin = extent / 400.0;
    let thick = extent / 130.0;

    let mut s = String::new();
    // viewBox in flipped-y coordinates: the y range [ly, hy] maps to
    // [-hy, -ly].
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="900" height="{:.0}">"#,
        lx,
        -hy,
        hx - lx,
        hy - ly,
        900.0 * (hy - ly) / (hx - lx),
    )
    .unwrap();

    writeln!(s, r##"<g id="disks" fill="none" stroke="#999" stroke-width="{thin}">"##).unwrap();
    for d in disks {
        writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, d.center.x, -d.center.y, d.radius)
            .unwrap();
    }
    writeln!(s, "</g>").unwrap();

    if let Some(maps) = maps {
        for (f, m) in Frame::ALL.into_iter().zip(maps) {
            writeln!(
                s,
                r#"<g id="frame-{f}" fill="none" stroke="{}" stroke-width="{thick}" stroke-linecap="round" opacity="0.85">"#,
                frame_color(f),
            )
            .unwrap();
            let back = -f.rotation::<f64>();
            for a in m.arcs() {
                if a.is_empty() {
                    continue;
                }
                let mut pts = String::new();
                for k in 0..=ARC_SAMPLES {
                    let t = a.lo + (a.hi - a.lo) * k as f64 / ARC_SAMPLES as f64;
                    let p = a.point_at(t).rotated(back);
                    if k > 0 {
                        pts.push(' ');
                    }
                    write!(pts, "{},{}", p.x, -p.y).unwrap();
                }
                writeln!(s, r#"<polyline points="{pts}"/>"#).unwrap();
            }
            writeln!(s, "</g>").unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
