//! Static SVG rendering of a cone, its lattice, and its atoms.
//!
//! The drawing is the one place where decimal approximations appear; every
//! coordinate is formatted with a fixed 12-significant-digit rule so the
//! byte output is a pure function of the inputs. The library's decisions
//! never touch these values.

use coneatoms_core::cone::{ConeSpec, RayDir};
use coneatoms_core::{ExactReal, LatticePoint};

/// Formats with at most 12 significant digits, trailing zeros trimmed.
fn num(v: f64) -> String {
    if v == 0.0 || v.abs() < 1e-12 {
        return "0".to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let dec = (11 - mag).clamp(0, 17) as usize;
    let mut s = format!("{v:.dec$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn slope_f64(slope: &ExactReal) -> f64 {
    match slope {
        ExactReal::Rational(r) => {
            let n: f64 = r.num().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.den().to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
        ExactReal::Quad(q) => {
            let (a, b, c, d) = q.parts();
            let to = |v: &num_bigint::BigInt| -> f64 { v.to_string().parse().unwrap_or(f64::NAN) };
            (to(a) + to(b) * to(d).sqrt()) / to(c)
        }
    }
}

fn dir_f64(dir: &RayDir) -> (f64, f64) {
    match dir {
        RayDir::Vector { x, y } => (
            x.to_string().parse().unwrap_or(f64::NAN),
            y.to_string().parse().unwrap_or(f64::NAN),
        ),
        RayDir::Irrational { x_sign, slope } => {
            let s = *x_sign as f64;
            (s, s * slope_f64(slope))
        }
    }
}

/// Point where the ray from the origin in direction `d` leaves the square
/// of half-width `s`.
fn ray_exit(d: (f64, f64), s: f64) -> (f64, f64) {
    let m = d.0.abs().max(d.1.abs());
    (d.0 * s / m, d.1 * s / m)
}

/// Square boundary walk: corners strictly between two boundary points in
/// counterclockwise order.
fn corners_between(from: (f64, f64), to: (f64, f64), s: f64) -> Vec<(f64, f64)> {
    let angle = |p: (f64, f64)| p.1.atan2(p.0);
    let corners = [(s, s), (-s, s), (-s, -s), (s, -s)];
    let a0 = angle(from);
    let mut span = angle(to) - a0;
    if span <= 1e-12 {
        span += core::f64::consts::TAU;
    }
    let mut picked: Vec<(f64, (f64, f64))> = corners
        .iter()
        .filter_map(|&c| {
            let mut rel = angle(c) - a0;
            if rel <= 1e-12 {
                rel += core::f64::consts::TAU;
            }
            (rel < span).then_some((rel, c))
        })
        .collect();
    picked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
    picked.into_iter().map(|(_, c)| c).collect()
}

/// Polygon of the cone clipped to the square of half-width `s`, in world
/// coordinates.
fn region_polygon(cone: &ConeSpec, s: f64) -> Vec<(f64, f64)> {
    match cone {
        ConeSpec::FullPlane => vec![(s, s), (-s, s), (-s, -s), (s, -s)],
        ConeSpec::HalfPlane { normal, .. } => {
            let n = dir_f64(normal);
            // Boundary direction rotated -90° from the normal; region is
            // swept counterclockwise from d to -d.
            let d = (n.1, -n.0);
            let from = ray_exit(d, s);
            let to = ray_exit((-d.0, -d.1), s);
            let mut poly = vec![from];
            poly.extend(corners_between(from, to, s));
            poly.push(to);
            poly
        }
        ConeSpec::Sector { low, high } => {
            let from = ray_exit(dir_f64(&low.dir), s);
            let to = ray_exit(dir_f64(&high.dir), s);
            let mut poly = vec![(0.0, 0.0), from];
            poly.extend(corners_between(from, to, s));
            poly.push(to);
            poly
        }
    }
}

fn push_line(out: &mut String, from: (f64, f64), to: (f64, f64), dashed: bool) {
    let dash = if dashed {
        " stroke-dasharray=\"0.25 0.25\""
    } else {
        ""
    };
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1f4e8c\" stroke-width=\"0.12\"{dash}/>\n",
        num(from.0),
        num(-from.1),
        num(to.0),
        num(-to.1)
    ));
}

/// Renders the cone region, lattice points, boundary rays (solid when
/// included, dashed when excluded) and highlighted atoms.
pub fn render(cone: &ConeSpec, bound: i64, atoms: &[LatticePoint]) -> String {
    let s = bound as f64 + 0.5;
    let view = 2.0 * (s + 0.5);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"640\">\n",
        num(-s - 0.5),
        num(-s - 0.5),
        num(view),
        num(view)
    ));
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        num(-s - 0.5),
        num(-s - 0.5),
        num(view),
        num(view)
    ));

    let poly = region_polygon(cone, s);
    let mut path = String::new();
    for (i, (x, y)) in poly.iter().enumerate() {
        path.push_str(if i == 0 { "M" } else { "L" });
        path.push_str(&format!("{} {} ", num(*x), num(-y)));
    }
    path.push('Z');
    out.push_str(&format!("<path d=\"{path}\" fill=\"#d7e5f7\"/>\n"));

    // Axes for orientation.
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"0\" x2=\"{}\" y2=\"0\" stroke=\"#cccccc\" stroke-width=\"0.04\"/>\n",
        num(-s),
        num(s)
    ));
    out.push_str(&format!(
        "<line x1=\"0\" y1=\"{}\" x2=\"0\" y2=\"{}\" stroke=\"#cccccc\" stroke-width=\"0.04\"/>\n",
        num(-s),
        num(s)
    ));

    // Boundary rays.
    match cone {
        ConeSpec::FullPlane => {}
        ConeSpec::HalfPlane {
            normal, included, ..
        } => {
            let n = dir_f64(normal);
            let d = (n.1, -n.0);
            push_line(&mut out, (0.0, 0.0), ray_exit(d, s), !included.0);
            push_line(&mut out, (0.0, 0.0), ray_exit((-d.0, -d.1), s), !included.1);
        }
        ConeSpec::Sector { low, high } => {
            push_line(&mut out, (0.0, 0.0), ray_exit(dir_f64(&low.dir), s), !low.included);
            push_line(
                &mut out,
                (0.0, 0.0),
                ray_exit(dir_f64(&high.dir), s),
                !high.included,
            );
        }
    }

    // Lattice dots.
    for y in -bound..=bound {
        for x in -bound..=bound {
            out.push_str(&format!(
                "<circle cx=\"{x}\" cy=\"{}\" r=\"0.07\" fill=\"#b0b0b0\"/>\n",
                -y
            ));
        }
    }

    // Atoms on top.
    for a in atoms {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.22\" fill=\"#c23b22\"/>\n",
            a.x, -a.y
        ));
    }
    out.push_str("</svg>\n");
    out
}
