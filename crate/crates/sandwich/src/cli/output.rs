use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::funcspace::{PLFunction, Rat};
use crate::semicont::{is_lsc, is_usc};

/// Role of a plotted/sampled function; decides the stroke style.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionRole {
    Input,
    Output,
}

/// A named piecewise-linear function selected for CSV/SVG emission.
#[derive(Clone, Debug)]
pub struct NamedFunction {
    pub name: String,
    pub role: FunctionRole,
    pub function: PLFunction,
}

/// Samples `f` at `resolution + 1` uniform abscissas plus one row per
/// breakpoint. Columns: abscissa `p/q`, value `p/q` (empty at removed
/// points), and a tag (`interior`, `breakpoint`, or `removed`). Rows are
/// merged in abscissa order, uniform samples before coincident breakpoints.
pub fn csv_samples(f: &PLFunction, resolution: u32) -> Result<String> {
    if resolution == 0 {
        return Err(Error::Parameter("resolution must be at least 1".into()));
    }
    let lo = f.lo().clone();
    let span = f.hi() - f.lo();
    let r = Rat::int(resolution as i64);
    let mut rows: Vec<(Rat, bool)> = Vec::new();
    for i in 0..=resolution {
        let x = &lo + &(&span * &(Rat::int(i as i64) / r.clone()));
        rows.push((x, false));
    }
    for bp in f.breakpoints() {
        rows.push((bp.x.clone(), true));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut out = String::from("x,value,tag\n");
    for (x, is_bp) in rows {
        match f.eval(&x) {
            Ok(v) => {
                let tag = if is_bp { "breakpoint" } else { "interior" };
                writeln!(out, "{x},{v},{tag}").unwrap();
            }
            Err(Error::RemovedPoint { .. }) => {
                writeln!(out, "{x},,removed").unwrap();
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 6] = [
    "#1f6fb4", "#c23b22", "#2e8b57", "#8860b2", "#b8860b", "#3b3b3b",
];

struct Frame {
    x0: f64,
    x_span: f64,
    y0: f64,
    y_span: f64,
}

impl Frame {
    fn x(&self, v: &Rat) -> f64 {
        MARGIN + (v.to_f64() - self.x0) / self.x_span * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: &Rat) -> f64 {
        HEIGHT - MARGIN - (v.to_f64() - self.y0) / self.y_span * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Renders the functions into a fixed 800x400 frame with 40px margins.
/// Affine pieces become line segments, jump values filled dots, non-attained
/// limits and removed points open circles. Functions that are lsc but not
/// usc are dashed; everything else is solid.
pub fn svg_plot(functions: &[NamedFunction]) -> Result<String> {
    if functions.is_empty() {
        return Err(Error::Parameter("nothing to plot".into()));
    }
    let first = &functions[0].function;
    let (lo, hi) = (first.lo().clone(), first.hi().clone());
    let mut y_min: Option<Rat> = None;
    let mut y_max: Option<Rat> = None;
    for nf in functions {
        for bp in nf.function.breakpoints() {
            for v in [&bp.value, &bp.left, &bp.right].into_iter().flatten() {
                if y_min.as_ref().is_none_or(|m| v < m) {
                    y_min = Some(v.clone());
                }
                if y_max.as_ref().is_none_or(|m| v > m) {
                    y_max = Some(v.clone());
                }
            }
        }
    }
    let (y_min, y_max) = (y_min.unwrap(), y_max.unwrap());
    let pad = Rat::new(1, 2);
    let (y_min, y_max) = if y_min == y_max {
        (&y_min - &pad, &y_max + &pad)
    } else {
        (y_min, y_max)
    };
    let frame = Frame {
        x0: lo.to_f64(),
        x_span: (&hi - &lo).to_f64(),
        y0: y_min.to_f64(),
        y_span: (&y_max - &y_min).to_f64(),
    };

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    )
    .unwrap();
    writeln!(
        svg,
        "  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#cccccc\" stroke-width=\"1\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )
    .unwrap();

    for (i, nf) in functions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let f = &nf.function;
        let dashed = is_lsc(f) && !is_usc(f);
        let dash = if dashed {
            " stroke-dasharray=\"6 3\""
        } else {
            ""
        };
        let width = match nf.role {
            FunctionRole::Input => 1.5,
            FunctionRole::Output => 2.5,
        };
        writeln!(svg, "  <g id=\"{}\" stroke=\"{color}\">", nf.name).unwrap();
        for p in f.pieces() {
            writeln!(
                svg,
                "    <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke-width=\"{width}\"{dash}/>",
                frame.x(p.x0),
                frame.y(p.y0),
                frame.x(p.x1),
                frame.y(p.y1)
            )
            .unwrap();
        }
        for bp in f.breakpoints() {
            let cx = frame.x(&bp.x);
            match &bp.value {
                Some(v) => {
                    let jump = bp.left.as_ref().is_some_and(|l| l != v)
                        || bp.right.as_ref().is_some_and(|r| r != v);
                    if jump {
                        writeln!(
                            svg,
                            "    <circle cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>",
                            frame.y(v)
                        )
                        .unwrap();
                        for limit in [&bp.left, &bp.right].into_iter().flatten() {
                            if limit != v {
                                writeln!(
                                    svg,
                                    "    <circle cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"4\" \
                                     fill=\"white\"/>",
                                    frame.y(limit)
                                )
                                .unwrap();
                            }
                        }
                    }
                }
                None => {
                    for limit in [&bp.left, &bp.right].into_iter().flatten() {
                        writeln!(
                            svg,
                            "    <circle cx=\"{cx:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"white\"/>",
                            frame.y(limit)
                        )
                        .unwrap();
                    }
                }
            }
        }
        writeln!(svg, "  </g>").unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}
