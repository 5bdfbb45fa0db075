//! Hand-written SVG line and scatter plots. Output depends only on the input
//! data: coordinates are printed with fixed precision and element order follows
//! series order.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Line,
    Dashed,
    Dots,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, mark: Mark) -> Self {
        Self { name: name.into(), points, mark }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    /// Same scale on both axes (for pictures in the complex plane).
    pub equal_aspect: bool,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Option<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return None;
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            let pad = 0.04 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Some(Self { lo, hi, log })
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let stride = ((b - a) / 8 + 1).max(1);
            return (a..=b).step_by(stride as usize).map(|e| (10f64.powi(e), format!("1e{e}"))).collect();
        }
        let raw = (self.hi - self.lo) / 8.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let decimals = (-(step.log10().floor() as i32)).max(0) as usize;
        let mut out = Vec::new();
        let mut t = (self.lo / step).ceil() * step;
        while t <= self.hi + 1e-9 * step {
            let v = if t.abs() < 1e-12 * step { 0.0 } else { t };
            out.push((v, format!("{v:.decimals$}")));
            t += step;
        }
        out
    }
}

fn visible(p: (f64, f64), log_y: bool) -> bool {
    p.0.is_finite() && p.1.is_finite() && (!log_y || p.1 > 0.0)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    /// The SVG document, or `None` when no series has a drawable point.
    pub fn render(&self) -> Option<String> {
        let pts = || self.series.iter().flat_map(|s| s.points.iter().copied()).filter(|&p| visible(p, self.log_y));
        let mut xa = Axis::fit(pts().map(|p| p.0), false)?;
        let mut ya = Axis::fit(pts().map(|p| p.1), self.log_y)?;
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        if self.equal_aspect {
            // widen whichever axis is short so one unit has the same length on both
            let (sx, sy) = ((xa.hi - xa.lo) / pw, (ya.hi - ya.lo) / ph);
            if sx > sy {
                let mid = 0.5 * (ya.lo + ya.hi);
                ya.lo = mid - 0.5 * sx * ph;
                ya.hi = mid + 0.5 * sx * ph;
            } else {
                let mid = 0.5 * (xa.lo + xa.hi);
                xa.lo = mid - 0.5 * sy * pw;
                xa.hi = mid + 0.5 * sy * pw;
            }
        }
        let px = |x: f64| LEFT + xa.frac(x) * pw;
        let py = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(&self.title));
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        for (v, label) in xa.ticks() {
            let x = px(v);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##, TOP, TOP + ph);
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 18.0);
        }
        for (v, label) in ya.ticks() {
            let y = py(v);
            let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, y + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 14.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let _ = writeln!(s, r#"<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath>"#);
        let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            match series.mark {
                Mark::Dots => {
                    let _ = writeln!(s, r#"<g fill="{color}">"#);
                    for &p in series.points.iter().filter(|&&p| visible(p, self.log_y)) {
                        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, px(p.0), py(p.1));
                    }
                    let _ = writeln!(s, "</g>");
                }
                Mark::Line | Mark::Dashed => {
                    let mut d = String::new();
                    let mut pen_down = false;
                    for &p in &series.points {
                        if !visible(p, self.log_y) {
                            pen_down = false;
                            continue;
                        }
                        let _ = write!(d, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, px(p.0), py(p.1));
                        pen_down = true;
                    }
                    let dash = if series.mark == Mark::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, d.trim_end());
                }
            }
        }
        let _ = writeln!(s, "</g>");

        let lx = LEFT + pw + 14.0;
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let y = TOP + 14.0 + 18.0 * i as f64;
            match series.mark {
                Mark::Dots => {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, lx + 10.0, y - 4.0);
                }
                Mark::Line | Mark::Dashed => {
                    let dash = if series.mark == Mark::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                    let _ = writeln!(
                        s,
                        r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"{dash}/>"#,
                        y - 4.0,
                        lx + 20.0,
                        y - 4.0
                    );
                }
            }
            let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, lx + 26.0, escape(&series.name));
        }
        s.push_str("</svg>\n");
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(log_y: bool) -> Plot {
        Plot {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_y,
            equal_aspect: false,
            series: vec![
                Series::new("a", vec![(0.0, 1.0), (1.0, 0.1), (2.0, 0.0), (3.0, 0.001)], Mark::Line),
                Series::new("b", vec![(0.0, 0.5), (3.0, 0.5)], Mark::Dashed),
                Series::new("c", vec![(1.0, 0.2)], Mark::Dots),
            ],
        }
    }

    #[test]
    fn one_path_per_line_series() {
        let svg = plot(true).render().unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
        // the zero value breaks the log-scale path into two pieces
        let first = svg.lines().find(|l| l.starts_with("<path")).unwrap();
        assert_eq!(first.matches('M').count(), 2);
        assert!(svg.contains("1e-3") || svg.contains("1e-2"));
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(plot(false).render(), plot(false).render());
    }

    #[test]
    fn nothing_to_draw() {
        let p = Plot { series: vec![Series::new("z", vec![(0.0, 0.0)], Mark::Line)], log_y: true, ..Default::default() };
        assert!(p.render().is_none());
        assert!(Plot::default().render().is_none());
    }

    #[test]
    fn linear_ticks_are_round() {
        let a = Axis { lo: -0.13, hi: 1.42, log: false };
        let t: Vec<String> = a.ticks().into_iter().map(|t| t.1).collect();
        assert_eq!(t, ["0.0", "0.2", "0.4", "0.6", "0.8", "1.0", "1.2", "1.4"]);
    }
}
