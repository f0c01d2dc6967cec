//! Static line charts rendered from the result tables.
//!
//! Output depends only on the CSV contents, so charts can be regenerated
//! offline with `mecnet report`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::write;
use crate::experiment::{ArqfRow, HopsRow, ParallelismRow};
use crate::format::read_csv;
use crate::Result;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 340.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 52.0;
const LEGEND_ROW: f64 = 16.0;

#[derive(Clone, Debug, Default)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Tick step from {1, 2, 5} x 10^n giving at most about six ticks.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0, 0.2);
    }
    if hi - lo < 1e-9 {
        lo -= 0.5;
        hi += 0.5;
    }
    let step = nice_step(hi - lo);
    ((lo / step).floor() * step, (hi / step).ceil() * step, step)
}

fn panel(out: &mut String, p: &Panel, x0: f64) {
    let (w, h) = (PANEL_W - MARGIN_L - MARGIN_R, PANEL_H - MARGIN_T - MARGIN_B);
    let (ox, oy) = (x0 + MARGIN_L, MARGIN_T);
    let pts = || p.series.iter().flat_map(|s| s.points.iter());
    let (xl, xh, xs) = axis_range(pts().map(|q| q.0));
    let (yl, yh, ys) = axis_range(pts().map(|q| q.1));
    let sx = |x: f64| ox + (x - xl) / (xh - xl) * w;
    let sy = |y: f64| oy + h - (y - yl) / (yh - yl) * h;

    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14" font-weight="bold">{}</text>"#,
        num(ox + w / 2.0),
        esc(&p.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        num(ox),
        num(oy),
        num(w),
        num(h)
    );
    let mut t = xl;
    while t <= xh + xs * 1e-6 {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd"/><text x="{0}" y="{3}" text-anchor="middle" font-size="11">{4}</text>"##,
            num(x),
            num(oy),
            num(oy + h),
            num(oy + h + 15.0),
            num(t)
        );
        t += xs;
    }
    let mut t = yl;
    while t <= yh + ys * 1e-6 {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#ddd"/><text x="{3}" y="{4}" text-anchor="end" font-size="11">{5}</text>"##,
            num(ox),
            num(y),
            num(ox + w),
            num(ox - 6.0),
            num(y + 4.0),
            num(t)
        );
        t += ys;
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        num(ox + w / 2.0),
        num(oy + h + 36.0),
        esc(&p.x_label)
    );
    let (lx, ly) = (x0 + 16.0, oy + h / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{0}" y="{1}" text-anchor="middle" font-size="12" transform="rotate(-90 {0} {1})">{2}</text>"#,
        num(lx),
        num(ly),
        esc(&p.y_label)
    );

    for (i, s) in p.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|q| q.0.is_finite() && q.1.is_finite()).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", num(sx(x)), num(sy(y)))).collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 3""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            path.join(" ")
        );
        for &(x, y) in &pts {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="2.5" fill="{color}"/>"#, num(sx(x)), num(sy(y)));
        }
        let ly = PANEL_H + 4.0 + i as f64 * LEGEND_ROW;
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"{dash}/><text x="{3}" y="{4}" font-size="11">{5}</text>"#,
            num(ox),
            num(ly),
            num(ox + 22.0),
            num(ox + 28.0),
            num(ly + 4.0),
            esc(&s.label)
        );
    }
}

/// Panels laid out left to right with legends underneath.
pub fn render(panels: &[Panel]) -> String {
    let rows = panels.iter().map(|p| p.series.len()).max().unwrap_or(0);
    let width = PANEL_W * panels.len().max(1) as f64;
    let height = PANEL_H + 12.0 + rows as f64 * LEGEND_ROW;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="sans-serif">"#,
        num(width),
        num(height)
    );
    out.push('\n');
    out.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    out.push('\n');
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, p, i as f64 * PANEL_W);
    }
    out.push_str("</svg>\n");
    out
}

fn group_label(source: &str, p: Option<f64>, k: usize) -> String {
    match p {
        Some(p) => format!("p={} k={k}", num(p)),
        None => format!("{source} k={k}"),
    }
}

type Groups<'a, T> = BTreeMap<(String, u64, usize), Vec<&'a T>>;

fn by_group<'a, T>(rows: &'a [T], key: impl Fn(&T) -> (&str, Option<f64>, usize)) -> Groups<'a, T> {
    let mut m: Groups<'a, T> = BTreeMap::new();
    for r in rows {
        let (s, p, k) = key(r);
        m.entry((s.to_string(), p.map_or(u64::MAX, f64::to_bits), k)).or_default().push(r);
    }
    m
}

fn label_of(key: &(String, u64, usize)) -> String {
    group_label(&key.0, (key.1 != u64::MAX).then(|| f64::from_bits(key.1)), key.2)
}

pub fn hops_chart(rows: &[HopsRow]) -> String {
    let groups = by_group(rows, |r| (&r.source, r.p, r.k));
    let mut total = Panel {
        title: "Total hops".into(),
        x_label: "requests".into(),
        y_label: "hops".into(),
        ..Default::default()
    };
    let mut mean = Panel {
        title: "Average hops per request".into(),
        y_label: "hops".into(),
        x_label: "requests".into(),
        ..Default::default()
    };
    for (key, rs) in &groups {
        let l = label_of(key);
        for (name, dashed) in [("CQR", false), ("MEC", true)] {
            let pick = |r: &HopsRow| if dashed { (r.mec_total_hops, r.mec_mean_hops) } else { (r.cqr_total_hops, r.cqr_mean_hops) };
            total.series.push(Series {
                label: format!("{name} {l}"),
                points: rs.iter().map(|r| (r.requests as f64, pick(r).0)).collect(),
                dashed,
            });
            mean.series.push(Series {
                label: format!("{name} {l}"),
                points: rs.iter().map(|r| (r.requests as f64, pick(r).1)).collect(),
                dashed,
            });
        }
    }
    render(&[total, mean])
}

pub fn parallelism_chart(rows: &[ParallelismRow]) -> String {
    let groups = by_group(rows, |r| (&r.source, r.p, r.k));
    let mut rbar = Panel {
        title: "Parallel requests per cycle".into(),
        x_label: "requests".into(),
        y_label: "r-bar".into(),
        ..Default::default()
    };
    let mut rho = Panel {
        title: "Cycles per batch".into(),
        x_label: "requests".into(),
        y_label: "rho".into(),
        ..Default::default()
    };
    for (key, rs) in &groups {
        let l = label_of(key);
        rbar.series.push(Series {
            label: l.clone(),
            points: rs.iter().map(|r| (r.requests as f64, r.r_bar)).collect(),
            dashed: false,
        });
        rho.series.push(Series {
            label: l,
            points: rs.iter().map(|r| (r.requests as f64, r.rho)).collect(),
            dashed: false,
        });
    }
    render(&[rbar, rho])
}

/// Legend label, value accessor, dashed.
type Column<R> = (&'static str, fn(&R) -> f64, bool);

pub fn arqf_chart(rows: &[ArqfRow]) -> String {
    let groups = by_group(rows, |r| (&r.source, r.p, r.k));
    let mut panels: BTreeMap<u64, Panel> = BTreeMap::new();
    for (key, rs) in &groups {
        let panel = panels.entry(key.1).or_insert_with(|| Panel {
            title: match key.1 {
                u64::MAX => "Routing-qubit footprint".into(),
                b => format!("Routing-qubit footprint, p={}", num(f64::from_bits(b))),
            },
            x_label: "requests".into(),
            y_label: "qubits".into(),
            ..Default::default()
        });
        let k = format!("k={}", key.2);
        let series: [Column<ArqfRow>; 3] = [
            ("CQR", |r| r.q_cqr, false),
            ("MEC proactive", |r| r.q_mec_pro, true),
            ("MEC on-demand", |r| r.q_mec_ond, true),
        ];
        for (name, f, dashed) in series {
            panel.series.push(Series {
                label: format!("{name} {k}"),
                points: rs.iter().map(|r| (r.requests as f64, f(r))).collect(),
                dashed,
            });
        }
    }
    render(&panels.into_values().collect::<Vec<_>>())
}

/// Regenerates every chart whose table exists in `dir`.
pub fn render_dir(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut emit = |name: &str, svg: String| -> Result<()> {
        let path = dir.join(name);
        write(&path, svg)?;
        out.push(path);
        Ok(())
    };
    let hops = dir.join("hops.csv");
    if hops.exists() {
        emit("hops.svg", hops_chart(&read_csv(&hops)?))?;
    }
    let par = dir.join("parallelism.csv");
    if par.exists() {
        emit("parallelism.svg", parallelism_chart(&read_csv(&par)?))?;
    }
    let arqf = dir.join("arqf.csv");
    if arqf.exists() {
        emit("arqf.svg", arqf_chart(&read_csv(&arqf)?))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(nice_step(10.0), 2.0);
        assert_eq!(nice_step(0.9), 0.2);
        assert_eq!(axis_range([1.0, 2.4].into_iter()), (1.0, 2.5, 0.5));
        assert_eq!(num(2.50), "2.5");
        assert_eq!(num(-0.0001), "0");
    }

    #[test]
    fn chart_is_deterministic_and_escaped() {
        let p = Panel {
            title: "a<b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![Series {
                label: "s&t".into(),
                points: vec![(2.0, 1.0), (1.0, 3.0)],
                dashed: true,
            }],
        };
        let a = render(std::slice::from_ref(&p));
        assert_eq!(a, render(&[p]));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains("a&lt;b") && a.contains("s&amp;t"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }
}
