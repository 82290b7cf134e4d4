use std::fmt::Write;

use super::{format_fixed, format_pct, CoverageRow, TrendRow};
use crate::analysis::{years_since, GapRow, IntervalTable};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const BAR: &str = "#4c72b0";
const BAR_COMPARE: &str = "#dd8452";
const FONT: &str = "font-family=\"sans-serif\" font-size=\"11\"";

struct Svg {
    buf: String,
}

impl Svg {
    fn new(width: u32, height: u32, title: &str) -> Self {
        let mut buf = String::new();
        let _ = writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        let _ = writeln!(buf, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
        let _ = writeln!(
            buf,
            "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
            width / 2,
            escape(title)
        );
        Svg { buf }
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.buf,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>",
            num(x),
            num(y),
            num(w.max(0.0)),
            num(h)
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, extra: &str) {
        let _ = writeln!(
            self.buf,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\"{extra}/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, body: &str) {
        let _ = writeln!(
            self.buf,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" {FONT}>{}</text>",
            num(x),
            num(y),
            escape(body)
        );
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, class: &str) {
        let pts: Vec<String> = points.iter().map(|(x, y)| format!("{},{}", num(*x), num(*y))).collect();
        let _ = writeln!(
            self.buf,
            "<polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>",
            pts.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn num(v: f64) -> String {
    format_fixed(v, 2)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Smallest multiple of `step` that is >= `value` (at least `step`).
fn nice_max(value: f64, step: f64) -> f64 {
    ((value / step).ceil() * step).max(step)
}

const LABEL_W: f64 = 150.0;
const PLOT_W: f64 = 420.0;
const ROW_H: f64 = 18.0;
const TOP: f64 = 40.0;

fn x_axis(svg: &mut Svg, y: f64, max: f64, step: f64, suffix: &str) {
    svg.line(LABEL_W, y, LABEL_W + PLOT_W, y, "#000000", "");
    let ticks = (max / step).round() as usize;
    for i in 0..=ticks {
        let v = step * i as f64;
        let x = LABEL_W + PLOT_W * v / max;
        svg.line(x, TOP - 4.0, x, y, "#dddddd", " stroke-dasharray=\"3,3\"");
        svg.text(x, y + 14.0, "middle", &format!("{}{suffix}", format_fixed(v, 0)));
    }
}

/// Horizontal bars, one per row, labelled `count (pct%)`.
pub fn render_coverage_chart(title: &str, rows: &[CoverageRow]) -> String {
    let height = TOP + ROW_H * rows.len() as f64 + 40.0;
    let mut svg = Svg::new(700, height as u32, title);
    let max = nice_max(rows.iter().map(|r| r.pct).fold(0.0, f64::max), 10.0);
    for (i, r) in rows.iter().enumerate() {
        let y = TOP + ROW_H * i as f64;
        svg.text(LABEL_W - 6.0, y + 12.0, "end", &r.skill);
        let w = PLOT_W * r.pct / max;
        svg.rect(LABEL_W, y + 3.0, w, ROW_H - 6.0, BAR);
        svg.text(LABEL_W + w + 4.0, y + 12.0, "start", &format!("{} ({}%)", r.count, format_pct(r.pct)));
    }
    x_axis(&mut svg, TOP + ROW_H * rows.len() as f64, max, 10.0, "%");
    svg.finish()
}

/// Paired bars per skill: job-post share above, syllabus share below.
pub fn render_gap_chart(rows: &[GapRow]) -> String {
    let pair_h = ROW_H * 1.5;
    let height = TOP + pair_h * rows.len() as f64 + 60.0;
    let mut svg = Svg::new(700, height as u32, "Syllabus coverage vs job-post demand");
    for (i, r) in rows.iter().enumerate() {
        let y = TOP + pair_h * i as f64;
        svg.text(LABEL_W - 6.0, y + 15.0, "end", &r.skill);
        let job_w = PLOT_W * r.job_pct / 100.0;
        let edu_w = PLOT_W * r.edu_pct / 100.0;
        svg.rect(LABEL_W, y + 3.0, job_w, 10.0, BAR_COMPARE);
        svg.rect(LABEL_W, y + 13.0, edu_w, 10.0, BAR);
        svg.text(
            LABEL_W + job_w.max(edu_w) + 4.0,
            y + 15.0,
            "start",
            &format!("{}% / {}% (gap {})", format_pct(r.job_pct), format_pct(r.edu_pct), format_pct(r.gap)),
        );
    }
    let axis_y = TOP + pair_h * rows.len() as f64;
    x_axis(&mut svg, axis_y, 100.0, 10.0, "%");
    let ly = axis_y + 32.0;
    svg.rect(LABEL_W, ly, 10.0, 10.0, BAR_COMPARE);
    svg.text(LABEL_W + 14.0, ly + 9.0, "start", "Technologies in job posts");
    svg.rect(LABEL_W + 200.0, ly, 10.0, 10.0, BAR);
    svg.text(LABEL_W + 214.0, ly + 9.0, "start", "Technologies in syllabi");
    svg.finish()
}

const CHART_LEFT: f64 = 60.0;
const CHART_W: f64 = 560.0;
const CHART_H: f64 = 300.0;

/// Vertical bars of documents per half-year interval.
pub fn render_postings_chart(table: &IntervalTable) -> String {
    let intervals = table.intervals();
    let mut svg = Svg::new(680, (TOP + CHART_H + 50.0) as u32, "Job posts per half-year");
    let max = nice_max(table.totals.iter().copied().max().unwrap_or(0) as f64, 1000.0);
    let base = TOP + CHART_H;
    let slot = CHART_W / intervals.len().max(1) as f64;
    for step in 0..=4 {
        let v = max * step as f64 / 4.0;
        let y = base - CHART_H * v / max;
        svg.line(CHART_LEFT, y, CHART_LEFT + CHART_W, y, "#dddddd", " stroke-dasharray=\"3,3\"");
        svg.text(CHART_LEFT - 6.0, y + 4.0, "end", &format_fixed(v, 0));
    }
    for (i, (iv, total)) in intervals.iter().zip(&table.totals).enumerate() {
        let h = CHART_H * *total as f64 / max;
        let x = CHART_LEFT + slot * i as f64;
        svg.rect(x + slot * 0.15, base - h, slot * 0.7, h, BAR);
        svg.text(x + slot / 2.0, base + 14.0, "middle", &iv.to_string());
    }
    svg.line(CHART_LEFT, base, CHART_LEFT + CHART_W, base, "#000000", "");
    svg.finish()
}

/// One percentage polyline per trend row plus its straight fitted line.
pub fn render_trend_chart(table: &IntervalTable, trends: &[TrendRow]) -> String {
    let intervals = table.intervals();
    let legend_h = 16.0 * trends.len() as f64;
    let height = TOP + CHART_H + 40.0 + legend_h;
    let mut svg = Svg::new(680, height as u32, "Share of job posts per half-year with linear trends");
    let series: Vec<_> = trends.iter().map(|t| table.series(&t.fit.skill)).collect();
    let max_pct = series.iter().flatten().map(|(_, p)| *p).fold(0.0, f64::max);
    let max = nice_max(max_pct, 5.0);
    let base = TOP + CHART_H;
    let origin = intervals[0];
    let span = years_since(origin, intervals[intervals.len() - 1]).max(0.5);
    let px = |x: f64| CHART_LEFT + CHART_W * x / span;
    let py = |y: f64| base - CHART_H * y.clamp(0.0, max) / max;

    for step in 0..=5 {
        let v = max * step as f64 / 5.0;
        svg.line(CHART_LEFT, py(v), CHART_LEFT + CHART_W, py(v), "#dddddd", " stroke-dasharray=\"3,3\"");
        svg.text(CHART_LEFT - 6.0, py(v) + 4.0, "end", &format!("{}%", format_fixed(v, 0)));
    }
    for iv in &intervals {
        svg.text(px(years_since(origin, *iv)), base + 14.0, "middle", &iv.to_string());
    }
    svg.line(CHART_LEFT, base, CHART_LEFT + CHART_W, base, "#000000", "");

    for (k, (t, s)) in trends.iter().zip(&series).enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s.iter().map(|(iv, p)| (px(years_since(origin, *iv)), py(*p))).collect();
        svg.polyline(&pts, color, "series");
        if let (Some(first), Some(last)) = (s.first(), s.last()) {
            // the fit's x origin is the first non-empty interval of its series
            let x0 = years_since(origin, first.0);
            let x1 = years_since(origin, last.0);
            let y0 = t.fit.intercept;
            let y1 = t.fit.intercept + t.fit.slope * (x1 - x0);
            svg.line(px(x0), py(y0), px(x1), py(y1), color, " class=\"fit\" stroke-dasharray=\"6,3\"");
        }
        let ly = base + 34.0 + 16.0 * k as f64;
        svg.rect(CHART_LEFT, ly - 9.0, 10.0, 10.0, color);
        svg.text(
            CHART_LEFT + 16.0,
            ly,
            "start",
            &format!("{}: {} pp/year ({})", t.fit.skill, format_fixed(t.fit.slope, 2), t.class),
        );
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{fit_trend, IntervalRange, TrendClass};
    use std::collections::BTreeMap;

    fn table() -> IntervalTable {
        let r = IntervalRange::new("2016H1".parse().unwrap(), "2017H2".parse().unwrap()).unwrap();
        IntervalTable::from_counts(
            r,
            vec![100, 100, 0, 100],
            BTreeMap::from([
                ("A".to_owned(), vec![1, 2, 0, 4]),
                ("B".to_owned(), vec![9, 8, 0, 7]),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn trend_chart_has_one_polyline_and_one_fit_per_skill() {
        let t = table();
        let rows: Vec<TrendRow> = ["A", "B"]
            .iter()
            .map(|s| TrendRow { fit: fit_trend(s, &t.series(s)).unwrap(), class: TrendClass::WithMarket })
            .collect();
        let svg = render_trend_chart(&t, &rows);
        assert_eq!(svg.matches("<polyline class=\"series\"").count(), 2);
        assert_eq!(svg.matches("class=\"fit\"").count(), 2);
    }

    #[test]
    fn gap_chart_pairs_bars() {
        let rows = vec![
            GapRow { skill: "SQL".into(), edu_pct: 100.0, job_pct: 22.4, gap: 77.6 },
            GapRow { skill: "A<B".into(), edu_pct: 0.0, job_pct: 8.9, gap: 8.9 },
        ];
        let svg = render_gap_chart(&rows);
        assert_eq!(svg.matches(&format!("fill=\"{BAR_COMPARE}\"")).count(), 3);
        assert_eq!(svg.matches(&format!("fill=\"{BAR}\"")).count(), 3);
        assert!(svg.contains("A&lt;B"));
    }
}
