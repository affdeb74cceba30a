//! Serialization of traces and results: CSV event logs, SVG Gantt charts,
//! and markdown summary tables.
//!
//! Every function here is a pure function of its inputs and emits
//! byte-identical output for identical inputs. Exact times are written as
//! decimal strings when they terminate and as `num/den` fractions when they
//! do not, so parsing a CSV back loses nothing.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::engine::{SegmentKind, Trace};
use crate::error::{Error, Result};
use crate::metrics::{SimResult, Verdict};
use crate::rational::Rational;
use crate::sweep::SweepReport;
use crate::time::TimeStamp;

pub const TRACE_CSV_HEADER: &str = "kind,start_s,end_s,task,instance,model";

/// One non-Idle trace segment in its serialized form: times in seconds,
/// task referenced by name. Reload rows carry no task or instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSegment {
    pub kind: SegmentKind,
    pub start: Rational,
    pub end: Rational,
    pub task: Option<String>,
    pub instance: Option<u64>,
    pub model: String,
}

/// The rows `trace_csv` serializes, in trace order.
pub fn csv_segments(trace: &Trace) -> Vec<CsvSegment> {
    trace
        .segments
        .iter()
        .filter(|s| s.kind != SegmentKind::Idle)
        .map(|s| CsvSegment {
            kind: s.kind,
            start: s.start.as_rational(),
            end: s.end.as_rational(),
            task: s.job.map(|j| trace.tasks[j.task_index].name.clone()),
            instance: s.job.map(|j| j.instance),
            model: s.model.clone().unwrap_or_default(),
        })
        .collect()
}

/// Serializes all Execute and Reload segments; Idle gaps are implicit.
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for row in csv_segments(trace) {
        let kind = match row.kind {
            SegmentKind::Execute => "execute",
            SegmentKind::Reload => "reload",
            SegmentKind::Idle => unreachable!(),
        };
        let task = row.task.unwrap_or_default();
        let instance = row.instance.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{kind},{},{},{task},{instance},{}",
            row.start, row.end, row.model
        );
    }
    out
}

fn csv_err(line: usize, message: impl Into<String>) -> Error {
    Error::MalformedCsv {
        line,
        message: message.into(),
    }
}

/// Parses `trace_csv` output back into rows; exact inverse of
/// `csv_segments` for any valid trace.
pub fn parse_trace_csv(text: &str) -> Result<Vec<CsvSegment>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == TRACE_CSV_HEADER => {}
        Some((_, header)) => {
            return Err(csv_err(1, format!("expected header '{TRACE_CSV_HEADER}', got '{header}'")))
        }
        None => return Err(csv_err(1, "empty document")),
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(csv_err(line_no, format!("expected 6 fields, got {}", fields.len())));
        }
        let kind = match fields[0] {
            "execute" => SegmentKind::Execute,
            "reload" => SegmentKind::Reload,
            other => return Err(csv_err(line_no, format!("unknown segment kind '{other}'"))),
        };
        let start = Rational::from_str(fields[1])
            .map_err(|e| csv_err(line_no, format!("start_s: {e}")))?;
        let end =
            Rational::from_str(fields[2]).map_err(|e| csv_err(line_no, format!("end_s: {e}")))?;
        if start >= end {
            return Err(csv_err(line_no, "segment start must precede its end"));
        }
        let task = fields[3];
        let instance = fields[4];
        let model = fields[5];
        if model.is_empty() {
            return Err(csv_err(line_no, "missing model id"));
        }
        let (task, instance) = match kind {
            SegmentKind::Execute => {
                if task.is_empty() || instance.is_empty() {
                    return Err(csv_err(line_no, "execute rows need a task and an instance"));
                }
                let parsed = instance
                    .parse::<u64>()
                    .map_err(|e| csv_err(line_no, format!("instance: {e}")))?;
                (Some(task.to_string()), Some(parsed))
            }
            SegmentKind::Reload => {
                if !task.is_empty() || !instance.is_empty() {
                    return Err(csv_err(line_no, "reload rows carry no task or instance"));
                }
                (None, None)
            }
            SegmentKind::Idle => unreachable!(),
        };
        rows.push(CsvSegment {
            kind,
            start,
            end,
            task,
            instance,
            model: model.to_string(),
        });
    }
    Ok(rows)
}

// ── Gantt rendering ──

#[derive(Debug, Clone)]
pub struct GanttStyle {
    pub width_px: u32,
    pub row_height_px: u32,
    /// Execute fill colors, cycled per task row.
    pub execute_palette: Vec<String>,
    /// Draw release (downward) and deadline (upward) arrows per instance.
    pub show_markers: bool,
    /// Time window to draw; the whole trace when absent.
    pub window: Option<(TimeStamp, TimeStamp)>,
}

impl Default for GanttStyle {
    fn default() -> Self {
        GanttStyle {
            width_px: 900,
            row_height_px: 36,
            execute_palette: [
                "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            show_markers: true,
            window: None,
        }
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn px(value: f64) -> String {
    format!("{value:.2}")
}

fn ms_label(seconds: &Rational) -> String {
    let ms = seconds.to_f64() * 1000.0;
    if (ms - ms.round()).abs() < 1e-9 {
        format!("{:.0}", ms.round())
    } else {
        format!("{ms:.1}")
    }
}

/// Renders the trace as an SVG timeline: one row per task, solid bars for
/// Execute, hatched bars for Reload (drawn on the row of the model being
/// loaded), whitespace for Idle, and per-instance release/deadline arrows.
pub fn gantt_svg(trace: &Trace, style: &GanttStyle) -> String {
    let margin_left = 90.0;
    let margin_right = 20.0;
    let margin_top = 16.0;
    let margin_bottom = 36.0;
    let row_h = style.row_height_px as f64;
    let bar_pad = row_h * 0.18;

    let full_window = (TimeStamp::ZERO, trace.end());
    let (w_start, w_end) = match style.window {
        Some((s, e)) if s < e => (s, e),
        _ => full_window,
    };
    let t0 = w_start.as_rational().to_f64();
    let t1 = w_end.as_rational().to_f64();
    let span = t1 - t0;

    let rows = trace.tasks.len();
    let plot_w = style.width_px as f64 - margin_left - margin_right;
    let height = margin_top + rows as f64 * row_h + margin_bottom;
    let scale_x = |t: f64| -> f64 {
        if span > 0.0 {
            margin_left + (t - t0) / span * plot_w
        } else {
            margin_left
        }
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        style.width_px,
        px(height),
        style.width_px,
        px(height)
    );
    svg.push_str(
        "<defs><pattern id=\"reload-hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">\
<rect width=\"6\" height=\"6\" fill=\"#d8d8d8\"/>\
<path d=\"M0 6 L6 0\" stroke=\"#555555\" stroke-width=\"1.5\"/>\
</pattern></defs>\n",
    );

    if rows == 0 || span <= 0.0 {
        svg.push_str("</svg>\n");
        return svg;
    }

    let model_row: HashMap<&str, usize> = trace
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| (t.model_id.as_str(), i))
        .collect();
    let row_top = |row: usize| margin_top + row as f64 * row_h;

    for (i, task) in trace.tasks.iter().enumerate() {
        let y = row_top(i) + row_h / 2.0;
        let _ = writeln!(
            svg,
            "<text class=\"rowlabel\" x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"middle\" font-size=\"12\">{}</text>",
            px(margin_left - 8.0),
            px(y),
            xml_escape(&task.name)
        );
    }

    for seg in &trace.segments {
        if seg.kind == SegmentKind::Idle || seg.end <= w_start || seg.start >= w_end {
            continue;
        }
        let s = seg.start.max(w_start).as_rational().to_f64();
        let e = seg.end.min(w_end).as_rational().to_f64();
        let row = match (&seg.job, &seg.model) {
            (Some(job), _) => job.task_index,
            (None, Some(model)) => *model_row.get(model.as_str()).unwrap_or(&0),
            (None, None) => 0,
        };
        let x = scale_x(s);
        let w = (scale_x(e) - x).max(0.5);
        let y = row_top(row) + bar_pad;
        let h = row_h - 2.0 * bar_pad;
        match seg.kind {
            SegmentKind::Execute => {
                let job = seg.job.expect("execute segments carry a job");
                let fill = &style.execute_palette[row % style.execute_palette.len()];
                let _ = writeln!(
                    svg,
                    "<rect class=\"seg seg-execute\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"0.5\"><title>{}#{} [{}, {}) s</title></rect>",
                    px(x),
                    px(y),
                    px(w),
                    px(h),
                    fill,
                    xml_escape(&trace.tasks[job.task_index].name),
                    job.instance,
                    seg.start.as_rational(),
                    seg.end.as_rational()
                );
            }
            SegmentKind::Reload => {
                let _ = writeln!(
                    svg,
                    "<rect class=\"seg seg-reload\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"url(#reload-hatch)\" stroke=\"#333333\" stroke-width=\"0.5\"><title>reload {} [{}, {}) s</title></rect>",
                    px(x),
                    px(y),
                    px(w),
                    px(h),
                    xml_escape(seg.model.as_deref().unwrap_or("")),
                    seg.start.as_rational(),
                    seg.end.as_rational()
                );
            }
            SegmentKind::Idle => unreachable!(),
        }
    }

    if style.show_markers {
        for (i, task) in trace.tasks.iter().enumerate() {
            let y_top = row_top(i) + bar_pad;
            let y_bot = row_top(i) + row_h - bar_pad;
            for k in 0..task.instances {
                let release = task
                    .period
                    .checked_mul_int(k)
                    .expect("release overflow")
                    .at();
                if release >= w_start && release <= w_end {
                    let x = scale_x(release.as_rational().to_f64());
                    let _ = writeln!(
                        svg,
                        "<path class=\"marker marker-release\" d=\"M{} {} L{} {} L{} {} Z\" fill=\"#222222\"/>",
                        px(x),
                        px(y_top),
                        px(x - 3.5),
                        px(y_top - 6.0),
                        px(x + 3.5),
                        px(y_top - 6.0)
                    );
                }
                let deadline = task
                    .period
                    .checked_mul_int(k + 1)
                    .expect("deadline overflow")
                    .at();
                if deadline >= w_start && deadline <= w_end {
                    let x = scale_x(deadline.as_rational().to_f64());
                    let _ = writeln!(
                        svg,
                        "<path class=\"marker marker-deadline\" d=\"M{} {} L{} {} L{} {} Z\" fill=\"#aa2222\"/>",
                        px(x),
                        px(y_bot),
                        px(x - 3.5),
                        px(y_bot + 6.0),
                        px(x + 3.5),
                        px(y_bot + 6.0)
                    );
                }
            }
        }
    }

    let axis_y = margin_top + rows as f64 * row_h + 10.0;
    let _ = writeln!(
        svg,
        "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>",
        px(margin_left),
        px(axis_y),
        px(margin_left + plot_w),
        px(axis_y)
    );
    let ticks = 5u32;
    for t in 0..=ticks {
        let frac = t as f64 / ticks as f64;
        let x = margin_left + frac * plot_w;
        let value = Rational::from_f64_snapped(t0 + frac * span, 1_000_000_000)
            .unwrap_or(Rational::ZERO);
        let _ = writeln!(
            svg,
            "<line class=\"tick\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>",
            px(x),
            px(axis_y),
            px(x),
            px(axis_y + 4.0)
        );
        let _ = writeln!(
            svg,
            "<text class=\"ticklabel\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
            px(x),
            px(axis_y + 16.0),
            ms_label(&value)
        );
    }
    let _ = writeln!(
        svg,
        "<text class=\"axislabel\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">time (ms)</text>",
        px(margin_left + plot_w / 2.0),
        px(axis_y + 30.0)
    );

    svg.push_str("</svg>\n");
    svg
}

// ── Tables ──

fn busy_cell(result: &SimResult) -> String {
    match result.verdict {
        Verdict::Divergent => "Fail".to_string(),
        Verdict::Sustainable => format!("{:.3}", result.busy_ratio.to_f64()),
    }
}

/// Markdown matrix of busy ratios: one row per setup, one column per
/// strategy, `Fail` for divergent runs.
pub fn summary_md(results: &[(&str, &str, &SimResult)]) -> String {
    let mut setups: Vec<&str> = Vec::new();
    let mut strategies: Vec<&str> = Vec::new();
    for &(setup, strategy, _) in results {
        if !setups.contains(&setup) {
            setups.push(setup);
        }
        if !strategies.contains(&strategy) {
            strategies.push(strategy);
        }
    }

    let mut out = String::from("| setup |");
    for s in &strategies {
        let _ = write!(out, " {s} |");
    }
    out.push('\n');
    out.push_str("| --- |");
    for _ in &strategies {
        out.push_str(" --- |");
    }
    out.push('\n');

    for setup in &setups {
        let _ = write!(out, "| {setup} |");
        for strategy in &strategies {
            let cell = results
                .iter()
                .find(|(se, st, _)| se == setup && st == strategy)
                .map(|(_, _, r)| busy_cell(r))
                .unwrap_or_else(|| "-".to_string());
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
    out
}

/// Markdown table of one sweep: busy ratio and baseline-normalized value
/// per point, in grid order.
pub fn sweep_md(report: &SweepReport) -> String {
    let mut out = String::from("| point | busy ratio | normalized |\n| --- | --- | --- |\n");
    for point in &report.points {
        let normalized = report
            .normalized_of(&point.label)
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            point.label,
            busy_cell(&point.result),
            normalized
        );
    }
    out
}

/// CSV form of a sweep with exact rational values (`Fail` for divergent
/// points), for downstream tooling.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("point,busy_ratio,normalized\n");
    for point in &report.points {
        let busy = match point.result.verdict {
            Verdict::Divergent => "Fail".to_string(),
            Verdict::Sustainable => point.result.busy_ratio.to_string(),
        };
        let normalized = match report.normalized_of(&point.label) {
            Some(v) => match v.as_ratio() {
                Some(r) => r.to_string(),
                None => "Fail".to_string(),
            },
            None => String::new(),
        };
        let _ = writeln!(out, "{},{busy},{normalized}", point.label);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;
    use crate::time::{parse_duration, TimeSpan};
    use crate::workload::{StrategyConfig, TaskSpec, WorkloadConfig};

    fn span(text: &str) -> TimeSpan {
        parse_duration(text).unwrap()
    }

    fn two_model_workload(strategy: StrategyConfig) -> WorkloadConfig {
        WorkloadConfig {
            name: "pair".to_string(),
            tasks: vec![
                TaskSpec {
                    name: "cam".to_string(),
                    model_id: "model-cam".to_string(),
                    frequency_hz: Rational::integer(20),
                    overlay_exec: span("12ms"),
                    customized_exec: span("10ms"),
                },
                TaskSpec {
                    name: "lidar".to_string(),
                    model_id: "model-lidar".to_string(),
                    frequency_hz: Rational::integer(15),
                    overlay_exec: span("10ms"),
                    customized_exec: span("50/7ms"),
                },
            ],
            strategy,
            horizon_hyperperiods: 3,
            warmup_hyperperiods: 1,
        }
    }

    fn empty_trace() -> Trace {
        Trace {
            workload_name: "empty".to_string(),
            strategy_label: "overlay".to_string(),
            tasks: vec![],
            hyperperiod: span("100ms"),
            horizon: span("100ms").at(),
            horizon_hyperperiods: 1,
            warmup_hyperperiods: 0,
            segments: vec![],
        }
    }

    #[test]
    fn empty_trace_serializes_to_header_only() {
        assert_eq!(trace_csv(&empty_trace()), format!("{TRACE_CSV_HEADER}\n"));
        assert_eq!(parse_trace_csv(&trace_csv(&empty_trace())).unwrap(), vec![]);
    }

    #[test]
    fn csv_round_trip_is_exact_including_fractions() {
        let result =
            simulate(&two_model_workload(StrategyConfig::customized(span("1ms")))).unwrap();
        let csv = trace_csv(&result.trace);
        assert!(csv.contains("1/15") || csv.contains('/'));
        let parsed = parse_trace_csv(&csv).unwrap();
        assert_eq!(parsed, csv_segments(&result.trace));
        assert!(!parsed.is_empty());
    }

    #[test]
    fn csv_rejects_malformed_lines() {
        let bad_header = "who,what\nexecute,0,1,t,0,m\n";
        assert!(matches!(
            parse_trace_csv(bad_header),
            Err(Error::MalformedCsv { line: 1, .. })
        ));

        let bad_kind = format!("{TRACE_CSV_HEADER}\nnap,0,1,t,0,m\n");
        assert!(matches!(
            parse_trace_csv(&bad_kind),
            Err(Error::MalformedCsv { line: 2, .. })
        ));

        let bad_number = format!("{TRACE_CSV_HEADER}\nexecute,zero,1,t,0,m\n");
        assert!(matches!(
            parse_trace_csv(&bad_number),
            Err(Error::MalformedCsv { line: 2, .. })
        ));

        let backwards = format!("{TRACE_CSV_HEADER}\nexecute,2,1,t,0,m\n");
        assert!(matches!(
            parse_trace_csv(&backwards),
            Err(Error::MalformedCsv { line: 2, .. })
        ));

        let reload_with_task = format!("{TRACE_CSV_HEADER}\nreload,0,1,t,,m\n");
        assert!(matches!(
            parse_trace_csv(&reload_with_task),
            Err(Error::MalformedCsv { line: 2, .. })
        ));
    }

    #[test]
    fn gantt_counts_one_shape_per_non_idle_segment() {
        let result =
            simulate(&two_model_workload(StrategyConfig::customized(span("2ms")))).unwrap();
        let svg = gantt_svg(&result.trace, &GanttStyle::default());
        let non_idle = result
            .trace
            .segments
            .iter()
            .filter(|s| s.kind != SegmentKind::Idle)
            .count();
        let reloads = result
            .trace
            .segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Reload)
            .count();
        assert_eq!(svg.matches("class=\"seg ").count(), non_idle);
        assert_eq!(svg.matches("class=\"seg seg-reload\"").count(), reloads);
        assert!(svg.contains("id=\"reload-hatch\""));
        assert!(svg.contains("marker-release"));
        assert!(svg.contains("marker-deadline"));
    }

    #[test]
    fn gantt_handles_an_empty_trace() {
        let svg = gantt_svg(&empty_trace(), &GanttStyle::default());
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("class=\"seg ").count(), 0);
    }

    #[test]
    fn gantt_is_deterministic() {
        let result =
            simulate(&two_model_workload(StrategyConfig::customized(span("2ms")))).unwrap();
        let a = gantt_svg(&result.trace, &GanttStyle::default());
        let b = gantt_svg(&result.trace, &GanttStyle::default());
        assert_eq!(a, b);
    }

    #[test]
    fn summary_table_renders_ratios_and_fail() {
        let ok = simulate(&two_model_workload(StrategyConfig::overlay())).unwrap();
        let diverges = simulate(&two_model_workload(StrategyConfig::customized(span("30ms"))))
            .unwrap();
        assert_eq!(diverges.verdict, Verdict::Divergent);
        let table = summary_md(&[
            ("pair", "overlay", &ok),
            ("pair", "customized", &diverges),
        ]);
        assert!(table.starts_with("| setup | overlay | customized |"));
        assert!(table.contains("| pair | 0.390 | Fail |"));
    }

    #[test]
    fn exact_one_renders_with_three_decimals() {
        use crate::sweep::NormalizedValue;
        assert_eq!(NormalizedValue::Ratio(Rational::ONE).to_string(), "1.000");
    }
}
