//! Sensitivity sweeps: busy ratio vs. reload overhead and vs. overlay
//! throughput, each normalized against a baseline run the way comparison
//! charts expect.
//!
//! Every grid point is an independent simulation; reports are assembled in
//! deterministic label order. Divergent points never produce a number —
//! they carry an explicit `Fail` marker instead.

use std::fmt;

use crate::engine::simulate;
use crate::error::{Error, Result};
use crate::metrics::{SimResult, Verdict};
use crate::rational::Rational;
use crate::time::{format_duration, TimeSpan};
use crate::workload::{StrategyConfig, WorkloadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    ReloadOverhead,
    OverlayScale,
}

/// Overlay variant evaluated by `sweep_overlay`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OverlayLevel {
    /// Throughput multiplier ≥ 1 applied to every overlay latency.
    Scale(Rational),
    /// Idealized overlay with customized-level latency per model.
    WideSpectrum,
}

impl OverlayLevel {
    fn strategy(&self) -> StrategyConfig {
        match self {
            OverlayLevel::Scale(scale) => StrategyConfig::Overlay {
                scale: *scale,
                wide_spectrum: false,
            },
            OverlayLevel::WideSpectrum => StrategyConfig::Overlay {
                scale: Rational::ONE,
                wide_spectrum: true,
            },
        }
    }
}

/// Busy ratio relative to the baseline, or a marker that the run diverged
/// and has no meaningful steady-state ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedValue {
    Ratio(Rational),
    Fail,
}

impl NormalizedValue {
    pub fn as_ratio(&self) -> Option<&Rational> {
        match self {
            NormalizedValue::Ratio(r) => Some(r),
            NormalizedValue::Fail => None,
        }
    }
}

impl fmt::Display for NormalizedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizedValue::Ratio(r) => write!(f, "{:.3}", r.to_f64()),
            NormalizedValue::Fail => write!(f, "Fail"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub label: String,
    pub result: SimResult,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub axis: SweepAxis,
    /// Baseline first, then grid points in argument order.
    pub points: Vec<SweepPoint>,
    pub baseline_key: String,
    /// One entry per point, in `points` order.
    pub normalized: Vec<(String, NormalizedValue)>,
}

impl SweepReport {
    pub fn normalized_of(&self, label: &str) -> Option<&NormalizedValue> {
        self.normalized
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }
}

/// Divides every point's busy ratio by the baseline point's. The baseline
/// must be present and Sustainable; Divergent points map to `Fail`.
pub fn normalize_report(
    points: &[SweepPoint],
    baseline_key: &str,
) -> Result<Vec<(String, NormalizedValue)>> {
    let baseline = points
        .iter()
        .find(|p| p.label == baseline_key)
        .ok_or_else(|| Error::InvalidField {
            path: "baseline".to_string(),
            message: format!("no sweep point labeled '{baseline_key}'"),
        })?;
    if baseline.result.verdict == Verdict::Divergent {
        return Err(Error::DivergentBaseline);
    }
    let base = baseline.result.busy_ratio;
    points
        .iter()
        .map(|p| {
            let value = match p.result.verdict {
                Verdict::Divergent => NormalizedValue::Fail,
                Verdict::Sustainable => {
                    NormalizedValue::Ratio(p.result.busy_ratio.checked_div(&base)?)
                }
            };
            Ok((p.label.clone(), value))
        })
        .collect()
}

fn reload_label(overhead: TimeSpan) -> String {
    format!("customized@{}", format_duration(overhead))
}

fn overlay_label(level: &OverlayLevel) -> String {
    level.strategy().label()
}

/// Simulates the customized strategy at each reload overhead plus one
/// overlay baseline, normalizing busy ratios against the overlay.
pub fn sweep_reload(base: &WorkloadConfig, overheads: &[TimeSpan]) -> Result<SweepReport> {
    if !matches!(base.strategy, StrategyConfig::Customized { .. }) {
        return Err(Error::InvalidField {
            path: "strategy.mode".to_string(),
            message: "reload sweep starts from a customized strategy".to_string(),
        });
    }

    let baseline_key = "overlay".to_string();
    let mut points = Vec::with_capacity(overheads.len() + 1);

    let mut overlay = base.clone();
    overlay.strategy = StrategyConfig::overlay();
    points.push(SweepPoint {
        label: baseline_key.clone(),
        result: simulate(&overlay)?,
    });

    for &overhead in overheads {
        let mut config = base.clone();
        config.strategy = StrategyConfig::customized(overhead);
        points.push(SweepPoint {
            label: reload_label(overhead),
            result: simulate(&config)?,
        });
    }

    let normalized = normalize_report(&points, &baseline_key)?;
    Ok(SweepReport {
        axis: SweepAxis::ReloadOverhead,
        points,
        baseline_key,
        normalized,
    })
}

/// Simulates each overlay variant against a customized baseline at the
/// given reload overhead, normalizing busy ratios against that baseline.
pub fn sweep_overlay(
    base: &WorkloadConfig,
    levels: &[OverlayLevel],
    baseline_reload: TimeSpan,
) -> Result<SweepReport> {
    let baseline_key = reload_label(baseline_reload);
    let mut points = Vec::with_capacity(levels.len() + 1);

    let mut customized = base.clone();
    customized.strategy = StrategyConfig::customized(baseline_reload);
    points.push(SweepPoint {
        label: baseline_key.clone(),
        result: simulate(&customized)?,
    });

    for level in levels {
        let mut config = base.clone();
        config.strategy = level.strategy();
        points.push(SweepPoint {
            label: overlay_label(level),
            result: simulate(&config)?,
        });
    }

    let normalized = normalize_report(&points, &baseline_key)?;
    Ok(SweepReport {
        axis: SweepAxis::OverlayScale,
        points,
        baseline_key,
        normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_duration;
    use crate::workload::TaskSpec;

    fn span(text: &str) -> TimeSpan {
        parse_duration(text).unwrap()
    }

    fn base() -> WorkloadConfig {
        WorkloadConfig {
            name: "pair".to_string(),
            tasks: vec![
                TaskSpec {
                    name: "a".to_string(),
                    model_id: "model-a".to_string(),
                    frequency_hz: Rational::integer(20),
                    overlay_exec: span("12ms"),
                    customized_exec: span("10ms"),
                },
                TaskSpec {
                    name: "b".to_string(),
                    model_id: "model-b".to_string(),
                    frequency_hz: Rational::integer(10),
                    overlay_exec: span("15ms"),
                    customized_exec: span("12ms"),
                },
            ],
            strategy: StrategyConfig::customized(span("1ms")),
            horizon_hyperperiods: 20,
            warmup_hyperperiods: 2,
        }
    }

    #[test]
    fn reload_sweep_marks_divergent_points_fail() {
        let report = sweep_reload(&base(), &[span("0ms"), span("5ms"), span("80ms")]).unwrap();
        assert_eq!(report.baseline_key, "overlay");
        assert_eq!(
            report.normalized_of("overlay"),
            Some(&NormalizedValue::Ratio(Rational::ONE))
        );
        // Zero-overhead customized runs strictly less work than the overlay.
        let zero = report.normalized_of("customized@0ms").unwrap();
        assert!(zero.as_ratio().unwrap() < &Rational::ONE);
        // 80 ms of reload around nearly every 50 ms-period job cannot keep up.
        assert_eq!(
            report.normalized_of("customized@80ms"),
            Some(&NormalizedValue::Fail)
        );
    }

    #[test]
    fn reload_sweep_ratio_grows_with_overhead() {
        let report = sweep_reload(&base(), &[span("0ms"), span("1ms"), span("5ms")]).unwrap();
        let r0 = report.normalized_of("customized@0ms").unwrap().as_ratio().unwrap();
        let r1 = report.normalized_of("customized@1ms").unwrap().as_ratio().unwrap();
        let r5 = report.normalized_of("customized@5ms").unwrap().as_ratio().unwrap();
        assert!(r0 < r1 && r1 < r5);
    }

    #[test]
    fn reload_sweep_requires_a_customized_base() {
        let mut overlay_base = base();
        overlay_base.strategy = StrategyConfig::overlay();
        assert!(matches!(
            sweep_reload(&overlay_base, &[span("1ms")]),
            Err(Error::InvalidField { .. })
        ));
    }

    #[test]
    fn overlay_sweep_normalizes_against_customized_baseline() {
        let levels = [
            OverlayLevel::Scale(Rational::ONE),
            OverlayLevel::Scale(Rational::integer(2)),
            OverlayLevel::WideSpectrum,
        ];
        let report = sweep_overlay(&base(), &levels, span("0.2ms")).unwrap();
        assert_eq!(report.baseline_key, "customized@0.2ms");
        assert_eq!(
            report.normalized_of("customized@0.2ms"),
            Some(&NormalizedValue::Ratio(Rational::ONE))
        );
        let full = report.normalized_of("overlay").unwrap().as_ratio().unwrap().clone();
        let half = report
            .normalized_of("overlay-2x")
            .unwrap()
            .as_ratio()
            .unwrap()
            .clone();
        assert!(half < full);
        // Parity latency with zero switching can never exceed the baseline.
        let wide = report.normalized_of("wide-spectrum").unwrap().as_ratio().unwrap();
        assert!(wide <= &Rational::ONE);
    }

    #[test]
    fn divergent_baseline_refuses_to_normalize() {
        let mut heavy = base();
        heavy.tasks[0].customized_exec = span("49ms");
        heavy.tasks[1].customized_exec = span("49ms");
        let err = sweep_overlay(&heavy, &[OverlayLevel::Scale(Rational::ONE)], span("20ms"));
        assert!(matches!(err, Err(Error::DivergentBaseline)));
    }

    #[test]
    fn grid_order_does_not_change_values() {
        let forward = sweep_reload(&base(), &[span("0ms"), span("5ms")]).unwrap();
        let backward = sweep_reload(&base(), &[span("5ms"), span("0ms")]).unwrap();
        assert_eq!(
            forward.normalized_of("customized@5ms"),
            backward.normalized_of("customized@5ms")
        );
        assert_eq!(
            forward.normalized_of("customized@0ms"),
            backward.normalized_of("customized@0ms")
        );
    }
}
