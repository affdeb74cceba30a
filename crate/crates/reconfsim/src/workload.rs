//! Workload model: periodic tasks, deployment strategies, JSON documents,
//! and the four builtin accelerator setups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::time::{format_duration, parse_duration, TimeSpan};

/// One periodic inference task. Instance `k` releases at `k / frequency_hz`
/// and must finish by the next release.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub name: String,
    pub model_id: String,
    pub frequency_hz: Rational,
    /// Execution time of one inference on the shared overlay.
    pub overlay_exec: TimeSpan,
    /// Execution time on the model's customized accelerator.
    pub customized_exec: TimeSpan,
}

/// How models are deployed on the accelerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyConfig {
    /// One overlay serves every model; switching between models is free.
    /// `scale >= 1` divides overlay execution times to model a faster
    /// overlay generation; `wide_spectrum` instead grants customized-level
    /// latency for every model while keeping switches free.
    Overlay { scale: Rational, wide_spectrum: bool },
    /// Per-model bitstreams: dispatching a different model than the one
    /// currently configured stalls for `reload_overhead` first.
    Customized { reload_overhead: TimeSpan },
}

impl StrategyConfig {
    pub fn overlay() -> StrategyConfig {
        StrategyConfig::Overlay {
            scale: Rational::ONE,
            wide_spectrum: false,
        }
    }

    pub fn customized(reload_overhead: TimeSpan) -> StrategyConfig {
        StrategyConfig::Customized { reload_overhead }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            StrategyConfig::Overlay { .. } => "overlay",
            StrategyConfig::Customized { .. } => "customized",
        }
    }

    /// Short human label used in report tables.
    pub fn label(&self) -> String {
        match self {
            StrategyConfig::Overlay {
                wide_spectrum: true,
                ..
            } => "wide-spectrum".to_string(),
            StrategyConfig::Overlay { scale, .. } if *scale == Rational::ONE => {
                "overlay".to_string()
            }
            StrategyConfig::Overlay { scale, .. } => format!("overlay-{scale}x"),
            StrategyConfig::Customized { .. } => "customized".to_string(),
        }
    }
}

/// A complete simulation input: tasks, strategy, and horizon bookkeeping in
/// whole hyperperiods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkloadConfig {
    pub name: String,
    pub tasks: Vec<TaskSpec>,
    pub strategy: StrategyConfig,
    pub horizon_hyperperiods: u32,
    pub warmup_hyperperiods: u32,
}

pub const DEFAULT_HORIZON_HYPERPERIODS: u32 = 20;
pub const DEFAULT_WARMUP_HYPERPERIODS: u32 = 2;

/// Period of a task with the given release frequency.
pub fn period_of(frequency_hz: &Rational) -> Result<TimeSpan> {
    if !frequency_hz.is_positive() {
        return Err(Error::NonPositivePeriod {
            context: format!("frequency {frequency_hz} Hz"),
        });
    }
    TimeSpan::new(frequency_hz.checked_recip()?)
}

/// Execution demand of one instance under the given strategy.
pub fn effective_exec(task: &TaskSpec, strategy: &StrategyConfig) -> Result<TimeSpan> {
    match strategy {
        StrategyConfig::Customized { .. } => Ok(task.customized_exec),
        StrategyConfig::Overlay {
            wide_spectrum: true,
            ..
        } => Ok(task.customized_exec),
        StrategyConfig::Overlay { scale, .. } => task.overlay_exec.checked_div_factor(scale),
    }
}

fn valid_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl WorkloadConfig {
    pub fn validate(&self) -> Result<()> {
        let mut names: Vec<&str> = Vec::new();
        let mut models: Vec<&str> = Vec::new();
        for (i, task) in self.tasks.iter().enumerate() {
            let path = |field: &str| format!("tasks[{i}].{field}");
            if !valid_identifier(&task.name) {
                return Err(Error::InvalidField {
                    path: path("name"),
                    message: format!(
                        "'{}' is not a valid identifier (ASCII letters, digits, '-', '_', '.')",
                        task.name
                    ),
                });
            }
            if !valid_identifier(&task.model_id) {
                return Err(Error::InvalidField {
                    path: path("model_id"),
                    message: format!("'{}' is not a valid identifier", task.model_id),
                });
            }
            if names.contains(&task.name.as_str()) {
                return Err(Error::DuplicateTaskName {
                    path: path("name"),
                    name: task.name.clone(),
                });
            }
            if models.contains(&task.model_id.as_str()) {
                return Err(Error::DuplicateModelId {
                    path: path("model_id"),
                    id: task.model_id.clone(),
                });
            }
            names.push(&task.name);
            models.push(&task.model_id);
            if !task.frequency_hz.is_positive() {
                return Err(Error::InvalidField {
                    path: path("frequency_hz"),
                    message: format!("frequency must be positive, got {}", task.frequency_hz),
                });
            }
            for (field, span) in [
                ("overlay_exec", task.overlay_exec),
                ("customized_exec", task.customized_exec),
            ] {
                if span.is_zero() {
                    return Err(Error::NonPositiveDuration {
                        path: path(field),
                        value: format_duration(span),
                    });
                }
            }
        }
        if let StrategyConfig::Overlay { scale, .. } = &self.strategy {
            if *scale < Rational::ONE {
                return Err(Error::InvalidField {
                    path: "strategy.overlay_scale".to_string(),
                    message: format!("scale must be >= 1, got {scale}"),
                });
            }
        }
        if self.horizon_hyperperiods == 0 {
            return Err(Error::InvalidField {
                path: "horizon_hyperperiods".to_string(),
                message: "must be at least 1".to_string(),
            });
        }
        if self.warmup_hyperperiods >= self.horizon_hyperperiods {
            return Err(Error::InvalidField {
                path: "warmup_hyperperiods".to_string(),
                message: format!(
                    "warmup ({}) must be smaller than the horizon ({})",
                    self.warmup_hyperperiods, self.horizon_hyperperiods
                ),
            });
        }
        Ok(())
    }
}

// ── JSON documents ──────────────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct WorkloadDoc {
    name: String,
    tasks: Vec<TaskDoc>,
    strategy: StrategyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon_hyperperiods: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    warmup_hyperperiods: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct TaskDoc {
    name: String,
    model_id: String,
    frequency_hz: serde_json::Value,
    overlay_exec: String,
    customized_exec: String,
}

#[derive(Serialize, Deserialize)]
struct StrategyDoc {
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reload_overhead: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlay_scale: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wide_spectrum: Option<bool>,
}

fn rational_from_value(value: &serde_json::Value, path: &str) -> Result<Rational> {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                Ok(Rational::integer(u as i128))
            } else if let Some(i) = n.as_i64() {
                Ok(Rational::integer(i as i128))
            } else {
                Err(Error::InvalidField {
                    path: path.to_string(),
                    message: format!(
                        "non-integer number {n}; write exact values as strings, e.g. \"20.5\" or \"1/3\""
                    ),
                })
            }
        }
        serde_json::Value::String(s) => {
            Rational::from_str(s).map_err(|e| Error::InvalidField {
                path: path.to_string(),
                message: e.to_string(),
            })
        }
        other => Err(Error::InvalidField {
            path: path.to_string(),
            message: format!("expected a number or string, got {other}"),
        }),
    }
}

fn rational_to_value(r: &Rational) -> serde_json::Value {
    match r.to_integer() {
        Some(i) if i >= 0 && i <= u64::MAX as i128 => {
            serde_json::Value::Number((i as u64).into())
        }
        _ => serde_json::Value::String(r.to_string()),
    }
}

fn duration_from_field(text: &str, path: &str) -> Result<TimeSpan> {
    parse_duration(text).map_err(|e| Error::InvalidField {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn strategy_from_doc(doc: &StrategyDoc) -> Result<StrategyConfig> {
    match doc.mode.as_str() {
        "overlay" => {
            if doc.reload_overhead.is_some() {
                return Err(Error::InvalidField {
                    path: "strategy.reload_overhead".to_string(),
                    message: "only meaningful in customized mode".to_string(),
                });
            }
            let scale = match &doc.overlay_scale {
                Some(v) => rational_from_value(v, "strategy.overlay_scale")?,
                None => Rational::ONE,
            };
            Ok(StrategyConfig::Overlay {
                scale,
                wide_spectrum: doc.wide_spectrum.unwrap_or(false),
            })
        }
        "customized" => {
            if doc.overlay_scale.is_some() || doc.wide_spectrum.is_some() {
                return Err(Error::InvalidField {
                    path: "strategy".to_string(),
                    message: "overlay_scale/wide_spectrum are only meaningful in overlay mode"
                        .to_string(),
                });
            }
            let text = doc.reload_overhead.as_ref().ok_or(Error::InvalidField {
                path: "strategy.reload_overhead".to_string(),
                message: "required in customized mode".to_string(),
            })?;
            Ok(StrategyConfig::Customized {
                reload_overhead: duration_from_field(text, "strategy.reload_overhead")?,
            })
        }
        other => Err(Error::UnknownStrategyMode(other.to_string())),
    }
}

fn strategy_to_doc(strategy: &StrategyConfig) -> StrategyDoc {
    match strategy {
        StrategyConfig::Overlay {
            scale,
            wide_spectrum,
        } => StrategyDoc {
            mode: "overlay".to_string(),
            reload_overhead: None,
            overlay_scale: (*scale != Rational::ONE).then(|| rational_to_value(scale)),
            wide_spectrum: (*wide_spectrum).then_some(true),
        },
        StrategyConfig::Customized { reload_overhead } => StrategyDoc {
            mode: "customized".to_string(),
            reload_overhead: Some(format_duration(*reload_overhead)),
            overlay_scale: None,
            wide_spectrum: None,
        },
    }
}

/// Parses and validates a workload JSON document.
pub fn load_workload(text: &str) -> Result<WorkloadConfig> {
    let doc: WorkloadDoc =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let mut tasks = Vec::with_capacity(doc.tasks.len());
    for (i, t) in doc.tasks.iter().enumerate() {
        tasks.push(TaskSpec {
            name: t.name.clone(),
            model_id: t.model_id.clone(),
            frequency_hz: rational_from_value(
                &t.frequency_hz,
                &format!("tasks[{i}].frequency_hz"),
            )?,
            overlay_exec: duration_from_field(
                &t.overlay_exec,
                &format!("tasks[{i}].overlay_exec"),
            )?,
            customized_exec: duration_from_field(
                &t.customized_exec,
                &format!("tasks[{i}].customized_exec"),
            )?,
        });
    }
    let config = WorkloadConfig {
        name: doc.name,
        tasks,
        strategy: strategy_from_doc(&doc.strategy)?,
        horizon_hyperperiods: doc
            .horizon_hyperperiods
            .unwrap_or(DEFAULT_HORIZON_HYPERPERIODS),
        warmup_hyperperiods: doc
            .warmup_hyperperiods
            .unwrap_or(DEFAULT_WARMUP_HYPERPERIODS),
    };
    config.validate()?;
    Ok(config)
}

/// Serializes a workload back to its JSON document form. `load_workload`
/// of the result reproduces the input exactly.
pub fn workload_to_json(config: &WorkloadConfig) -> String {
    let doc = WorkloadDoc {
        name: config.name.clone(),
        tasks: config
            .tasks
            .iter()
            .map(|t| TaskDoc {
                name: t.name.clone(),
                model_id: t.model_id.clone(),
                frequency_hz: rational_to_value(&t.frequency_hz),
                overlay_exec: format_duration(t.overlay_exec),
                customized_exec: format_duration(t.customized_exec),
            })
            .collect(),
        strategy: strategy_to_doc(&config.strategy),
        horizon_hyperperiods: Some(config.horizon_hyperperiods),
        warmup_hyperperiods: Some(config.warmup_hyperperiods),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("workload serialization");
    out.push('\n');
    out
}

// ── Latency tables and builtin setups ───────────────────────────────────────

/// Per-model execution latencies under both deployment styles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelLatency {
    pub overlay_exec: TimeSpan,
    pub customized_exec: TimeSpan,
}

/// Latency table keyed by model id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LatencyTable {
    pub models: BTreeMap<String, ModelLatency>,
}

impl LatencyTable {
    pub fn get(&self, model_id: &str) -> Result<&ModelLatency> {
        self.models
            .get(model_id)
            .ok_or_else(|| Error::MissingModelLatency(model_id.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct ModelLatencyDoc {
    overlay_exec: String,
    customized_exec: String,
}

/// Parses a latency table document: either a bare `{model: {overlay_exec,
/// customized_exec}}` map or a calibration output with a top-level `models`
/// key.
pub fn load_latency_table(text: &str) -> Result<LatencyTable> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let map_value = match value.get("models") {
        Some(m) => m.clone(),
        None => value,
    };
    let doc: BTreeMap<String, ModelLatencyDoc> = serde_json::from_value(map_value)
        .map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let mut models = BTreeMap::new();
    for (id, entry) in doc {
        if !valid_identifier(&id) {
            return Err(Error::InvalidField {
                path: format!("models.{id}"),
                message: "model id is not a valid identifier".to_string(),
            });
        }
        models.insert(
            id.clone(),
            ModelLatency {
                overlay_exec: duration_from_field(
                    &entry.overlay_exec,
                    &format!("models.{id}.overlay_exec"),
                )?,
                customized_exec: duration_from_field(
                    &entry.customized_exec,
                    &format!("models.{id}.customized_exec"),
                )?,
            },
        );
    }
    Ok(LatencyTable { models })
}

pub fn latency_table_to_json(table: &LatencyTable) -> String {
    let doc: BTreeMap<&str, ModelLatencyDoc> = table
        .models
        .iter()
        .map(|(id, m)| {
            (
                id.as_str(),
                ModelLatencyDoc {
                    overlay_exec: format_duration(m.overlay_exec),
                    customized_exec: format_duration(m.customized_exec),
                },
            )
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&doc).expect("latency table serialization");
    out.push('\n');
    out
}

/// The four benchmark setups: three tasks at 20/15/10 Hz mixing large and
/// small variants of DeiT, MLP-Mixer, and PointNet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetupId {
    A,
    B,
    C,
    D,
}

impl SetupId {
    pub const ALL: [SetupId; 4] = [SetupId::A, SetupId::B, SetupId::C, SetupId::D];

    pub fn name(&self) -> &'static str {
        match self {
            SetupId::A => "A",
            SetupId::B => "B",
            SetupId::C => "C",
            SetupId::D => "D",
        }
    }

    /// Model mix as `(model_id, frequency_hz)` in task order.
    pub fn model_mix(&self) -> [(&'static str, u32); 3] {
        match self {
            SetupId::A => [("deit-l", 20), ("mlp-mixer-l", 15), ("pointnet-l", 10)],
            SetupId::B => [("deit-s", 20), ("mlp-mixer-l", 15), ("pointnet-l", 10)],
            SetupId::C => [("deit-s", 20), ("mlp-mixer-l", 15), ("pointnet-s", 10)],
            SetupId::D => [("deit-s", 20), ("mlp-mixer-s", 15), ("pointnet-s", 10)],
        }
    }
}

impl FromStr for SetupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SetupId> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(SetupId::A),
            "B" => Ok(SetupId::B),
            "C" => Ok(SetupId::C),
            "D" => Ok(SetupId::D),
            other => Err(Error::UnknownSetup(other.to_string())),
        }
    }
}

impl fmt::Display for SetupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn span(text: &str) -> TimeSpan {
    parse_duration(text).expect("builtin duration literal")
}

/// The calibrated per-model latency table shipped with the binary. Values
/// are the committed output of `calibrate::calibrate_workload` on
/// [`crate::calibrate::reference_problem`]; the regression test in that
/// module pins them.
pub fn shipped_latency_table() -> LatencyTable {
    let entries = [
        ("deit-s", "3.2986ms", "16493/28500ms"),
        ("deit-l", "3.7955ms", "7591/2400ms"),
        ("mlp-mixer-s", "5.3905ms", "10781/32000ms"),
        ("mlp-mixer-l", "6.6742ms", "33371/7000ms"),
        ("pointnet-s", "0.05ms", "1/30ms"),
        ("pointnet-l", "34.3977ms", "114659/3500ms"),
    ];
    LatencyTable {
        models: entries
            .iter()
            .map(|(id, o, c)| {
                (
                    id.to_string(),
                    ModelLatency {
                        overlay_exec: span(o),
                        customized_exec: span(c),
                    },
                )
            })
            .collect(),
    }
}

/// Builds a builtin setup against an explicit latency table.
pub fn builtin_setup_with_table(
    setup: SetupId,
    strategy: StrategyConfig,
    table: &LatencyTable,
) -> Result<WorkloadConfig> {
    let mut tasks = Vec::with_capacity(3);
    for (model, freq) in setup.model_mix() {
        let latency = table.get(model)?;
        tasks.push(TaskSpec {
            name: model.to_string(),
            model_id: model.to_string(),
            frequency_hz: Rational::integer(freq as i128),
            overlay_exec: latency.overlay_exec,
            customized_exec: latency.customized_exec,
        });
    }
    let config = WorkloadConfig {
        name: format!("setup-{}", setup.name().to_ascii_lowercase()),
        tasks,
        strategy,
        horizon_hyperperiods: DEFAULT_HORIZON_HYPERPERIODS,
        warmup_hyperperiods: DEFAULT_WARMUP_HYPERPERIODS,
    };
    config.validate()?;
    Ok(config)
}

/// Builds a builtin setup with the shipped latency table.
pub fn builtin_setup(setup: SetupId, strategy: StrategyConfig) -> WorkloadConfig {
    builtin_setup_with_table(setup, strategy, &shipped_latency_table())
        .expect("shipped table covers all builtin models")
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID_DOC: &str = r#"{
        "name": "three-rates",
        "tasks": [
            {"name": "cam", "model_id": "m-cam", "frequency_hz": 20,
             "overlay_exec": "12ms", "customized_exec": "10ms"},
            {"name": "radar", "model_id": "m-radar", "frequency_hz": 15,
             "overlay_exec": "10ms", "customized_exec": "50/7ms"},
            {"name": "lidar", "model_id": "m-lidar", "frequency_hz": 10,
             "overlay_exec": "13ms", "customized_exec": "260/21ms"}
        ],
        "strategy": {"mode": "customized", "reload_overhead": "20ms"}
    }"#;

    #[test]
    fn loads_a_valid_document_with_exact_periods() {
        let w = load_workload(VALID_DOC).unwrap();
        assert_eq!(w.tasks.len(), 3);
        assert_eq!(
            period_of(&w.tasks[0].frequency_hz).unwrap(),
            parse_duration("50ms").unwrap()
        );
        assert_eq!(
            period_of(&w.tasks[1].frequency_hz).unwrap(),
            parse_duration("1/15s").unwrap()
        );
        assert_eq!(w.horizon_hyperperiods, DEFAULT_HORIZON_HYPERPERIODS);
        assert_eq!(w.warmup_hyperperiods, DEFAULT_WARMUP_HYPERPERIODS);
        assert!(matches!(w.strategy, StrategyConfig::Customized { .. }));
    }

    #[test]
    fn duplicate_task_names_are_named_in_the_error() {
        let doc = VALID_DOC.replace("\"radar\"", "\"cam\"");
        match load_workload(&doc) {
            Err(Error::DuplicateTaskName { path, name }) => {
                assert_eq!(name, "cam");
                assert_eq!(path, "tasks[1].name");
            }
            other => panic!("expected duplicate-name error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_model_ids_are_rejected() {
        let doc = VALID_DOC.replace("m-radar", "m-cam");
        assert!(matches!(
            load_workload(&doc),
            Err(Error::DuplicateModelId { .. })
        ));
    }

    #[test]
    fn negative_reload_overhead_is_rejected_with_its_path() {
        let doc = VALID_DOC.replace("\"20ms\"", "\"-1ms\"");
        match load_workload(&doc) {
            Err(Error::InvalidField { path, message }) => {
                assert_eq!(path, "strategy.reload_overhead");
                assert!(message.contains("negative"), "{message}");
            }
            other => panic!("expected field error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_mode_is_a_distinct_error() {
        let doc = VALID_DOC.replace("\"mode\": \"customized\"", "\"mode\": \"psycho\"");
        assert!(matches!(
            load_workload(&doc),
            Err(Error::UnknownStrategyMode(m)) if m == "psycho"
        ));
    }

    #[test]
    fn malformed_json_is_a_distinct_error() {
        assert!(matches!(
            load_workload("{ not json"),
            Err(Error::MalformedDocument(_))
        ));
    }

    #[test]
    fn customized_mode_requires_a_reload_overhead() {
        let doc = VALID_DOC.replace(", \"reload_overhead\": \"20ms\"", "");
        match load_workload(&doc) {
            Err(Error::InvalidField { path, .. }) => {
                assert_eq!(path, "strategy.reload_overhead")
            }
            other => panic!("expected field error, got {other:?}"),
        }
    }

    #[test]
    fn zero_exec_time_is_rejected() {
        let doc = VALID_DOC.replace("\"12ms\"", "\"0ms\"");
        assert!(matches!(
            load_workload(&doc),
            Err(Error::NonPositiveDuration { path, .. }) if path == "tasks[0].overlay_exec"
        ));
    }

    #[test]
    fn round_trips_through_json() {
        let w = load_workload(VALID_DOC).unwrap();
        assert_eq!(load_workload(&workload_to_json(&w)).unwrap(), w);

        let overlay = builtin_setup(
            SetupId::B,
            StrategyConfig::Overlay {
                scale: Rational::new(3, 2).unwrap(),
                wide_spectrum: false,
            },
        );
        assert_eq!(load_workload(&workload_to_json(&overlay)).unwrap(), overlay);
    }

    #[test]
    fn effective_exec_follows_the_strategy() {
        let task = TaskSpec {
            name: "t".into(),
            model_id: "m".into(),
            frequency_hz: Rational::integer(20),
            overlay_exec: span("12ms"),
            customized_exec: span("10ms"),
        };
        let reload = StrategyConfig::customized(span("20ms"));
        assert_eq!(effective_exec(&task, &reload).unwrap(), span("10ms"));

        let scaled = StrategyConfig::Overlay {
            scale: Rational::integer(2),
            wide_spectrum: false,
        };
        assert_eq!(effective_exec(&task, &scaled).unwrap(), span("6ms"));

        let wide = StrategyConfig::Overlay {
            scale: Rational::ONE,
            wide_spectrum: true,
        };
        assert_eq!(effective_exec(&task, &wide).unwrap(), span("10ms"));
    }

    #[test]
    fn period_of_rejects_nonpositive_frequencies() {
        assert!(period_of(&Rational::ZERO).is_err());
        assert!(period_of(&Rational::integer(-5)).is_err());
    }

    #[test]
    fn builtin_setups_match_the_benchmark_mix() {
        let a = builtin_setup(SetupId::A, StrategyConfig::overlay());
        let mix: Vec<(&str, i128)> = a
            .tasks
            .iter()
            .map(|t| (t.model_id.as_str(), t.frequency_hz.to_integer().unwrap()))
            .collect();
        assert_eq!(
            mix,
            vec![("deit-l", 20), ("mlp-mixer-l", 15), ("pointnet-l", 10)]
        );

        let d = builtin_setup(SetupId::D, StrategyConfig::overlay());
        assert!(d.tasks.iter().all(|t| t.model_id.ends_with("-s")));
        d.validate().unwrap();
    }

    #[test]
    fn latency_table_round_trips_and_reports_missing_models() {
        let table = shipped_latency_table();
        let json = latency_table_to_json(&table);
        assert_eq!(load_latency_table(&json).unwrap(), table);
        assert!(matches!(
            table.get("unknown-model"),
            Err(Error::MissingModelLatency(_))
        ));
    }

    #[test]
    fn horizon_must_exceed_warmup() {
        let mut w = load_workload(VALID_DOC).unwrap();
        w.warmup_hyperperiods = w.horizon_hyperperiods;
        assert!(matches!(w.validate(), Err(Error::InvalidField { .. })));
    }
}
