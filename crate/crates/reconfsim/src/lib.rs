//! Deterministic discrete-event simulation of periodic DNN inference tasks
//! sharing one reconfigurable accelerator, comparing an overlay deployment
//! (one bitstream for every model, free switching) against per-model
//! customized bitstreams (faster execution, full reload on every model
//! switch).
//!
//! The scheduler is non-preemptive earliest-deadline-first over exact
//! rational time; metrics, analytic utilization bounds, sensitivity sweeps,
//! latency-table calibration, and report serialization build on the same
//! exact arithmetic so results are reproducible bit for bit.

pub mod analysis;
pub mod calibrate;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod rational;
pub mod report;
pub mod sweep;
pub mod time;
pub mod workload;

pub use analysis::{quick_verdict, utilization_bounds, QuickVerdict, UtilizationBounds};
pub use calibrate::{calibrate_workload, reference_problem, residuals_md, CalibrationProblem,
    CalibrationReport, HardConstraint, ModelSpec, Quantity, Relation, Residual, SetupMix,
    SoftTarget, SpeedupLink};
pub use engine::{dispatch_next, simulate, switch_cost, Job, JobRef, SegmentKind, Trace,
    TraceSegment, TraceTask};
pub use error::{Error, Result};
pub use metrics::{busy_ratio, classify_sustainability, response_stats, SimResult, TaskStats,
    Verdict};
pub use rational::Rational;
pub use report::{gantt_svg, parse_trace_csv, summary_md, sweep_csv, sweep_md, trace_csv,
    CsvSegment, GanttStyle};
pub use sweep::{normalize_report, sweep_overlay, sweep_reload, NormalizedValue, OverlayLevel,
    SweepAxis, SweepPoint, SweepReport};
pub use time::{format_duration, hyperperiod, parse_duration, TimeSpan, TimeStamp};
pub use workload::{builtin_setup, builtin_setup_with_table, effective_exec, latency_table_to_json,
    load_latency_table, load_workload, period_of, shipped_latency_table, workload_to_json,
    LatencyTable, ModelLatency, SetupId, StrategyConfig, TaskSpec, WorkloadConfig};
