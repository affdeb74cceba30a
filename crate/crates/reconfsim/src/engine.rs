//! Non-preemptive earliest-deadline-first execution on a single
//! reconfigurable accelerator.
//!
//! The engine releases every instance of every task inside the horizon,
//! dispatches by earliest absolute deadline, charges a bitstream reload when
//! the customized strategy switches models, and emits a gap-free trace.
//! Everything is exact rational time; runs are fully deterministic.

use crate::error::{Error, Result};
use crate::metrics::{self, SimResult};
use crate::time::{hyperperiod, TimeSpan, TimeStamp};
use crate::workload::{effective_exec, period_of, StrategyConfig, WorkloadConfig};

/// One released instance awaiting dispatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub task_index: usize,
    pub instance: u64,
    pub release: TimeStamp,
    pub deadline: TimeStamp,
    pub exec: TimeSpan,
}

/// Identifies the instance an `Execute` segment serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobRef {
    pub task_index: usize,
    pub instance: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Idle,
    Reload,
    Execute,
}

/// A half-open slice `[start, end)` of accelerator time. Segments of a trace
/// are contiguous and cover at least `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSegment {
    pub kind: SegmentKind,
    pub start: TimeStamp,
    pub end: TimeStamp,
    /// Instance served; `Execute` segments only.
    pub job: Option<JobRef>,
    /// Model on the fabric; `Reload` and `Execute` segments only.
    pub model: Option<String>,
}

/// Per-task facts the trace consumers need without re-deriving the workload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTask {
    pub name: String,
    pub model_id: String,
    pub period: TimeSpan,
    /// Effective execution demand of one instance under the traced strategy.
    pub exec: TimeSpan,
    /// Number of instances released inside the horizon.
    pub instances: u64,
}

/// Complete schedule of one simulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub workload_name: String,
    pub strategy_label: String,
    pub tasks: Vec<TraceTask>,
    pub hyperperiod: TimeSpan,
    pub horizon: TimeStamp,
    pub horizon_hyperperiods: u32,
    pub warmup_hyperperiods: u32,
    pub segments: Vec<TraceSegment>,
}

impl Trace {
    /// First instant after the warmup hyperperiods.
    pub fn warmup_end(&self) -> TimeStamp {
        self.hyperperiod
            .checked_mul_int(self.warmup_hyperperiods as u64)
            .expect("warmup end overflow")
            .at()
    }

    /// End of the last segment; at least the horizon.
    pub fn end(&self) -> TimeStamp {
        self.segments
            .last()
            .map(|s| s.end)
            .unwrap_or(self.horizon)
            .max(self.horizon)
    }

    pub fn release_of(&self, job: JobRef) -> TimeStamp {
        self.tasks[job.task_index]
            .period
            .checked_mul_int(job.instance)
            .expect("release time overflow")
            .at()
    }

    pub fn deadline_of(&self, job: JobRef) -> TimeStamp {
        self.tasks[job.task_index]
            .period
            .checked_mul_int(job.instance + 1)
            .expect("deadline time overflow")
            .at()
    }
}

/// Fabric stall incurred by dispatching `next_model` while `previous_model`
/// (if any) is configured. Overlays never stall; the customized strategy
/// pays the full reload on every model change, including the cold start.
pub fn switch_cost(
    previous_model: Option<&str>,
    next_model: &str,
    strategy: &StrategyConfig,
) -> TimeSpan {
    match strategy {
        StrategyConfig::Overlay { .. } => TimeSpan::ZERO,
        StrategyConfig::Customized { reload_overhead } => match previous_model {
            Some(prev) if prev == next_model => TimeSpan::ZERO,
            _ => *reload_overhead,
        },
    }
}

/// Index of the job to run next: earliest deadline, ties broken by earlier
/// release, then lower task index, then lower instance index. `None` on an
/// empty pending set.
pub fn dispatch_next(pending: &[Job], now: TimeStamp) -> Option<usize> {
    debug_assert!(pending.iter().all(|j| j.release <= now));
    let _ = now;
    pending
        .iter()
        .enumerate()
        .min_by_key(|(_, j)| (j.deadline, j.release, j.task_index, j.instance))
        .map(|(i, _)| i)
}

struct ReleasePlan {
    period: TimeSpan,
    exec: TimeSpan,
    total: u64,
    next: u64,
}

impl ReleasePlan {
    fn next_release(&self) -> Result<Option<TimeStamp>> {
        if self.next >= self.total {
            return Ok(None);
        }
        Ok(Some(self.period.checked_mul_int(self.next)?.at()))
    }
}

/// Runs the workload to its horizon and evaluates metrics over the trace.
///
/// Jobs are never dropped: anything dispatched before the horizon runs to
/// completion even if that extends the trace past the horizon, while jobs
/// still queued when the horizon arrives simply remain unserved (and count
/// as deadline misses).
pub fn simulate(config: &WorkloadConfig) -> Result<SimResult> {
    config.validate()?;
    if config.tasks.is_empty() {
        return Err(Error::EmptyTaskSet);
    }

    let periods: Vec<TimeSpan> = config
        .tasks
        .iter()
        .map(|t| period_of(&t.frequency_hz))
        .collect::<Result<_>>()?;
    let hp = hyperperiod(&periods)?;
    let horizon = hp.checked_mul_int(config.horizon_hyperperiods as u64)?.at();

    let mut plans = Vec::with_capacity(config.tasks.len());
    for (task, period) in config.tasks.iter().zip(&periods) {
        let per_hyperperiod = hp
            .checked_ratio(*period)?
            .to_integer()
            .expect("hyperperiod is an exact multiple of every period");
        plans.push(ReleasePlan {
            period: *period,
            exec: effective_exec(task, &config.strategy)?,
            total: per_hyperperiod as u64 * config.horizon_hyperperiods as u64,
            next: 0,
        });
    }

    let mut segments: Vec<TraceSegment> = Vec::new();
    let mut pending: Vec<Job> = Vec::new();
    let mut now = TimeStamp::ZERO;
    let mut current_model: Option<usize> = None;

    loop {
        for (i, plan) in plans.iter_mut().enumerate() {
            while let Some(release) = plan.next_release()? {
                if release > now {
                    break;
                }
                pending.push(Job {
                    task_index: i,
                    instance: plan.next,
                    release,
                    deadline: plan.period.checked_mul_int(plan.next + 1)?.at(),
                    exec: plan.exec,
                });
                plan.next += 1;
            }
        }

        if pending.is_empty() {
            let mut next: Option<TimeStamp> = None;
            for plan in &plans {
                if let Some(r) = plan.next_release()? {
                    next = Some(next.map_or(r, |n| n.min(r)));
                }
            }
            match next {
                None => break,
                Some(release) => {
                    if release > now {
                        segments.push(TraceSegment {
                            kind: SegmentKind::Idle,
                            start: now,
                            end: release,
                            job: None,
                            model: None,
                        });
                    }
                    now = release;
                    continue;
                }
            }
        }

        if now >= horizon {
            break;
        }

        let idx = dispatch_next(&pending, now).expect("pending set is non-empty");
        let job = pending.remove(idx);
        let model = config.tasks[job.task_index].model_id.clone();
        let cost = switch_cost(
            current_model.map(|i| config.tasks[i].model_id.as_str()),
            &model,
            &config.strategy,
        );
        if !cost.is_zero() {
            let end = now.checked_add(cost)?;
            segments.push(TraceSegment {
                kind: SegmentKind::Reload,
                start: now,
                end,
                job: None,
                model: Some(model.clone()),
            });
            now = end;
        }
        let end = now.checked_add(job.exec)?;
        segments.push(TraceSegment {
            kind: SegmentKind::Execute,
            start: now,
            end,
            job: Some(JobRef {
                task_index: job.task_index,
                instance: job.instance,
            }),
            model: Some(model),
        });
        now = end;
        current_model = Some(job.task_index);
    }

    if now < horizon {
        segments.push(TraceSegment {
            kind: SegmentKind::Idle,
            start: now,
            end: horizon,
            job: None,
            model: None,
        });
    }

    let trace = Trace {
        workload_name: config.name.clone(),
        strategy_label: config.strategy.label(),
        tasks: config
            .tasks
            .iter()
            .zip(&plans)
            .map(|(t, plan)| TraceTask {
                name: t.name.clone(),
                model_id: t.model_id.clone(),
                period: plan.period,
                exec: plan.exec,
                instances: plan.total,
            })
            .collect(),
        hyperperiod: hp,
        horizon,
        horizon_hyperperiods: config.horizon_hyperperiods,
        warmup_hyperperiods: config.warmup_hyperperiods,
        segments,
    };

    metrics::evaluate(trace)
}
