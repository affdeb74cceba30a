//! Metrics over a simulation trace: busy/exec/reload ratios inside a
//! measurement window, per-task response statistics, backlog sampled at
//! hyperperiod boundaries, and the Sustainable/Divergent verdict.
//!
//! All ratios are exact rationals; floating point enters only when a caller
//! formats them. Backlog counts remaining execution demand of released jobs
//! (in-flight work included pro rata, future reloads excluded since they
//! depend on the schedule still to come).

use std::fmt;

use crate::engine::{SegmentKind, Trace};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::time::{TimeSpan, TimeStamp};

/// Number of trailing backlog samples that must grow strictly before a run
/// is declared divergent.
pub const DIVERGENCE_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sustainable,
    Divergent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sustainable => write!(f, "Sustainable"),
            Verdict::Divergent => write!(f, "Divergent"),
        }
    }
}

/// Response-time statistics for one task. Response fields are absent when
/// the task completed no instances (never zero-filled).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskStats {
    pub name: String,
    pub released: u64,
    pub completed: u64,
    pub miss_count: u64,
    pub max_response: Option<TimeSpan>,
    pub mean_response: Option<TimeSpan>,
    /// Least-squares slope of response seconds vs. instance index over the
    /// post-warmup window; needs at least two completed post-warmup
    /// instances.
    pub trend_slope: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub trace: Trace,
    pub busy_ratio: Rational,
    pub exec_ratio: Rational,
    pub reload_ratio: Rational,
    pub per_task: Vec<TaskStats>,
    pub backlog_series: Vec<(TimeStamp, TimeSpan)>,
    pub verdict: Verdict,
}

/// Measurement window used when the caller does not supply one: warmup end
/// to horizon.
pub fn default_window(trace: &Trace) -> (TimeStamp, TimeStamp) {
    (trace.warmup_end(), trace.horizon)
}

fn check_window(trace: &Trace, window: (TimeStamp, TimeStamp)) -> Result<TimeSpan> {
    let (start, end) = window;
    if start >= end || end > trace.end() {
        return Err(Error::BadWindow {
            start: start.to_string(),
            end: end.to_string(),
        });
    }
    end.checked_since(start)
}

/// Total Execute and Reload time intersecting the window.
pub fn exec_reload_time(
    trace: &Trace,
    window: (TimeStamp, TimeStamp),
) -> Result<(TimeSpan, TimeSpan)> {
    check_window(trace, window)?;
    let (start, end) = window;
    let mut exec = TimeSpan::ZERO;
    let mut reload = TimeSpan::ZERO;
    for seg in &trace.segments {
        if seg.kind == SegmentKind::Idle {
            continue;
        }
        let lo = seg.start.max(start);
        let hi = seg.end.min(end);
        if lo >= hi {
            continue;
        }
        let part = hi.checked_since(lo)?;
        match seg.kind {
            SegmentKind::Execute => exec = exec.checked_add(part)?,
            SegmentKind::Reload => reload = reload.checked_add(part)?,
            SegmentKind::Idle => unreachable!(),
        }
    }
    Ok((exec, reload))
}

/// Fraction of the window spent executing or reloading.
pub fn busy_ratio(trace: &Trace, window: (TimeStamp, TimeStamp)) -> Result<Rational> {
    let span = check_window(trace, window)?;
    let (exec, reload) = exec_reload_time(trace, window)?;
    exec.checked_add(reload)?.checked_ratio(span)
}

/// Remaining execution demand of jobs released strictly before each
/// hyperperiod boundary, for boundaries 0..=horizon_hyperperiods.
pub fn backlog_series(trace: &Trace) -> Result<Vec<(TimeStamp, TimeSpan)>> {
    let boundaries = trace.horizon_hyperperiods as u64;
    let mut series = Vec::with_capacity(boundaries as usize + 1);
    for m in 0..=boundaries {
        let t = trace.hyperperiod.checked_mul_int(m)?.at();

        let mut demand = Rational::ZERO;
        for task in &trace.tasks {
            let per_hyperperiod = task.instances / boundaries.max(1);
            let released = (per_hyperperiod * m).min(task.instances);
            let total = task.exec.checked_mul_int(released)?;
            demand = demand.checked_add(&total.as_rational())?;
        }

        let mut served = Rational::ZERO;
        for seg in &trace.segments {
            if seg.kind != SegmentKind::Execute || seg.start >= t {
                continue;
            }
            let hi = seg.end.min(t);
            let part = hi.checked_since(seg.start)?;
            served = served.checked_add(&part.as_rational())?;
        }

        let backlog = demand.checked_sub(&served)?;
        series.push((t, TimeSpan::new(backlog)?));
    }
    Ok(series)
}

/// Applies the divergence rule to post-warmup boundary samples: Divergent
/// iff the last `window` backlogs grow strictly and the final backlog
/// exceeds the first sample. Needs at least `window + 1` samples.
pub fn classify_sustainability(
    post_warmup: &[(TimeStamp, TimeSpan)],
    window: usize,
) -> Result<Verdict> {
    let needed = window + 1;
    if post_warmup.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            got: post_warmup.len(),
        });
    }
    let tail = &post_warmup[post_warmup.len() - window..];
    let strictly_increasing = tail.windows(2).all(|w| w[0].1 < w[1].1);
    let first = post_warmup[0].1;
    let last = post_warmup[post_warmup.len() - 1].1;
    if strictly_increasing && last > first {
        Ok(Verdict::Divergent)
    } else {
        Ok(Verdict::Sustainable)
    }
}

/// Per-task response statistics over the whole trace; trend slopes use only
/// post-warmup instances.
pub fn response_stats(trace: &Trace) -> Result<Vec<TaskStats>> {
    let warmup_end = trace.warmup_end();
    let mut completions: Vec<Vec<(u64, TimeStamp)>> = vec![Vec::new(); trace.tasks.len()];
    for seg in &trace.segments {
        if seg.kind != SegmentKind::Execute {
            continue;
        }
        let job = seg.job.expect("execute segments carry a job");
        completions[job.task_index].push((job.instance, seg.end));
    }

    let mut stats = Vec::with_capacity(trace.tasks.len());
    for (i, task) in trace.tasks.iter().enumerate() {
        let served = &completions[i];
        let mut miss_count = task.instances - served.len() as u64;
        let mut responses: Vec<(u64, TimeSpan)> = Vec::with_capacity(served.len());
        for &(instance, completion) in served {
            let release = task.period.checked_mul_int(instance)?.at();
            let deadline = task.period.checked_mul_int(instance + 1)?.at();
            if completion > deadline {
                miss_count += 1;
            }
            responses.push((instance, completion.checked_since(release)?));
        }

        let max_response = responses.iter().map(|&(_, r)| r).max();
        let mean_response = if responses.is_empty() {
            None
        } else {
            let mut total = Rational::ZERO;
            for &(_, r) in &responses {
                total = total.checked_add(&r.as_rational())?;
            }
            let mean = total.checked_div(&Rational::integer(responses.len() as i128))?;
            Some(TimeSpan::new(mean)?)
        };

        let post_warmup: Vec<(u64, TimeSpan)> = responses
            .iter()
            .filter(|&&(instance, _)| {
                task.period
                    .checked_mul_int(instance)
                    .map(|r| r.at() >= warmup_end)
                    .unwrap_or(false)
            })
            .copied()
            .collect();
        let trend_slope = least_squares_slope(&post_warmup)?;

        stats.push(TaskStats {
            name: task.name.clone(),
            released: task.instances,
            completed: served.len() as u64,
            miss_count,
            max_response,
            mean_response,
            trend_slope,
        });
    }
    Ok(stats)
}

fn least_squares_slope(points: &[(u64, TimeSpan)]) -> Result<Option<Rational>> {
    if points.len() < 2 {
        return Ok(None);
    }
    let n = Rational::integer(points.len() as i128);
    let mut sum_x = Rational::ZERO;
    let mut sum_y = Rational::ZERO;
    let mut sum_xy = Rational::ZERO;
    let mut sum_xx = Rational::ZERO;
    for &(instance, response) in points {
        let x = Rational::integer(instance as i128);
        let y = response.as_rational();
        sum_x = sum_x.checked_add(&x)?;
        sum_y = sum_y.checked_add(&y)?;
        sum_xy = sum_xy.checked_add(&x.checked_mul(&y)?)?;
        sum_xx = sum_xx.checked_add(&x.checked_mul(&x)?)?;
    }
    let denom = n.checked_mul(&sum_xx)?.checked_sub(&sum_x.checked_mul(&sum_x)?)?;
    if denom.is_zero() {
        return Ok(None);
    }
    let numer = n.checked_mul(&sum_xy)?.checked_sub(&sum_x.checked_mul(&sum_y)?)?;
    Ok(Some(numer.checked_div(&denom)?))
}

/// Computes every metric over the default window and classifies the run.
/// Horizons too short for the windowed rule fall back to "empty final
/// backlog means sustainable".
pub fn evaluate(trace: Trace) -> Result<SimResult> {
    let window = default_window(&trace);
    let span = check_window(&trace, window)?;
    let (exec, reload) = exec_reload_time(&trace, window)?;
    let exec_ratio = exec.checked_ratio(span)?;
    let reload_ratio = reload.checked_ratio(span)?;
    let busy_ratio = exec_ratio.checked_add(&reload_ratio)?;
    debug_assert!(!busy_ratio.is_negative() && busy_ratio <= Rational::ONE);

    let per_task = response_stats(&trace)?;
    let backlog = backlog_series(&trace)?;
    let post_warmup = &backlog[trace.warmup_hyperperiods as usize..];
    let verdict = match classify_sustainability(post_warmup, DIVERGENCE_WINDOW) {
        Ok(v) => v,
        Err(Error::TooFewSamples { .. }) => {
            let final_backlog = backlog.last().expect("series is non-empty").1;
            if final_backlog.is_zero() {
                Verdict::Sustainable
            } else {
                Verdict::Divergent
            }
        }
        Err(e) => return Err(e),
    };

    Ok(SimResult {
        trace,
        busy_ratio,
        exec_ratio,
        reload_ratio,
        per_task,
        backlog_series: backlog,
        verdict,
    })
}
