//! Shared fixtures for integration tests: a millisecond-tick reference
//! scheduler computed without the library's event engine or rational
//! arithmetic, a seeded random workload generator, helpers to project
//! library traces onto the same integer timeline, and a small XML
//! well-formedness checker.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use reconfsim::{
    Rational, SegmentKind, StrategyConfig, TaskSpec, TimeSpan, TimeStamp, Trace, WorkloadConfig,
};

// ── Reference scheduler ──

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefJob {
    pub task: usize,
    pub instance: u64,
    pub release: u64,
    pub deadline: u64,
    pub exec: u64,
}

/// What the tick scheduler decided for every job: `(dispatch, completion)`
/// in milliseconds, or `None` for jobs never started.
#[derive(Debug, Clone)]
pub struct RefSchedule {
    pub jobs: Vec<RefJob>,
    pub outcomes: Vec<Option<(u64, u64)>>,
}

/// Simulates non-preemptive earliest-deadline-first on a 1 ms grid with
/// plain integer arithmetic. A switch fee is charged whenever `customized`
/// is set and the dispatched task differs from the one loaded, including
/// the first dispatch.
pub fn reference_schedule(
    periods_ms: &[u64],
    execs_ms: &[u64],
    reload_ms: u64,
    customized: bool,
    horizon_ms: u64,
) -> RefSchedule {
    let mut jobs = Vec::new();
    for (task, (&period, &exec)) in periods_ms.iter().zip(execs_ms).enumerate() {
        let mut k = 0u64;
        while k * period < horizon_ms {
            jobs.push(RefJob {
                task,
                instance: k,
                release: k * period,
                deadline: (k + 1) * period,
                exec,
            });
            k += 1;
        }
    }

    let mut outcomes: Vec<Option<(u64, u64)>> = vec![None; jobs.len()];
    let mut started = vec![false; jobs.len()];
    let mut loaded: Option<usize> = None;
    let mut busy_until = 0u64;
    let mut t = 0u64;
    let limit = horizon_ms + reload_ms + execs_ms.iter().copied().max().unwrap_or(0) + 1;
    while t <= limit {
        if t >= busy_until && t < horizon_ms {
            let mut best: Option<usize> = None;
            for (ji, job) in jobs.iter().enumerate() {
                if started[ji] || job.release > t {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => {
                        let cur = &jobs[b];
                        (job.deadline, job.release, job.task, job.instance)
                            < (cur.deadline, cur.release, cur.task, cur.instance)
                    }
                };
                if better {
                    best = Some(ji);
                }
            }
            if let Some(ji) = best {
                let job = jobs[ji];
                let fee = if customized && loaded != Some(job.task) {
                    reload_ms
                } else {
                    0
                };
                started[ji] = true;
                outcomes[ji] = Some((t, t + fee + job.exec));
                busy_until = t + fee + job.exec;
                loaded = Some(job.task);
                continue;
            }
        }
        t += 1;
    }
    RefSchedule { jobs, outcomes }
}

// ── Random workload generation ──

pub struct GeneratedCase {
    pub config: WorkloadConfig,
    pub periods_ms: Vec<u64>,
    pub execs_ms: Vec<u64>,
    pub reload_ms: u64,
    pub customized: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Deterministically generates small periodic workloads: up to four tasks,
/// periods from {20, 25, 50, 100} ms, whole-millisecond execution times,
/// alternating overlay and customized strategies with reload overheads
/// cycling through {0, 1, 5, 20} ms. Every seventh case inflates one task
/// to push demand past capacity.
pub fn generate_cases(count: usize) -> Vec<GeneratedCase> {
    const PERIODS: [u64; 4] = [20, 25, 50, 100];
    const RELOADS: [u64; 4] = [0, 1, 5, 20];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_2C17);
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let n_tasks = rng.gen_range(1..=4usize);
        let mut periods_ms = Vec::with_capacity(n_tasks);
        let mut execs_ms = Vec::with_capacity(n_tasks);
        for _ in 0..n_tasks {
            let period = PERIODS[rng.gen_range(0..PERIODS.len())];
            let exec = rng.gen_range(1..=period / 4);
            periods_ms.push(period);
            execs_ms.push(exec);
        }
        if i % 7 == 3 {
            let victim = rng.gen_range(0..n_tasks);
            execs_ms[victim] = periods_ms[victim] * 2 / 3;
        }

        let customized = i % 2 == 1;
        let reload_ms = if customized { RELOADS[(i / 2) % 4] } else { 0 };
        let strategy = if customized {
            StrategyConfig::customized(span_ms(reload_ms))
        } else {
            StrategyConfig::overlay()
        };

        let hyperperiod_ms = periods_ms.iter().copied().fold(1, lcm);
        let tasks = periods_ms
            .iter()
            .zip(&execs_ms)
            .enumerate()
            .map(|(t, (&period, &exec))| TaskSpec {
                name: format!("t{t}"),
                model_id: format!("m{t}"),
                frequency_hz: Rational::new(1000, period as i128).unwrap(),
                overlay_exec: span_ms(exec),
                customized_exec: span_ms(exec),
            })
            .collect();
        let config = WorkloadConfig {
            name: format!("gen-{i:03}"),
            tasks,
            strategy,
            horizon_hyperperiods: (1000 / hyperperiod_ms) as u32,
            warmup_hyperperiods: 2,
        };
        cases.push(GeneratedCase {
            config,
            periods_ms,
            execs_ms,
            reload_ms,
            customized,
        });
    }
    cases
}

pub fn span_ms(ms: u64) -> TimeSpan {
    TimeSpan::new(Rational::new(ms as i128, 1000).unwrap()).unwrap()
}

// ── Trace projection ──

pub fn stamp_to_ms(stamp: TimeStamp) -> u64 {
    let scaled = stamp
        .as_rational()
        .checked_mul(&Rational::integer(1000))
        .unwrap();
    let value = scaled.to_integer().expect("event on the millisecond grid");
    u64::try_from(value).expect("non-negative instant")
}

/// `(task, instance) -> (dispatch, completion)` in milliseconds, where the
/// dispatch instant includes the reload charged for the job, if any.
pub fn trace_job_times(trace: &Trace) -> BTreeMap<(usize, u64), (u64, u64)> {
    let mut map = BTreeMap::new();
    for (i, seg) in trace.segments.iter().enumerate() {
        if seg.kind != SegmentKind::Execute {
            continue;
        }
        let job = seg.job.as_ref().expect("execute segments carry a job");
        let dispatch = match i.checked_sub(1).map(|p| &trace.segments[p]) {
            Some(prev) if prev.kind == SegmentKind::Reload && prev.end == seg.start => prev.start,
            _ => seg.start,
        };
        map.insert(
            (job.task_index, job.instance),
            (stamp_to_ms(dispatch), stamp_to_ms(seg.end)),
        );
    }
    map
}

// ── XML well-formedness ──

/// Checks tag balance, attribute quoting, and entity use; returns the
/// element count. Understands the subset of XML the renderer emits
/// (no CDATA, no DOCTYPE).
pub fn check_xml(text: &str) -> Result<usize, String> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut stack: Vec<String> = Vec::new();
    let mut elements = 0usize;
    let mut roots = 0usize;

    while pos < bytes.len() {
        if bytes[pos] == b'<' {
            if text[pos..].starts_with("<!--") {
                match text[pos..].find("-->") {
                    Some(end) => pos += end + 3,
                    None => return Err("unterminated comment".into()),
                }
                continue;
            }
            if text[pos..].starts_with("<?") {
                match text[pos..].find("?>") {
                    Some(end) => pos += end + 2,
                    None => return Err("unterminated processing instruction".into()),
                }
                continue;
            }
            let close = text[pos..]
                .find('>')
                .ok_or_else(|| format!("unterminated tag at byte {pos}"))?;
            let tag = &text[pos + 1..pos + close];
            pos += close + 1;
            if let Some(name) = tag.strip_prefix('/') {
                let name = name.trim();
                match stack.pop() {
                    Some(open) if open == name => {}
                    Some(open) => return Err(format!("</{name}> closes <{open}>")),
                    None => return Err(format!("</{name}> without an open element")),
                }
                continue;
            }
            let self_closing = tag.ends_with('/');
            let body = if self_closing {
                &tag[..tag.len() - 1]
            } else {
                tag
            };
            let mut parts = body.split_whitespace();
            let name = parts
                .next()
                .ok_or_else(|| "empty tag".to_string())?
                .to_string();
            check_attributes(body, &name)?;
            elements += 1;
            if stack.is_empty() {
                roots += 1;
                if roots > 1 {
                    return Err("more than one root element".into());
                }
            }
            if !self_closing {
                stack.push(name);
            }
        } else {
            let next = text[pos..].find('<').map(|i| pos + i).unwrap_or(bytes.len());
            check_text(&text[pos..next])?;
            pos = next;
        }
    }
    if let Some(open) = stack.pop() {
        return Err(format!("<{open}> never closed"));
    }
    if roots == 0 {
        return Err("no root element".into());
    }
    Ok(elements)
}

fn check_text(chunk: &str) -> Result<(), String> {
    let mut rest = chunk;
    while let Some(idx) = rest.find('&') {
        let tail = &rest[idx + 1..];
        let semicolon = tail
            .find(';')
            .ok_or_else(|| "bare '&' in text".to_string())?;
        let entity = &tail[..semicolon];
        let valid = matches!(entity, "amp" | "lt" | "gt" | "quot" | "apos")
            || (entity.starts_with('#') && entity.len() > 1);
        if !valid {
            return Err(format!("unknown entity '&{entity};'"));
        }
        rest = &tail[semicolon + 1..];
    }
    Ok(())
}

fn check_attributes(body: &str, name: &str) -> Result<(), String> {
    let after_name = body.trim_start().strip_prefix(name).unwrap_or(body);
    let mut rest = after_name.trim_start();
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| format!("attribute without value in <{name}>"))?;
        let attr = rest[..eq].trim();
        if attr.is_empty() || attr.contains(|c: char| c.is_whitespace()) {
            return Err(format!("malformed attribute name in <{name}>"));
        }
        let after_eq = rest[eq + 1..].trim_start();
        let quote = after_eq
            .chars()
            .next()
            .filter(|&c| c == '"' || c == '\'')
            .ok_or_else(|| format!("unquoted attribute value in <{name}>"))?;
        let value_end = after_eq[1..]
            .find(quote)
            .ok_or_else(|| format!("unterminated attribute value in <{name}>"))?;
        let value = &after_eq[1..1 + value_end];
        if value.contains('<') {
            return Err(format!("raw '<' inside attribute value in <{name}>"));
        }
        check_text(value).map_err(|e| format!("{e} (attribute in <{name}>)"))?;
        rest = after_eq[1 + value_end + 1..].trim_start();
    }
    Ok(())
}
