//! Fits a per-model latency table to published busy-ratio targets.
//!
//! Absolute per-model latencies are treated as unknowns; what is known are
//! ratio targets (normalized busy ratios, utilization levels, speedup links
//! between overlay and customized execution). Calibration minimizes weighted
//! squared relative error against the soft targets subject to hard
//! constraints, using a deterministic multiplicative pattern search — plain
//! `+ − × ÷` arithmetic only, so results are bit-identical across platforms.
//! The winning point is snapped to a coarse grid (0.1 µs latencies, 0.01
//! speedups), equality constraints are then re-solved exactly in rational
//! arithmetic, and every hard constraint is re-verified exactly before the
//! table is returned.
//!
//! Quantities use the pessimistic analytic model (every job pays one
//! reload); the simulator can only do better, and acceptance tolerances
//! absorb the difference.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::time::TimeSpan;
use crate::workload::{LatencyTable, ModelLatency, SetupId};

/// Links a model's customized latency to its overlay latency:
/// `customized = overlay / (1 + s)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpeedupLink {
    Fixed(Rational),
    Free {
        bounds: (Rational, Rational),
        initial: Rational,
    },
}

/// One model whose overlay latency (and possibly speedup) is a decision
/// variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub model_id: String,
    pub overlay_bounds: (TimeSpan, TimeSpan),
    pub initial_overlay: TimeSpan,
    pub speedup: SpeedupLink,
}

/// A task mix evaluated by the calibration quantities: `(model_id, Hz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupMix {
    pub label: String,
    pub tasks: Vec<(String, Rational)>,
}

/// A scalar the targets constrain, expressed over one setup mix.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    /// Σ f·O / scale — overlay utilization at a throughput scale.
    OverlayUtil { setup: usize, scale: Rational },
    /// Σ f·(C + R) — customized utilization charging one reload per job.
    CustomizedUtil { setup: usize, reload: TimeSpan },
    /// CustomizedUtil(reload) / OverlayUtil(scale 1).
    ReloadNormalized { setup: usize, reload: TimeSpan },
    /// OverlayUtil(scale) / CustomizedUtil(baseline_reload).
    OverlayNormalized {
        setup: usize,
        scale: Rational,
        baseline_reload: TimeSpan,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Must hold exactly in the returned table.
#[derive(Debug, Clone, PartialEq)]
pub struct HardConstraint {
    pub name: String,
    pub quantity: Quantity,
    pub relation: Relation,
    pub bound: Rational,
}

/// Pulled toward but allowed to miss; the miss is reported as a residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftTarget {
    pub name: String,
    pub quantity: Quantity,
    pub target: Rational,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProblem {
    pub models: Vec<ModelSpec>,
    pub setups: Vec<SetupMix>,
    pub hard: Vec<HardConstraint>,
    pub soft: Vec<SoftTarget>,
    /// `(small, large)` pairs: the small model's overlay latency may not
    /// exceed the large model's.
    pub order: Vec<(String, String)>,
}

/// Achieved-vs-target report for one soft target.
#[derive(Debug, Clone)]
pub struct Residual {
    pub name: String,
    pub target: Rational,
    pub achieved: Rational,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub table: LatencyTable,
    pub residuals: Vec<Residual>,
    /// Weighted squared relative error of the soft targets at the final
    /// table.
    pub objective: f64,
    pub evaluations: usize,
}

// ── Quantity evaluation ──

fn relative_scale(x: &Rational) -> f64 {
    let v = x.to_f64().abs();
    if v > 0.1 {
        v
    } else {
        0.1
    }
}

struct Candidate<'a> {
    problem: &'a CalibrationProblem,
    /// Overlay latency per model, seconds.
    overlay: Vec<f64>,
    /// Customized latency per model, seconds.
    customized: Vec<f64>,
}

impl<'a> Candidate<'a> {
    fn model_index(&self, id: &str) -> usize {
        self.problem
            .models
            .iter()
            .position(|m| m.model_id == id)
            .expect("setup mixes reference declared models")
    }

    fn overlay_util(&self, setup: usize, scale: f64) -> f64 {
        let mut sum = 0.0;
        for (model, freq) in &self.problem.setups[setup].tasks {
            sum += freq.to_f64() * self.overlay[self.model_index(model)];
        }
        sum / scale
    }

    fn customized_util(&self, setup: usize, reload: f64) -> f64 {
        let mut sum = 0.0;
        for (model, freq) in &self.problem.setups[setup].tasks {
            sum += freq.to_f64() * (self.customized[self.model_index(model)] + reload);
        }
        sum
    }

    fn quantity(&self, q: &Quantity) -> f64 {
        match q {
            Quantity::OverlayUtil { setup, scale } => self.overlay_util(*setup, scale.to_f64()),
            Quantity::CustomizedUtil { setup, reload } => {
                self.customized_util(*setup, reload.as_secs_f64())
            }
            Quantity::ReloadNormalized { setup, reload } => {
                self.customized_util(*setup, reload.as_secs_f64()) / self.overlay_util(*setup, 1.0)
            }
            Quantity::OverlayNormalized {
                setup,
                scale,
                baseline_reload,
            } => {
                self.overlay_util(*setup, scale.to_f64())
                    / self.customized_util(*setup, baseline_reload.as_secs_f64())
            }
        }
    }
}

/// Exact per-model latencies, seconds, in `problem.models` order.
type ExactTable = Vec<(Rational, Rational)>;

fn exact_model_index(problem: &CalibrationProblem, id: &str) -> usize {
    problem
        .models
        .iter()
        .position(|m| m.model_id == id)
        .expect("setup mixes reference declared models")
}

fn exact_overlay_util(
    problem: &CalibrationProblem,
    table: &ExactTable,
    setup: usize,
    scale: &Rational,
) -> Result<Rational> {
    let mut sum = Rational::ZERO;
    for (model, freq) in &problem.setups[setup].tasks {
        let o = &table[exact_model_index(problem, model)].0;
        sum = sum.checked_add(&freq.checked_mul(o)?)?;
    }
    sum.checked_div(scale)
}

fn exact_customized_util(
    problem: &CalibrationProblem,
    table: &ExactTable,
    setup: usize,
    reload: TimeSpan,
) -> Result<Rational> {
    let mut sum = Rational::ZERO;
    for (model, freq) in &problem.setups[setup].tasks {
        let c = &table[exact_model_index(problem, model)].1;
        let per_job = c.checked_add(&reload.as_rational())?;
        sum = sum.checked_add(&freq.checked_mul(&per_job)?)?;
    }
    Ok(sum)
}

fn exact_quantity(
    problem: &CalibrationProblem,
    table: &ExactTable,
    q: &Quantity,
) -> Result<Rational> {
    match q {
        Quantity::OverlayUtil { setup, scale } => {
            exact_overlay_util(problem, table, *setup, scale)
        }
        Quantity::CustomizedUtil { setup, reload } => {
            exact_customized_util(problem, table, *setup, *reload)
        }
        Quantity::ReloadNormalized { setup, reload } => {
            exact_customized_util(problem, table, *setup, *reload)?
                .checked_div(&exact_overlay_util(problem, table, *setup, &Rational::ONE)?)
        }
        Quantity::OverlayNormalized {
            setup,
            scale,
            baseline_reload,
        } => exact_overlay_util(problem, table, *setup, scale)?
            .checked_div(&exact_customized_util(problem, table, *setup, *baseline_reload)?),
    }
}

// ── Feasibility pre-checks ──

fn quantity_name(problem: &CalibrationProblem, q: &Quantity) -> String {
    let setup = match q {
        Quantity::OverlayUtil { setup, .. }
        | Quantity::CustomizedUtil { setup, .. }
        | Quantity::ReloadNormalized { setup, .. }
        | Quantity::OverlayNormalized { setup, .. } => *setup,
    };
    format!("{:?} over setup {}", q, problem.setups[setup].label)
}

fn precheck(problem: &CalibrationProblem) -> Result<()> {
    for m in &problem.models {
        if m.overlay_bounds.0 > m.overlay_bounds.1 {
            return Err(Error::InfeasibleTargets(format!(
                "model '{}' has an empty overlay latency range",
                m.model_id
            )));
        }
        if let SpeedupLink::Free { bounds, .. } = &m.speedup {
            if bounds.0 > bounds.1 {
                return Err(Error::InfeasibleTargets(format!(
                    "model '{}' has an empty speedup range",
                    m.model_id
                )));
            }
        }
    }
    for (small, large) in &problem.order {
        let s = &problem.models[exact_model_index(problem, small)];
        let l = &problem.models[exact_model_index(problem, large)];
        if s.overlay_bounds.0 > l.overlay_bounds.1 {
            return Err(Error::InfeasibleTargets(format!(
                "'{small}' cannot stay at or below '{large}' within their latency ranges"
            )));
        }
    }
    for (i, a) in problem.hard.iter().enumerate() {
        for b in &problem.hard[i + 1..] {
            if a.quantity != b.quantity {
                continue;
            }
            let conflict = match (a.relation, b.relation) {
                (Relation::Eq, Relation::Eq) => a.bound != b.bound,
                (Relation::Le, Relation::Ge) => a.bound < b.bound,
                (Relation::Ge, Relation::Le) => b.bound < a.bound,
                (Relation::Eq, Relation::Le) => a.bound > b.bound,
                (Relation::Le, Relation::Eq) => b.bound > a.bound,
                (Relation::Eq, Relation::Ge) => a.bound < b.bound,
                (Relation::Ge, Relation::Eq) => b.bound < a.bound,
                _ => false,
            };
            if conflict {
                return Err(Error::InfeasibleTargets(format!(
                    "'{}' and '{}' cannot both hold for {}",
                    a.name,
                    b.name,
                    quantity_name(problem, &a.quantity)
                )));
            }
        }
    }
    Ok(())
}

// ── Pattern search ──

struct Layout {
    /// Bounds per variable: overlay latencies (seconds) then free speedups.
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Model index of each free-speedup variable.
    speedup_models: Vec<usize>,
}

fn layout(problem: &CalibrationProblem) -> (Vec<f64>, Layout) {
    let mut x = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut speedup_models = Vec::new();
    for m in &problem.models {
        x.push(m.initial_overlay.as_secs_f64());
        lower.push(m.overlay_bounds.0.as_secs_f64());
        upper.push(m.overlay_bounds.1.as_secs_f64());
    }
    for (i, m) in problem.models.iter().enumerate() {
        if let SpeedupLink::Free { bounds, initial } = &m.speedup {
            x.push(initial.to_f64());
            lower.push(bounds.0.to_f64());
            upper.push(bounds.1.to_f64());
            speedup_models.push(i);
        }
    }
    (
        x,
        Layout {
            lower,
            upper,
            speedup_models,
        },
    )
}

fn candidate<'a>(
    problem: &'a CalibrationProblem,
    layout: &Layout,
    x: &[f64],
) -> Candidate<'a> {
    let n = problem.models.len();
    let overlay: Vec<f64> = x[..n].to_vec();
    let mut speedup: Vec<f64> = problem
        .models
        .iter()
        .map(|m| match &m.speedup {
            SpeedupLink::Fixed(s) => s.to_f64(),
            SpeedupLink::Free { .. } => 0.0,
        })
        .collect();
    for (pos, &model) in layout.speedup_models.iter().enumerate() {
        speedup[model] = x[n + pos];
    }
    let customized = overlay
        .iter()
        .zip(&speedup)
        .map(|(o, s)| o / (1.0 + s))
        .collect();
    Candidate {
        problem,
        overlay,
        customized,
    }
}

fn objective(problem: &CalibrationProblem, cand: &Candidate<'_>, penalty: f64) -> f64 {
    let mut total = 0.0;
    for soft in &problem.soft {
        let achieved = cand.quantity(&soft.quantity);
        let err = (achieved - soft.target.to_f64()) / relative_scale(&soft.target);
        total += soft.weight.to_f64() * err * err;
    }
    for hard in &problem.hard {
        let achieved = cand.quantity(&hard.quantity);
        let bound = hard.bound.to_f64();
        let scale = relative_scale(&hard.bound);
        let violation = match hard.relation {
            Relation::Eq => (achieved - bound).abs() / scale,
            Relation::Le => ((achieved - bound) / scale).max(0.0),
            Relation::Ge => ((bound - achieved) / scale).max(0.0),
        };
        total += penalty * violation * violation;
    }
    for (small, large) in &problem.order {
        let s = cand.overlay[cand.model_index(small)];
        let l = cand.overlay[cand.model_index(large)];
        let violation = ((s - l) / if l > 1e-9 { l } else { 1e-9 }).max(0.0);
        total += penalty * violation * violation;
    }
    total
}

fn pattern_search(
    problem: &CalibrationProblem,
    layout: &Layout,
    mut x: Vec<f64>,
    evaluations: &mut usize,
) -> Vec<f64> {
    const STAGES: [f64; 3] = [1e3, 1e5, 1e7];
    const STAGE_EVAL_CAP: usize = 60_000;
    for &penalty in &STAGES {
        let mut delta = 0.25;
        let mut stage_evals = 0usize;
        let mut best_f = objective(problem, &candidate(problem, layout, &x), penalty);
        *evaluations += 1;
        while delta > 1e-7 && stage_evals < STAGE_EVAL_CAP {
            let mut improved = false;
            for i in 0..x.len() {
                let current = x[i];
                for trial_value in [current * (1.0 + delta), current / (1.0 + delta)] {
                    let clamped = trial_value.clamp(layout.lower[i], layout.upper[i]);
                    if clamped == x[i] {
                        continue;
                    }
                    let saved = x[i];
                    x[i] = clamped;
                    let f = objective(problem, &candidate(problem, layout, &x), penalty);
                    *evaluations += 1;
                    stage_evals += 1;
                    // Demand a minimal strict gain so coordinate zigzags
                    // terminate and the step size decays.
                    if f < best_f - 1e-12 * (1.0 + best_f) {
                        best_f = f;
                        improved = true;
                    } else {
                        x[i] = saved;
                    }
                }
            }
            if !improved {
                delta /= 2.0;
            }
        }
    }
    x
}

// ── Snapping and exact finishing ──

const LATENCY_GRID: i128 = 10_000_000; // 0.1 µs resolution in seconds
const SPEEDUP_GRID: i128 = 100;

fn snap(problem: &CalibrationProblem, layout: &Layout, x: &[f64]) -> Result<ExactTable> {
    let n = problem.models.len();
    let mut speedups: Vec<Rational> = problem
        .models
        .iter()
        .map(|m| match &m.speedup {
            SpeedupLink::Fixed(s) => Ok(*s),
            SpeedupLink::Free { .. } => Ok(Rational::ZERO),
        })
        .collect::<Result<_>>()?;
    for (pos, &model) in layout.speedup_models.iter().enumerate() {
        speedups[model] = Rational::from_f64_snapped(x[n + pos], SPEEDUP_GRID)?;
    }
    let mut overlays = Vec::with_capacity(n);
    for value in &x[..n] {
        overlays.push(Rational::from_f64_snapped(*value, LATENCY_GRID)?);
    }
    // Rounding can nudge a small model just past its large sibling when the
    // optimum sits on the ordering boundary; clamp the pair back together.
    for (small, large) in &problem.order {
        let li = exact_model_index(problem, large);
        let si = exact_model_index(problem, small);
        if overlays[si] > overlays[li] {
            overlays[si] = overlays[li];
        }
    }
    let mut table = Vec::with_capacity(n);
    for (overlay, s) in overlays.into_iter().zip(&speedups) {
        let one_plus = Rational::ONE.checked_add(s)?;
        let customized = overlay.checked_div(&one_plus)?;
        table.push((overlay, customized));
    }
    Ok(table)
}

/// Re-solves each `Eq` constraint on an `OverlayUtil` quantity exactly by
/// adjusting the last not-yet-adjusted participating model's overlay
/// latency. Later exact verification catches any bound this pushes out of
/// range.
fn solve_equalities(problem: &CalibrationProblem, table: &mut ExactTable) -> Result<()> {
    let mut adjusted = vec![false; problem.models.len()];
    for hard in &problem.hard {
        if hard.relation != Relation::Eq {
            continue;
        }
        let Quantity::OverlayUtil { setup, scale } = &hard.quantity else {
            continue;
        };
        let mix = &problem.setups[*setup].tasks;
        let mut chosen: Option<usize> = None;
        for (model, _) in mix {
            let idx = exact_model_index(problem, model);
            if !adjusted[idx] {
                chosen = Some(idx);
            }
        }
        let Some(target_idx) = chosen else {
            continue;
        };
        let mut rest = Rational::ZERO;
        let mut target_freq = Rational::ZERO;
        for (model, freq) in mix {
            let idx = exact_model_index(problem, model);
            if idx == target_idx {
                target_freq = target_freq.checked_add(freq)?;
            } else {
                rest = rest.checked_add(&freq.checked_mul(&table[idx].0)?)?;
            }
        }
        if target_freq.is_zero() {
            continue;
        }
        let total = hard.bound.checked_mul(scale)?;
        let overlay = total.checked_sub(&rest)?.checked_div(&target_freq)?;
        let speedup = match &problem.models[target_idx].speedup {
            SpeedupLink::Fixed(s) => *s,
            SpeedupLink::Free { .. } => {
                // Keep the snapped speedup: reconstruct it from the pair.
                let (o, c) = &table[target_idx];
                o.checked_div(c)?.checked_sub(&Rational::ONE)?
            }
        };
        let customized = overlay.checked_div(&Rational::ONE.checked_add(&speedup)?)?;
        table[target_idx] = (overlay, customized);
        adjusted[target_idx] = true;
    }
    Ok(())
}

fn verify_exact(problem: &CalibrationProblem, table: &ExactTable) -> Result<()> {
    for (i, m) in problem.models.iter().enumerate() {
        let o = &table[i].0;
        if o < &m.overlay_bounds.0.as_rational() || o > &m.overlay_bounds.1.as_rational() {
            return Err(Error::ConstraintUnsatisfied(format!(
                "overlay latency of '{}' within its range",
                m.model_id
            )));
        }
        if !table[i].1.is_positive() {
            return Err(Error::ConstraintUnsatisfied(format!(
                "customized latency of '{}' positive",
                m.model_id
            )));
        }
    }
    for (small, large) in &problem.order {
        let s = &table[exact_model_index(problem, small)].0;
        let l = &table[exact_model_index(problem, large)].0;
        if s > l {
            return Err(Error::ConstraintUnsatisfied(format!(
                "'{small}' at or below '{large}'"
            )));
        }
    }
    for hard in &problem.hard {
        let achieved = exact_quantity(problem, table, &hard.quantity)?;
        let ok = match hard.relation {
            Relation::Eq => achieved == hard.bound,
            Relation::Le => achieved <= hard.bound,
            Relation::Ge => achieved >= hard.bound,
        };
        if !ok {
            return Err(Error::ConstraintUnsatisfied(hard.name.clone()));
        }
    }
    Ok(())
}

fn to_latency_table(problem: &CalibrationProblem, table: &ExactTable) -> Result<LatencyTable> {
    let mut out = LatencyTable::default();
    for (m, (o, c)) in problem.models.iter().zip(table) {
        out.models.insert(
            m.model_id.clone(),
            ModelLatency {
                overlay_exec: TimeSpan::new(*o)?,
                customized_exec: TimeSpan::new(*c)?,
            },
        );
    }
    Ok(out)
}

/// Runs the full calibration: feasibility pre-checks, pattern search,
/// grid snapping, exact equality solving, exact verification, residual
/// reporting.
pub fn calibrate_workload(problem: &CalibrationProblem) -> Result<CalibrationReport> {
    precheck(problem)?;
    let (x0, lay) = layout(problem);
    let mut evaluations = 0usize;
    let x = pattern_search(problem, &lay, x0, &mut evaluations);
    let mut exact = snap(problem, &lay, &x)?;
    solve_equalities(problem, &mut exact)?;
    verify_exact(problem, &exact)?;

    let mut residuals = Vec::with_capacity(problem.soft.len());
    let mut objective = 0.0;
    for soft in &problem.soft {
        let achieved = exact_quantity(problem, &exact, &soft.quantity)?;
        let error = achieved.checked_sub(&soft.target)?.to_f64();
        let scaled = error / relative_scale(&soft.target);
        objective += soft.weight.to_f64() * scaled * scaled;
        residuals.push(Residual {
            name: soft.name.clone(),
            target: soft.target,
            achieved,
            error,
        });
    }

    Ok(CalibrationReport {
        table: to_latency_table(problem, &exact)?,
        residuals,
        objective,
        evaluations,
    })
}

/// Renders residuals as a markdown table.
pub fn residuals_md(report: &CalibrationReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("| target | wanted | achieved | error |\n| --- | --- | --- | --- |\n");
    for r in &report.residuals {
        let _ = writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:+.4} |",
            r.name,
            r.target.to_f64(),
            r.achieved.to_f64(),
            r.error
        );
    }
    out
}

// ── The committed target set behind the shipped table ──

fn ms(text: &str) -> TimeSpan {
    crate::time::parse_duration(text).expect("calibration duration literal")
}

fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den).expect("calibration ratio literal")
}

/// The target set the shipped latency table was calibrated against:
/// utilization and normalized-busy-ratio targets for the four builtin
/// setups, fixed large-model speedups, small speedups free but larger than
/// the large ones, and family ordering on overlay latencies.
pub fn reference_problem() -> CalibrationProblem {
    let free = |initial: Rational| SpeedupLink::Free {
        bounds: (rat(1, 2), rat(15, 1)),
        initial,
    };
    let model = |id: &str, initial: &str, speedup: SpeedupLink| ModelSpec {
        model_id: id.to_string(),
        overlay_bounds: (ms("0.05ms"), ms("80ms")),
        initial_overlay: ms(initial),
        speedup,
    };
    let models = vec![
        model("deit-s", "2ms", free(rat(4, 1))),
        model("deit-l", "6ms", SpeedupLink::Fixed(rat(1, 5))),
        model("mlp-mixer-s", "4ms", free(rat(12, 1))),
        model("mlp-mixer-l", "4ms", SpeedupLink::Fixed(rat(2, 5))),
        model("pointnet-s", "2ms", free(rat(109, 20))),
        model("pointnet-l", "34ms", SpeedupLink::Fixed(rat(1, 20))),
    ];

    let setups = SetupId::ALL
        .iter()
        .map(|s| SetupMix {
            label: s.name().to_string(),
            tasks: s
                .model_mix()
                .iter()
                .map(|(model, freq)| (model.to_string(), Rational::integer(*freq as i128)))
                .collect(),
        })
        .collect();

    let hard = |name: &str, quantity: Quantity, relation: Relation, bound: Rational| {
        HardConstraint {
            name: name.to_string(),
            quantity,
            relation,
            bound,
        }
    };
    let soft = |name: &str, quantity: Quantity, target: Rational, weight: i128| SoftTarget {
        name: name.to_string(),
        quantity,
        target,
        weight: Rational::integer(weight),
    };

    let overlay_util = |setup: usize| Quantity::OverlayUtil {
        setup,
        scale: Rational::ONE,
    };
    let overlay_scaled = |setup: usize, num: i128, den: i128| Quantity::OverlayNormalized {
        setup,
        scale: rat(num, den),
        baseline_reload: ms("0.2ms"),
    };
    let flip = |setup: usize, reload: &str| Quantity::ReloadNormalized {
        setup,
        reload: ms(reload),
    };

    let (a, b, c, d) = (0usize, 1usize, 2usize, 3usize);
    let hard_constraints = vec![
        hard("setup-a-overlay-busy", overlay_util(a), Relation::Eq, rat(13, 25)),
        hard(
            "setup-a-customized-overloads-at-20ms",
            Quantity::CustomizedUtil {
                setup: a,
                reload: ms("20ms"),
            },
            Relation::Ge,
            rat(5, 4),
        ),
        hard("setup-a-flip-by-1ms", flip(a, "1ms"), Relation::Le, rat(197, 200)),
        hard("setup-b-flip-by-1ms", flip(b, "1ms"), Relation::Le, rat(197, 200)),
        hard("setup-c-flip-by-1ms", flip(c, "1ms"), Relation::Le, rat(197, 200)),
        hard("setup-d-flip-by-1ms", flip(d, "1ms"), Relation::Le, rat(197, 200)),
        hard("setup-b-overlay-cap", overlay_util(b), Relation::Le, rat(29, 50)),
        hard("setup-c-overlay-cap", overlay_util(c), Relation::Le, rat(29, 50)),
        hard("setup-d-overlay-cap", overlay_util(d), Relation::Le, rat(29, 50)),
        hard(
            "setup-a-overlay2x-beats-customized",
            overlay_scaled(a, 2, 1),
            Relation::Le,
            rat(19, 20),
        ),
        hard(
            "setup-b-overlay2x-beats-customized",
            overlay_scaled(b, 2, 1),
            Relation::Le,
            rat(19, 20),
        ),
        hard(
            "setup-c-overlay2x-beats-customized",
            overlay_scaled(c, 2, 1),
            Relation::Le,
            rat(97, 100),
        ),
        hard(
            "setup-d-overlay1x-ratio-floor",
            overlay_scaled(d, 1, 1),
            Relation::Ge,
            rat(24, 5),
        ),
        hard(
            "setup-d-overlay1x-ratio-ceiling",
            overlay_scaled(d, 1, 1),
            Relation::Le,
            rat(32, 5),
        ),
        hard(
            "setup-d-overlay2x-still-above-customized",
            overlay_scaled(d, 2, 1),
            Relation::Ge,
            rat(11, 10),
        ),
    ];

    let soft_targets = vec![
        soft("setup-a-overlay-busy", overlay_util(a), rat(13, 25), 50),
        soft("setup-a-normalized-at-1ms", flip(a, "1ms"), rat(24, 25), 5),
        soft("setup-b-normalized-at-1ms", flip(b, "1ms"), rat(17, 20), 5),
        soft("setup-c-normalized-at-1ms", flip(c, "1ms"), rat(79, 100), 5),
        soft("setup-d-normalized-at-1ms", flip(d, "1ms"), rat(21, 50), 5),
        soft("setup-b-normalized-at-4ms", flip(b, "4ms"), rat(119, 100), 1),
        soft("setup-d-normalized-at-4ms", flip(d, "4ms"), rat(27, 20), 1),
        soft("setup-a-overlay2x-ratio", overlay_scaled(a, 2, 1), rat(37, 100), 1),
        soft("setup-b-overlay2x-ratio", overlay_scaled(b, 2, 1), rat(18, 25), 2),
        soft("setup-c-overlay2x-ratio", overlay_scaled(c, 2, 1), rat(22, 25), 2),
        soft("setup-d-overlay1x-ratio", overlay_scaled(d, 1, 1), rat(142, 25), 10),
    ];

    CalibrationProblem {
        models,
        setups,
        hard: hard_constraints,
        soft: soft_targets,
        order: vec![
            ("deit-s".to_string(), "deit-l".to_string()),
            ("mlp-mixer-s".to_string(), "mlp-mixer-l".to_string()),
            ("pointnet-s".to_string(), "pointnet-l".to_string()),
        ],
    }
}
