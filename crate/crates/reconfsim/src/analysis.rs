//! Analytic utilization bounds and a conservative three-valued feasibility
//! verdict.
//!
//! The lower bound charges pure execution demand, the upper bound charges
//! one reload per job (the pessimistic case where every dispatch switches
//! models). Between those the verdict defers to the simulator, which stays
//! the ground truth.

use crate::error::Result;
use crate::rational::Rational;
use crate::time::TimeSpan;
use crate::workload::{effective_exec, StrategyConfig, WorkloadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuickVerdict {
    /// Execution demand alone exceeds capacity; divergence is certain.
    DefiniteOverload,
    /// Even the pessimistic bound plus worst-case blocking fits; every
    /// deadline is met.
    LikelyFeasible,
    /// The bounds straddle the interesting region; simulate.
    NeedsSimulation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilizationBounds {
    /// Σ f_i · C_i with C_i the effective execution time.
    pub lower: Rational,
    /// Σ f_i · (C_i + R); equals `lower` when the strategy never reloads.
    pub upper: Rational,
    /// max_i f_i · B where B is the largest single dispatch (C_j + R): the
    /// utilization headroom eaten by non-preemptive blocking.
    pub blocking_slack: Rational,
    pub verdict: QuickVerdict,
}

pub fn utilization_bounds(workload: &WorkloadConfig) -> Result<UtilizationBounds> {
    workload.validate()?;
    let reload = match &workload.strategy {
        StrategyConfig::Overlay { .. } => TimeSpan::ZERO,
        StrategyConfig::Customized { reload_overhead } => *reload_overhead,
    };

    let mut lower = Rational::ZERO;
    let mut freq_sum = Rational::ZERO;
    let mut max_freq = Rational::ZERO;
    let mut max_dispatch = Rational::ZERO;
    for task in &workload.tasks {
        let exec = effective_exec(task, &workload.strategy)?;
        lower = lower.checked_add(&task.frequency_hz.checked_mul(&exec.as_rational())?)?;
        freq_sum = freq_sum.checked_add(&task.frequency_hz)?;
        max_freq = max_freq.max(task.frequency_hz);
        let dispatch = exec.checked_add(reload)?.as_rational();
        max_dispatch = max_dispatch.max(dispatch);
    }

    let upper = lower.checked_add(&freq_sum.checked_mul(&reload.as_rational())?)?;
    let blocking_slack = max_freq.checked_mul(&max_dispatch)?;
    let mut bounds = UtilizationBounds {
        lower,
        upper,
        blocking_slack,
        verdict: QuickVerdict::NeedsSimulation,
    };
    bounds.verdict = quick_verdict(&bounds);
    Ok(bounds)
}

/// `lower > 1` proves overload; `upper + blocking_slack ≤ 1` proves every
/// deadline is met; anything else needs the simulator.
pub fn quick_verdict(bounds: &UtilizationBounds) -> QuickVerdict {
    if bounds.lower > Rational::ONE {
        return QuickVerdict::DefiniteOverload;
    }
    let headroom = Rational::ONE
        .checked_sub(&bounds.blocking_slack)
        .unwrap_or(Rational::ZERO);
    if bounds.upper <= headroom {
        QuickVerdict::LikelyFeasible
    } else {
        QuickVerdict::NeedsSimulation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_duration;
    use crate::workload::{builtin_setup, SetupId, TaskSpec};

    fn span(text: &str) -> TimeSpan {
        parse_duration(text).unwrap()
    }

    fn solo(freq: i128, exec: &str, strategy: StrategyConfig) -> WorkloadConfig {
        WorkloadConfig {
            name: "solo".to_string(),
            tasks: vec![TaskSpec {
                name: "t".to_string(),
                model_id: "m".to_string(),
                frequency_hz: Rational::integer(freq),
                overlay_exec: span(exec),
                customized_exec: span(exec),
            }],
            strategy,
            horizon_hyperperiods: 20,
            warmup_hyperperiods: 2,
        }
    }

    #[test]
    fn overlay_bounds_collapse_to_plain_utilization() {
        let w = builtin_setup(SetupId::A, StrategyConfig::overlay());
        let b = utilization_bounds(&w).unwrap();
        assert_eq!(b.lower, Rational::new(13, 25).unwrap());
        assert_eq!(b.upper, b.lower);
        assert_eq!(b.verdict, QuickVerdict::NeedsSimulation);
    }

    #[test]
    fn reload_widens_the_upper_bound() {
        let w = builtin_setup(SetupId::A, StrategyConfig::customized(span("20ms")));
        let b = utilization_bounds(&w).unwrap();
        assert_eq!(b.lower, Rational::new(485_483, 1_050_000).unwrap());
        assert_eq!(b.upper, Rational::new(1_430_483, 1_050_000).unwrap());
        assert!(b.lower <= b.upper);
        assert_eq!(b.verdict, QuickVerdict::NeedsSimulation);
    }

    #[test]
    fn demand_above_capacity_is_definite_overload() {
        let w = solo(10, "110ms", StrategyConfig::overlay());
        let b = utilization_bounds(&w).unwrap();
        assert_eq!(b.verdict, QuickVerdict::DefiniteOverload);
    }

    #[test]
    fn tiny_demand_is_likely_feasible() {
        let w = solo(1, "10ms", StrategyConfig::overlay());
        let b = utilization_bounds(&w).unwrap();
        assert_eq!(b.lower, Rational::new(1, 100).unwrap());
        assert_eq!(b.verdict, QuickVerdict::LikelyFeasible);
    }

    #[test]
    fn verdict_rules_match_the_raw_bounds() {
        let overload = UtilizationBounds {
            lower: Rational::new(105, 100).unwrap(),
            upper: Rational::new(19, 10).unwrap(),
            blocking_slack: Rational::new(1, 20).unwrap(),
            verdict: QuickVerdict::NeedsSimulation,
        };
        assert_eq!(quick_verdict(&overload), QuickVerdict::DefiniteOverload);

        let slack = UtilizationBounds {
            lower: Rational::new(1, 10).unwrap(),
            upper: Rational::new(15, 100).unwrap(),
            blocking_slack: Rational::new(1, 20).unwrap(),
            verdict: QuickVerdict::NeedsSimulation,
        };
        assert_eq!(quick_verdict(&slack), QuickVerdict::LikelyFeasible);

        let middle = UtilizationBounds {
            lower: Rational::new(431, 1000).unwrap(),
            upper: Rational::new(1331, 1000).unwrap(),
            blocking_slack: Rational::new(1, 20).unwrap(),
            verdict: QuickVerdict::NeedsSimulation,
        };
        assert_eq!(quick_verdict(&middle), QuickVerdict::NeedsSimulation);
    }
}
