//! Back-of-envelope planning for keeping up with an online edge stream:
//! how long one update takes at a given worker count, how many workers a
//! given arrival rate demands, and a completion-time simulation for replayed
//! streams.

/// Measured per-deployment constants: mean seconds to update one source,
/// mean seconds to merge one event's partial scores, and the workload shape.
#[derive(Clone, Copy, Debug)]
pub struct LatencyModel {
    pub t_s: f64,
    pub t_m: f64,
    pub n: usize,
    pub p: usize,
}

/// Expected seconds for one full update pass: the per-source work spread
/// over p workers, plus the merge.
pub fn estimate_update_latency(model: &LatencyModel) -> f64 {
    debug_assert!(model.t_s > 0.0 && model.t_m > 0.0 && model.n > 0 && model.p > 0);
    model.t_s * model.n as f64 / model.p as f64 + model.t_m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkerPlan {
    Workers(usize),
    /// No worker count can keep up: even infinitely many still pay
    /// one source plus one merge per event.
    Infeasible,
}

/// Smallest worker count that finishes an update strictly inside the mean
/// inter-arrival gap `t_i`.
pub fn plan_workers(model: &LatencyModel, t_i: f64) -> WorkerPlan {
    debug_assert!(t_i > 0.0);
    if t_i <= model.t_s + model.t_m {
        return WorkerPlan::Infeasible;
    }
    let demand = model.t_s * model.n as f64 / (t_i - model.t_m);
    WorkerPlan::Workers((demand.floor() as usize + 1).max(1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OnlineReport {
    pub events: usize,
    /// Events whose update finished after the next event had arrived.
    pub missed: usize,
    /// Mean lateness of the missed events, in seconds.
    pub mean_delay_seconds: f64,
}

impl OnlineReport {
    pub fn missed_fraction(&self) -> f64 {
        if self.events == 0 {
            0.0
        } else {
            self.missed as f64 / self.events as f64
        }
    }
}

/// Serial completion-time simulation. Event i starts once it has arrived
/// and its predecessor has finished; it is missed when it completes after
/// event i+1 arrives (the last event has nothing to be late for).
pub fn simulate_completions(arrivals: &[f64], processing: &[f64]) -> OnlineReport {
    assert_eq!(arrivals.len(), processing.len());
    let mut completion = f64::NEG_INFINITY;
    let mut missed = 0usize;
    let mut delay = 0.0;
    for i in 0..arrivals.len() {
        completion = completion.max(arrivals[i]) + processing[i];
        if i + 1 < arrivals.len() && completion > arrivals[i + 1] {
            missed += 1;
            delay += completion - arrivals[i + 1];
        }
    }
    OnlineReport {
        events: arrivals.len(),
        missed,
        mean_delay_seconds: if missed > 0 { delay / missed as f64 } else { 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latency_formula_hits_the_pinned_values() {
        let model = LatencyModel {
            t_s: 1e-3,
            t_m: 0.05,
            n: 10_000,
            p: 10,
        };
        assert_eq!(estimate_update_latency(&model), 1.05);

        // p = n degenerates to one source plus one merge.
        let saturated = LatencyModel { p: 10_000, ..model };
        assert_eq!(estimate_update_latency(&saturated), 1e-3 + 0.05);

        // Doubling p halves the spread term exactly.
        let doubled = LatencyModel { p: 20, ..model };
        let spread = estimate_update_latency(&model) - model.t_m;
        assert_eq!(estimate_update_latency(&doubled) - model.t_m, spread / 2.0);
    }

    #[test]
    fn latency_is_monotone_in_p_and_n() {
        let base = LatencyModel {
            t_s: 2e-3,
            t_m: 0.1,
            n: 5_000,
            p: 1,
        };
        let mut prev = estimate_update_latency(&base);
        for p in 2..=16 {
            let cur = estimate_update_latency(&LatencyModel { p, ..base });
            assert!(cur < prev, "p={p}");
            prev = cur;
        }
        let bigger = estimate_update_latency(&LatencyModel { n: 5_001, ..base });
        assert!(bigger > estimate_update_latency(&base));
    }

    #[test]
    fn worker_plan_matches_hand_arithmetic() {
        let model = LatencyModel {
            t_s: 1e-3,
            t_m: 0.05,
            n: 10_000,
            p: 1,
        };
        assert_eq!(plan_workers(&model, 0.5), WorkerPlan::Workers(23));
        assert_eq!(plan_workers(&model, 1e9), WorkerPlan::Workers(1));
        // Strict inequality: an exactly-integral demand still rounds up.
        let exact = LatencyModel {
            t_s: 1e-3,
            t_m: 0.0625,
            n: 10_000,
            p: 1,
        };
        // demand = 10 / (0.5625 - 0.0625) = 20
        assert_eq!(plan_workers(&exact, 0.5625), WorkerPlan::Workers(21));
    }

    #[test]
    fn infeasible_exactly_at_the_boundary() {
        let model = LatencyModel {
            t_s: 1e-3,
            t_m: 0.05,
            n: 10_000,
            p: 1,
        };
        assert_eq!(plan_workers(&model, 0.051), WorkerPlan::Infeasible);
        assert_eq!(
            plan_workers(&model, model.t_s + model.t_m),
            WorkerPlan::Infeasible
        );
        assert!(matches!(
            plan_workers(&model, model.t_s + model.t_m + 1e-6),
            WorkerPlan::Workers(_)
        ));
    }

    #[test]
    fn replay_simulation_counts_misses() {
        // Gaps dwarf processing: nothing is late.
        let calm = simulate_completions(&[0.0, 10.0, 20.0], &[0.1, 0.1, 0.1]);
        assert_eq!(calm.missed, 0);
        assert_eq!(calm.mean_delay_seconds, 0.0);

        // Zero gaps: everything backs up; only the last has nothing to miss.
        let burst = simulate_completions(&[5.0; 6], &[1.0; 6]);
        assert_eq!(burst.events, 6);
        assert_eq!(burst.missed, 5);
        // Completions run 6,7,8,9,10 against arrivals of 5.
        assert_eq!(burst.mean_delay_seconds, 3.0);

        // Queueing: event 0 finishes at 3, so event 1 starts late and
        // finishes at 4, two seconds after event 2's arrival at 2.
        let queued = simulate_completions(&[0.0, 1.0, 2.0], &[3.0, 1.0, 1.0]);
        assert_eq!(queued.missed, 2);
        assert_eq!(queued.mean_delay_seconds, 2.0);
    }
}
