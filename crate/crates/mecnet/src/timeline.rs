//! Event-by-event walks of the service schedules, kept independent of the
//! closed-form cycle counts in `mecnet_core::metrics`.
//!
//! A window is `[0, lambda]`, opened by a request arrival. Stage boundaries
//! are produced by adding stage durations one at a time.

use mecnet_core::metrics::TimingParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Prepare,
    Route,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub stage: Stage,
    pub start: f64,
    pub end: f64,
}

/// Stages of alternating `first`/`second` blocks from time 0 until a stage
/// would start after `horizon`.
fn chain(first: (Stage, f64), second: (Stage, f64), horizon: f64) -> Vec<Event> {
    let mut out = Vec::new();
    let mut t = 0.0;
    for (stage, dur) in [first, second].into_iter().cycle() {
        if t > horizon {
            break;
        }
        out.push(Event {
            stage,
            start: t,
            end: t + dur,
        });
        t += dur;
    }
    out
}

/// MEC cycles credited within one window under the proactive schedule.
///
/// The resource chain runs prepare, route, prepare, ... from the window
/// start, a cycle is credited once its resource is ready inside the window
/// (its routing stage has begun), and nothing is credited when a routing
/// stage is longer than the window itself.
pub fn mec_window(t: &TimingParams) -> u64 {
    if t.trm > t.lambda {
        return 0;
    }
    chain((Stage::Prepare, t.tpm), (Stage::Route, t.trm), t.lambda)
        .iter()
        .filter(|e| e.stage == Stage::Route && e.start <= t.lambda)
        .count() as u64
}

/// CQR cycles completed within one window: preparation begins at the
/// arrival and a cycle counts when its routing stage ends inside the window.
pub fn cqr_window(t: &TimingParams) -> u64 {
    chain((Stage::Prepare, t.tpb), (Stage::Route, t.trb), t.lambda)
        .iter()
        .filter(|e| e.stage == Stage::Route && e.end <= t.lambda)
        .count() as u64
}

/// Long-run MEC cycles per window over `windows` consecutive windows.
///
/// Requests arrive every `lambda`; the resource is ready at the first
/// arrival. Routing starts as soon as a request is waiting and the resource
/// is ready; re-preparation starts right after routing. A cycle is
/// attributed to the window in which its routing ends.
pub fn mec_long_run(t: &TimingParams, windows: usize) -> f64 {
    let horizon = t.lambda * windows as f64;
    let mut ready = 0.0f64;
    let mut next_arrival = 0.0f64;
    let mut served_arrivals = 0usize;
    let mut completed = 0usize;
    loop {
        // a cycle serves every request that has arrived by its start
        let start = ready.max(next_arrival);
        let end = start + t.trm;
        if end > horizon {
            break;
        }
        completed += 1;
        while next_arrival <= start {
            served_arrivals += 1;
            next_arrival = t.lambda * served_arrivals as f64;
        }
        ready = end + t.tpm;
    }
    completed as f64 / windows as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(lambda: f64, tpm: f64, trm: f64, tpb: f64, trb: f64) -> TimingParams {
        TimingParams::new(lambda, tpm, trm, tpb, trb).unwrap()
    }

    #[test]
    fn worked_windows() {
        assert_eq!(mec_window(&t(10.0, 3.0, 1.0, 4.0, 1.0)), 2);
        assert_eq!(cqr_window(&t(10.0, 3.0, 1.0, 4.0, 1.0)), 2);
        assert_eq!(mec_window(&t(0.5, 3.0, 1.0, 4.0, 1.0)), 0);
        assert_eq!(cqr_window(&t(4.0, 3.0, 1.0, 4.0, 1.0)), 0);
        assert_eq!(cqr_window(&t(15.0, 3.0, 1.0, 4.0, 1.0)), 3);
    }

    #[test]
    fn long_run_rate() {
        // saturated: back-to-back cycles of length 4 against windows of 3
        let r = mec_long_run(&t(3.0, 3.0, 1.0, 1.0, 1.0), 10_000);
        assert!((r - 0.75).abs() < 1e-3);
        // idle between arrivals: one cycle per window
        let r = mec_long_run(&t(10.0, 1.0, 1.0, 1.0, 1.0), 10_000);
        assert!((r - 1.0).abs() < 1e-3);
    }
}
