//! Closed-form throughput and routing-qubit footprint.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Request spacing `lambda` and the preparation/routing times of each paradigm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingParams {
    pub lambda: f64,
    pub tpm: f64,
    pub trm: f64,
    pub tpb: f64,
    pub trb: f64,
}

impl TimingParams {
    /// All values finite and non-negative, `lambda` and both cycle times positive.
    pub fn new(lambda: f64, tpm: f64, trm: f64, tpb: f64, trb: f64) -> Result<Self> {
        let all = [lambda, tpm, trm, tpb, trb];
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidTiming("values must be finite and non-negative"));
        }
        if lambda <= 0.0 {
            return Err(Error::InvalidTiming("lambda must be positive"));
        }
        if tpm + trm <= 0.0 || tpb + trb <= 0.0 {
            return Err(Error::InvalidTiming("cycle time must be positive"));
        }
        Ok(TimingParams { lambda, tpm, trm, tpb, trb })
    }
}

#[inline]
fn floor_nonneg(x: f64) -> u64 {
    debug_assert!(x >= 0.0);
    x as u64
}

/// MEC cycles completed within one window of length `lambda`.
pub fn mec_cycles(t: &TimingParams) -> u64 {
    let cycle = t.tpm + t.trm;
    if t.lambda >= cycle {
        floor_nonneg((t.lambda - t.tpm) / cycle + 1.0)
    } else if t.lambda >= t.trm {
        1
    } else {
        0
    }
}

/// CQR cycles completed within one window of length `lambda`.
pub fn cqr_cycles(t: &TimingParams) -> u64 {
    let cycle = t.tpb + t.trb;
    if t.lambda >= cycle {
        floor_nonneg(t.lambda / cycle)
    } else {
        0
    }
}

/// Requests served per unit time under MEC, `r_bar` requests per cycle.
pub fn throughput_mec(t: &TimingParams, r_bar: f64) -> f64 {
    mec_cycles(t) as f64 * r_bar / t.lambda
}

/// Requests served per unit time under CQR, one request per cycle.
pub fn throughput_cqr(t: &TimingParams) -> f64 {
    cqr_cycles(t) as f64 / t.lambda
}

/// Aggregate routing qubits for CQR: two per request plus two per relay.
pub fn arqf_cqr(r_size: u64, chi: u64) -> u64 {
    2 * r_size + 2 * chi
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Whole network re-prepared for every cycle.
    Proactive,
    /// Only requested endpoints and the control layer are prepared.
    OnDemand,
}

/// Aggregate routing qubits for MEC over `rho` cycles.
pub fn arqf_mec(rho: u64, k_prime: u64, qnet_sizes: &[usize], r_size: u64, mode: Mode) -> u64 {
    match mode {
        Mode::Proactive => rho * (k_prime + qnet_sizes.iter().sum::<usize>() as u64),
        Mode::OnDemand => 2 * r_size + rho * k_prime,
    }
}

/// Per-instance summary of one MEC/CQR comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub r_size: u64,
    pub rho: u64,
    pub r_bar: Option<f64>,
    pub h_bar: Option<f64>,
    pub chi: u64,
    pub q_cqr: u64,
    pub q_mec_pro: u64,
    pub q_mec_ond: u64,
    pub n_m: Option<u64>,
    pub n_b: Option<u64>,
    pub fm: Option<f64>,
    pub fb: Option<f64>,
}

impl MetricsRecord {
    pub fn new(
        r_size: u64,
        rho: u64,
        k_prime: u64,
        qnet_sizes: &[usize],
        h_bar: Option<f64>,
        chi: u64,
        timing: Option<&TimingParams>,
    ) -> Self {
        let r_bar = (rho > 0).then(|| r_size as f64 / rho as f64);
        let (n_m, n_b, fm, fb) = match timing {
            Some(t) => (
                Some(mec_cycles(t)),
                Some(cqr_cycles(t)),
                Some(throughput_mec(t, r_bar.unwrap_or(0.0))),
                Some(throughput_cqr(t)),
            ),
            None => (None, None, None, None),
        };
        MetricsRecord {
            r_size,
            rho,
            r_bar,
            h_bar,
            chi,
            q_cqr: arqf_cqr(r_size, chi),
            q_mec_pro: arqf_mec(rho, k_prime, qnet_sizes, r_size, Mode::Proactive),
            q_mec_ond: arqf_mec(rho, k_prime, qnet_sizes, r_size, Mode::OnDemand),
            n_m,
            n_b,
            fm,
            fb,
        }
    }
}

/// Mean and sample standard deviation; `None` for an empty slice.
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some((mean, sqrt(var)))
}

/// Newton iteration; `core` has no float square root without `std`.
fn sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut r = if x > 1.0 { x } else { 1.0 };
    for _ in 0..100 {
        let next = 0.5 * (r + x / r);
        if (next - r).abs() <= f64::EPSILON * r {
            return next;
        }
        r = next;
    }
    r
}

/// Ordinary least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Collects a per-instance column, skipping absent values.
pub fn present(xs: impl IntoIterator<Item = Option<f64>>) -> Vec<f64> {
    xs.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(lambda: f64, tpm: f64, trm: f64, tpb: f64, trb: f64) -> TimingParams {
        TimingParams::new(lambda, tpm, trm, tpb, trb).unwrap()
    }

    #[test]
    fn mec_cases() {
        let a1 = t(10.0, 3.0, 1.0, 1.0, 1.0);
        assert!((throughput_mec(&a1, 4.0) - 0.8).abs() < 1e-12);
        let a3 = t(0.5, 3.0, 1.0, 1.0, 1.0);
        assert_eq!(throughput_mec(&a3, 4.0), 0.0);
        let edge = t(4.0, 3.0, 1.0, 1.0, 1.0);
        assert_eq!(mec_cycles(&edge), 1);
        let a2 = t(3.5, 3.0, 1.0, 1.0, 1.0);
        assert!((throughput_mec(&a2, 4.0) - 4.0 / 3.5).abs() < 1e-12);
    }

    #[test]
    fn cqr_cases() {
        assert!((throughput_cqr(&t(10.0, 1.0, 1.0, 4.0, 1.0)) - 0.2).abs() < 1e-12);
        assert_eq!(throughput_cqr(&t(4.0, 1.0, 1.0, 4.0, 1.0)), 0.0);
        assert_eq!(cqr_cycles(&t(15.0, 1.0, 1.0, 4.0, 1.0)), 3);
    }

    #[test]
    fn footprints() {
        assert_eq!(arqf_cqr(1, 1), 4);
        assert_eq!(arqf_cqr(5, 0), 10);
        assert_eq!(arqf_mec(2, 4, &[3, 3, 3, 3], 0, Mode::Proactive), 32);
        assert_eq!(arqf_mec(3, 4, &[], 10, Mode::OnDemand), 32);
    }

    #[test]
    fn timing_validation() {
        assert!(TimingParams::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(TimingParams::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(TimingParams::new(1.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(TimingParams::new(f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn stats_helpers() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]).unwrap();
        assert!((m - 2.0).abs() < 1e-12 && (s - 1.0).abs() < 1e-12);
        assert!((sqrt(2.0) - core::f64::consts::SQRT_2).abs() < 1e-15);
        let (slope, icept) = linear_fit(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((slope - 2.0).abs() < 1e-12 && (icept - 1.0).abs() < 1e-12);
    }
}
