//! Half-duplex decode-and-forward relaying.
//!
//! A fraction `τ₁` of the channel uses carries source → relay at power `p₁`,
//! the remaining `1 − τ₁` carries relay → destination at power `p₂`. The
//! end-to-end rate is the weaker hop,
//!
//! ```text
//! R = min{ τ₁ log₂(1 + p₁α₁), (1 − τ₁) log₂(1 + p₂α₂) }
//! ```
//!
//! with average power `τ₁p₁ + (1 − τ₁)p₂`. EMI only degrades the first hop,
//! so it enters through `α₁` alone.

use crate::error::{invalid, Error, Result};
use crate::linalg::{inner, norm_sqr, CMatrix, Cholesky};
use crate::{Complex, Real};

/// Per-phase SNR per watt of transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveGains<T> {
    pub first: T,
    pub second: T,
}

impl<T: Real> EffectiveGains<T> {
    pub fn new(first: T, second: T) -> Result<Self> {
        if !(first > T::zero() && second > T::zero()) || !(first.is_finite() && second.is_finite())
        {
            return invalid("effective gains must be positive and finite");
        }
        Ok(Self { first, second })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaySolution<T> {
    pub tau1: T,
    pub p1: T,
    pub p2: T,
    pub average_power: T,
    pub achieved_rate: T,
    /// Outer bisection steps; zero for closed-form solutions.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombinerKind {
    Mr,
    Mmse,
}

pub fn df_rate<T: Real>(tau1: T, p1: T, p2: T, gains: &EffectiveGains<T>) -> Result<T> {
    if !(tau1 > T::zero() && tau1 < T::one()) {
        return invalid(format!("time split {tau1} outside (0, 1)"));
    }
    if !(p1 >= T::zero() && p2 >= T::zero()) {
        return invalid("phase powers must be non-negative");
    }
    Ok(phase_rates(tau1, p1, p2, gains)
        .0
        .min(phase_rates(tau1, p1, p2, gains).1))
}

fn phase_rates<T: Real>(tau1: T, p1: T, p2: T, gains: &EffectiveGains<T>) -> (T, T) {
    let first = tau1 * (p1 * gains.first).ln_1p() / T::LN_2();
    let second = (T::one() - tau1) * (p2 * gains.second).ln_1p() / T::LN_2();
    (first, second)
}

/// Single-antenna relay: `α₁ = β_sr/(σ²_emi + σ²)`, `α₂ = β_rd/σ²`.
pub fn effective_gains_single<T: Real>(
    beta_sr: T,
    beta_rd: T,
    emi_variance: T,
    noise_power: T,
) -> Result<EffectiveGains<T>> {
    if !(noise_power > T::zero()) {
        return invalid("noise power must be positive");
    }
    if !(emi_variance >= T::zero()) {
        return invalid("EMI variance must be non-negative");
    }
    EffectiveGains::new(
        beta_sr / (emi_variance + noise_power),
        beta_rd / noise_power,
    )
}

fn check_gains<T: Real>(beta_sr: T, beta_rd: T, emi_variance: T, noise_power: T) -> Result<()> {
    if !(beta_sr > T::zero() && beta_rd > T::zero()) {
        return invalid("channel gains must be positive");
    }
    if !(noise_power > T::zero()) || !(emi_variance >= T::zero()) {
        return invalid("noise power must be positive and EMI variance non-negative");
    }
    Ok(())
}

/// Power needed by repetition coding (`τ₁ = τ₂ = ½`, `p₁α₁ = p₂α₂`).
pub fn repetition_required_power<T: Real>(
    target_rate: T,
    beta_sr: T,
    beta_rd: T,
    emi_variance: T,
    noise_power: T,
) -> Result<T> {
    check_gains(beta_sr, beta_rd, emi_variance, noise_power)?;
    let two = T::lit(2.0);
    Ok((two.powf(two * target_rate) - T::one())
        * (beta_sr * noise_power + beta_rd * (emi_variance + noise_power))
        / (two * beta_rd * beta_sr))
}

/// Repetition-coded operating point: equal split with both hops at SNR
/// `2^{2R̄} − 1`.
pub fn repetition_split<T: Real>(
    target_rate: T,
    gains: &EffectiveGains<T>,
) -> Result<RelaySolution<T>> {
    if !(target_rate > T::zero()) {
        return invalid("target rate must be positive");
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let snr = two.powf(two * target_rate) - T::one();
    let p1 = snr / gains.first;
    let p2 = snr / gains.second;
    Ok(RelaySolution {
        tau1: half,
        p1,
        p2,
        average_power: half * (p1 + p2),
        achieved_rate: df_rate(half, p1, p2, gains)?,
        iterations: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerOptions<T> {
    /// Coarse τ₁ grid size before golden-section refinement.
    pub coarse_points: usize,
    /// The search runs over `[tau_margin, 1 − tau_margin]`.
    pub tau_margin: T,
    pub golden_iters: usize,
}

impl<T: Real> Default for InnerOptions<T> {
    fn default() -> Self {
        Self {
            coarse_points: 512,
            tau_margin: T::lit(1e-4),
            golden_iters: 80,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolution<T> {
    pub rate: T,
    pub tau1: T,
    pub p1: T,
    pub p2: T,
}

/// For fixed `τ₁`, spends the whole budget and equalises the two hop rates.
/// The rate gap rises strictly in `p₁ ∈ [0, p/τ₁]`; its root is found by
/// Newton steps kept inside a shrinking bisection bracket.
pub fn equalized_split<T: Real>(budget: T, tau1: T, gains: &EffectiveGains<T>) -> InnerSolution<T> {
    let tau2 = T::one() - tau1;
    let p2_of = |p1: T| ((budget - tau1 * p1) / tau2).max(T::zero());
    let gap = |p1: T| {
        let p2 = p2_of(p1);
        let (r1, r2) = phase_rates(tau1, p1, p2, gains);
        let slope = tau1
            * (gains.first / (T::one() + p1 * gains.first)
                + gains.second / (T::one() + p2 * gains.second))
            / T::LN_2();
        (r1 - r2, slope)
    };
    let mut lo = T::zero();
    let mut hi = budget / tau1;
    let mut x = budget;
    let tol = T::epsilon() * T::lit(4.0) * hi;
    for _ in 0..200 {
        let (g, slope) = gap(x);
        if g == T::zero() {
            lo = x;
            hi = x;
            break;
        }
        if g < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            break;
        }
        let newton = x - g / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
        if (next - x).abs() <= tol {
            x = next;
            break;
        }
        x = next;
    }
    let p1 = if hi - lo <= tol {
        (lo + hi) * T::lit(0.5)
    } else {
        x
    };
    let p2 = p2_of(p1);
    let (r1, r2) = phase_rates(tau1, p1, p2, gains);
    InnerSolution {
        rate: r1.min(r2),
        tau1,
        p1,
        p2,
    }
}

/// Largest DF rate under an average-power budget, maximised over the time
/// split and the per-phase powers.
pub fn df_inner_max_rate<T: Real>(
    budget: T,
    gains: &EffectiveGains<T>,
    opts: &InnerOptions<T>,
) -> Result<InnerSolution<T>> {
    if !(budget > T::zero()) || !budget.is_finite() {
        return invalid("power budget must be positive and finite");
    }
    if opts.coarse_points < 3 {
        return invalid("coarse grid needs at least 3 points");
    }
    let lo_tau = opts.tau_margin;
    let hi_tau = T::one() - opts.tau_margin;
    if !(hi_tau > lo_tau) {
        return invalid("tau margin leaves an empty search interval");
    }
    let eval = |tau: T| equalized_split(budget, tau, gains);

    let steps = opts.coarse_points - 1;
    let tau_at =
        |k: usize| lo_tau + (hi_tau - lo_tau) * T::from_usize_lossy(k) / T::from_usize_lossy(steps);
    let mut best_k = 0;
    let mut best = eval(tau_at(0));
    for k in 1..=steps {
        let cand = eval(tau_at(k));
        if cand.rate > best.rate {
            best = cand;
            best_k = k;
        }
    }

    // Golden-section refinement on the bracket around the coarse maximum.
    let mut a = tau_at(best_k.saturating_sub(1));
    let mut b = tau_at((best_k + 1).min(steps));
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..opts.golden_iters {
        if fc.rate >= fd.rate {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    for cand in [fc, fd] {
        if cand.rate > best.rate {
            best = cand;
        }
    }
    Ok(best)
}

const BISECTION_UPPER: f64 = 1e5;
const BISECTION_MAX_ITERS: usize = 200;

/// Minimum average power reaching `target_rate`.
///
/// Bisection on the power budget over `[0, 10⁵]` W keeps the lower end
/// infeasible and the upper end feasible; it stops once the rate at the
/// upper end is within relative `eps` of the target and returns that point,
/// so the reported rate is never below the target.
pub fn df_min_power<T: Real>(
    target_rate: T,
    gains: &EffectiveGains<T>,
    eps: T,
) -> Result<RelaySolution<T>> {
    df_min_power_with(target_rate, gains, eps, &InnerOptions::default())
}

pub fn df_min_power_with<T: Real>(
    target_rate: T,
    gains: &EffectiveGains<T>,
    eps: T,
    opts: &InnerOptions<T>,
) -> Result<RelaySolution<T>> {
    if !(target_rate > T::zero()) || !target_rate.is_finite() {
        return invalid("target rate must be positive");
    }
    if !(eps > T::zero()) {
        return invalid("bisection tolerance must be positive");
    }
    let mut lower = T::zero();
    let mut upper = T::lit(BISECTION_UPPER);
    let mut at_upper = df_inner_max_rate(upper, gains, opts)?;
    if at_upper.rate < target_rate {
        return Err(Error::Infeasible(format!(
            "rate {target_rate} unreachable with {BISECTION_UPPER} W (max {})",
            at_upper.rate
        )));
    }
    let mut rate_lower = T::zero();
    for iter in 1..=BISECTION_MAX_ITERS {
        let mid = (lower + upper) * T::lit(0.5);
        let at_mid = df_inner_max_rate(mid, gains, opts)?;
        if at_mid.rate >= target_rate {
            upper = mid;
            at_upper = at_mid;
        } else {
            lower = mid;
            rate_lower = at_mid.rate;
        }
        if !(rate_lower < target_rate && at_upper.rate >= target_rate) {
            return Err(Error::Internal("bisection lost its bracket".into()));
        }
        if (at_upper.rate - target_rate) / target_rate < eps {
            return Ok(RelaySolution {
                tau1: at_upper.tau1,
                p1: at_upper.p1,
                p2: at_upper.p2,
                average_power: at_upper.tau1 * at_upper.p1
                    + (T::one() - at_upper.tau1) * at_upper.p2,
                achieved_rate: at_upper.rate,
                iterations: iter,
            });
        }
    }
    Err(Error::Numerical(format!(
        "bisection did not reach tolerance {eps} in {BISECTION_MAX_ITERS} steps"
    )))
}

/// Interference-plus-noise covariance at the relay, `σ²_emi R + σ² I`.
pub fn noise_covariance<T: Real>(
    emi_variance: T,
    correlation: &CMatrix<T>,
    noise_power: T,
) -> CMatrix<T> {
    correlation.scale(emi_variance).add_identity(noise_power)
}

pub fn combiner<T: Real>(
    h_sr: &[Complex<T>],
    covariance: &CMatrix<T>,
    kind: CombinerKind,
) -> Result<Vec<Complex<T>>> {
    match kind {
        CombinerKind::Mr => Ok(h_sr.to_vec()),
        CombinerKind::Mmse => Cholesky::new(covariance)?.solve(h_sr),
    }
}

/// First-hop gain `|gᴴh_sr|² / (gᴴCg)` for the chosen combiner. For MMSE
/// this equals `h_srᴴ C⁻¹ h_sr`.
pub fn effective_gain_first_phase<T: Real>(
    h_sr: &[Complex<T>],
    covariance: &CMatrix<T>,
    kind: CombinerKind,
) -> Result<T> {
    if h_sr.len() != covariance.dim() || h_sr.is_empty() {
        return invalid("channel and covariance dimensions differ");
    }
    let g = combiner(h_sr, covariance, kind)?;
    let signal = inner(&g, h_sr).norm_sqr();
    let interference = covariance.hermitian_form(&g)?.re;
    if !(interference > T::zero()) {
        return Err(Error::Numerical(
            "combined interference power is not positive".into(),
        ));
    }
    Ok(signal / interference)
}

/// Unit-norm MR precoder `v = h_rd* / ‖h_rd‖`.
pub fn mr_precoder<T: Real>(h_rd: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let norm = norm_sqr(h_rd).sqrt();
    if !(norm > T::zero()) {
        return Err(Error::Infeasible(
            "zero relay-to-destination channel".into(),
        ));
    }
    Ok(h_rd.iter().map(|h| h.conj() / norm).collect())
}

/// Second-hop gain `|h_rdᵀv|² / σ²` with MR precoding.
pub fn effective_gain_second_phase<T: Real>(h_rd: &[Complex<T>], noise_power: T) -> Result<T> {
    if !(noise_power > T::zero()) {
        return invalid("noise power must be positive");
    }
    let v = mr_precoder(h_rd)?;
    Ok(crate::linalg::dot(h_rd, &v).norm_sqr() / noise_power)
}
