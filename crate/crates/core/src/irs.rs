//! IRS-assisted link: end-to-end SINR and rate, the transmit power needed
//! for a target rate, and phase configurations with and without knowledge
//! of the interference statistics.
//!
//! With phases `φ` the destination observes
//!
//! ```text
//! SINR = p |h_rdᵀ Φ h_sr|² / (σ²_emi ‖h_rdᵀ Φ R^{1/2}‖² + σ²)
//! ```
//!
//! where `Φ = diag(e^{jφ_1}, …, e^{jφ_N})`.

use crate::emi::{emi_quadratic_form, EmiModel};
use crate::error::{invalid, Error, Result};
use crate::linalg::dot;
use crate::scene::LosChannel;
use crate::{Complex, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig<T> {
    phases: Vec<T>,
}

impl<T: Real> PhaseConfig<T> {
    /// Wraps every phase into `[0, 2π)`.
    pub fn new(phases: Vec<T>) -> Self {
        Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            phases: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    /// Diagonal of `Φ`.
    pub fn reflection(&self) -> Vec<Complex<T>> {
        self.phases
            .iter()
            .map(|&p| Complex::from_polar(T::one(), p))
            .collect()
    }
}

pub fn wrap_phase<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut w = x % tau;
    if w < T::zero() {
        w = w + tau;
    }
    if w >= tau {
        w = w - tau;
    }
    w
}

#[derive(Debug, Clone)]
pub struct IrsLink<T> {
    pub h_sr: LosChannel<T>,
    pub h_rd: LosChannel<T>,
    pub emi: EmiModel<T>,
    /// Thermal noise σ² at the destination, watts.
    pub noise_power: T,
}

impl<T: Real> IrsLink<T> {
    pub fn new(
        h_sr: LosChannel<T>,
        h_rd: LosChannel<T>,
        emi: EmiModel<T>,
        noise_power: T,
    ) -> Result<Self> {
        let n = h_sr.len();
        if n == 0 {
            return invalid("IRS needs at least one element");
        }
        if h_rd.len() != n || emi.dim() != n {
            return invalid(format!(
                "dimension mismatch: h_sr {n}, h_rd {}, EMI {}",
                h_rd.len(),
                emi.dim()
            ));
        }
        if !(noise_power > T::zero()) || !noise_power.is_finite() {
            return invalid("noise power must be positive");
        }
        Ok(Self {
            h_sr,
            h_rd,
            emi,
            noise_power,
        })
    }

    pub fn len(&self) -> usize {
        self.h_sr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h_sr.is_empty()
    }

    fn check(&self, phases: &PhaseConfig<T>) -> Result<()> {
        if phases.len() != self.len() {
            return invalid(format!(
                "{} phases for an IRS with {} elements",
                phases.len(),
                self.len()
            ));
        }
        Ok(())
    }

    /// Per-element products `[h_sr]_n [h_rd]_n`.
    fn cascade_terms(&self) -> Vec<Complex<T>> {
        self.h_sr
            .coefficients
            .iter()
            .zip(&self.h_rd.coefficients)
            .map(|(a, b)| a * b)
            .collect()
    }

    /// `h_rdᵀ Φ h_sr`
    pub fn cascade(&self, phases: &PhaseConfig<T>) -> Result<Complex<T>> {
        self.check(phases)?;
        Ok(dot(&self.cascade_terms(), &phases.reflection()))
    }

    /// EMI power reaching the destination per unit σ²_emi,
    /// `‖h_rdᵀ Φ R^{1/2}‖²`.
    pub fn emi_gain(&self, phases: &PhaseConfig<T>) -> Result<T> {
        self.check(phases)?;
        let row: Vec<Complex<T>> = self
            .h_rd
            .coefficients
            .iter()
            .zip(phases.reflection())
            .map(|(h, e)| h * e)
            .collect();
        emi_quadratic_form(&row, &self.emi.correlation)
    }
}

/// `φ_n = −arg([h_sr]_n [h_rd]_n)`: every reflected path adds in phase.
pub fn phases_noise_only<T: Real>(
    h_sr: &LosChannel<T>,
    h_rd: &LosChannel<T>,
) -> Result<PhaseConfig<T>> {
    if h_sr.len() != h_rd.len() {
        return invalid("channel lengths differ");
    }
    let mut phases = Vec::with_capacity(h_sr.len());
    for (a, b) in h_sr.coefficients.iter().zip(&h_rd.coefficients) {
        let prod = a * b;
        if prod.norm() == T::zero() {
            return invalid("zero channel coefficient leaves the phase undefined");
        }
        phases.push(-prod.arg());
    }
    Ok(PhaseConfig::new(phases))
}

pub fn irs_sinr<T: Real>(power: T, link: &IrsLink<T>, phases: &PhaseConfig<T>) -> Result<T> {
    if !(power >= T::zero()) {
        return invalid("transmit power must be non-negative");
    }
    let signal = link.cascade(phases)?.norm_sqr();
    let denom = link.emi.variance * link.emi_gain(phases)? + link.noise_power;
    Ok(power * signal / denom)
}

pub fn irs_rate<T: Real>(power: T, link: &IrsLink<T>, phases: &PhaseConfig<T>) -> Result<T> {
    Ok((T::one() + irs_sinr(power, link, phases)?).log2())
}

/// Transmit power at which [`irs_rate`] equals `target_rate` for fixed
/// phases.
pub fn irs_required_power<T: Real>(
    target_rate: T,
    link: &IrsLink<T>,
    phases: &PhaseConfig<T>,
) -> Result<T> {
    if !(target_rate > T::zero()) || !target_rate.is_finite() {
        return invalid("target rate must be positive");
    }
    let signal = link.cascade(phases)?.norm_sqr();
    if !(signal > T::zero()) {
        return Err(Error::Infeasible("zero effective IRS channel".into()));
    }
    let denom = link.emi.variance * link.emi_gain(phases)? + link.noise_power;
    Ok((T::lit(2.0).powf(target_rate) - T::one()) * denom / signal)
}

/// SINR and its gradient with respect to each phase.
pub fn sinr_gradient<T: Real>(power: T, link: &IrsLink<T>, phases: &[T]) -> Result<(T, Vec<T>)> {
    let n = link.len();
    if phases.len() != n {
        return invalid("phase vector length mismatch");
    }
    let two = T::lit(2.0);
    let rot: Vec<Complex<T>> = phases
        .iter()
        .map(|&p| Complex::from_polar(T::one(), p))
        .collect();
    let terms: Vec<Complex<T>> = link
        .cascade_terms()
        .iter()
        .zip(&rot)
        .map(|(a, e)| a * e)
        .collect();
    let s = terms
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t);
    let row: Vec<Complex<T>> = link
        .h_rd
        .coefficients
        .iter()
        .zip(&rot)
        .map(|(h, e)| h * e)
        .collect();
    let row_conj: Vec<Complex<T>> = row.iter().map(|z| z.conj()).collect();
    // y = R conj(w), q = Σ w_n y_n
    let y = link.emi.correlation.mul_vec(&row_conj)?;
    let q = dot(&row, &y).re.max(T::zero());

    let num = s.norm_sqr();
    let den = link.emi.variance * q + link.noise_power;
    let sinr = power * num / den;

    let grad = (0..n)
        .map(|k| {
            let d_num = -two * (s.conj() * terms[k]).im;
            let d_q = -two * (row[k] * y[k]).im;
            let d_den = link.emi.variance * d_q;
            power * (d_num * den - num * d_den) / (den * den)
        })
        .collect();
    Ok((sinr, grad))
}

/// Gradient-ascent settings. Step lengths are relative to the current SINR,
/// so the iteration does not depend on the absolute power scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientOptions<T> {
    pub initial_step: T,
    pub shrink: T,
    pub armijo: T,
    pub rel_tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for GradientOptions<T> {
    fn default() -> Self {
        Self {
            initial_step: T::one(),
            shrink: T::lit(0.5),
            armijo: T::lit(1e-4),
            rel_tol: T::lit(1e-8),
            max_iters: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOptimization<T> {
    pub phases: PhaseConfig<T>,
    pub sinr: T,
    pub iterations: usize,
    /// False when `max_iters` ran out before the stopping rule fired; the
    /// best iterate is still returned.
    pub converged: bool,
}

/// Projected gradient ascent on the SINR starting from the noise-only
/// configuration. The projection onto the unit-modulus set is the wrap of
/// each phase into `[0, 2π)`.
pub fn phases_emi_aware<T: Real>(
    link: &IrsLink<T>,
    power: T,
    opts: &GradientOptions<T>,
) -> Result<PhaseOptimization<T>> {
    let init = phases_noise_only(&link.h_sr, &link.h_rd)?;
    phases_emi_aware_from(link, power, &init, opts)
}

pub fn phases_emi_aware_from<T: Real>(
    link: &IrsLink<T>,
    power: T,
    init: &PhaseConfig<T>,
    opts: &GradientOptions<T>,
) -> Result<PhaseOptimization<T>> {
    if !(power > T::zero()) {
        return invalid("phase optimisation needs a positive power");
    }
    link.check(init)?;
    let mut phases = init.phases().to_vec();
    let (mut value, mut grad) = sinr_gradient(power, link, &phases)?;
    let mut iterations = 0;
    let mut converged = false;
    let min_step = T::lit(1e-14);

    while iterations < opts.max_iters {
        iterations += 1;
        let grad_sq = grad.iter().fold(T::zero(), |acc, &g| acc + g * g);
        if !(grad_sq > T::zero()) || !(value > T::zero()) {
            converged = true;
            break;
        }
        let mut step = opts.initial_step / value;
        let accepted = loop {
            let trial: Vec<T> = phases
                .iter()
                .zip(&grad)
                .map(|(&p, &g)| wrap_phase(p + step * g))
                .collect();
            let (trial_value, trial_grad) = sinr_gradient(power, link, &trial)?;
            if trial_value >= value + opts.armijo * step * grad_sq {
                break Some((trial, trial_value, trial_grad));
            }
            step = step * opts.shrink;
            if step * value < min_step {
                break None;
            }
        };
        match accepted {
            None => {
                converged = true;
                break;
            }
            Some((trial, trial_value, trial_grad)) => {
                let gain = (trial_value - value) / value;
                phases = trial;
                value = trial_value;
                grad = trial_grad;
                if gain < opts.rel_tol {
                    converged = true;
                    break;
                }
            }
        }
    }
    Ok(PhaseOptimization {
        phases: PhaseConfig::new(phases),
        sinr: value,
        iterations,
        converged,
    })
}

#[derive(Debug, Clone)]
pub struct IrsPowerSolution<T> {
    pub power: T,
    pub phases: PhaseConfig<T>,
    /// Required power after each outer pass, starting with the noise-only
    /// configuration.
    pub power_history: Vec<T>,
    pub converged: bool,
}

/// Alternates phase optimisation at the current power with the closed-form
/// required power for the new phases, warm-starting each pass from the
/// previous phases, until the power changes by less than 1e-6 relative or
/// 20 passes have run.
pub fn irs_min_power_emi_aware<T: Real>(
    target_rate: T,
    link: &IrsLink<T>,
    opts: &GradientOptions<T>,
) -> Result<IrsPowerSolution<T>> {
    const MAX_OUTER: usize = 20;
    let tol = T::lit(1e-6);
    let mut phases = phases_noise_only(&link.h_sr, &link.h_rd)?;
    let mut power = irs_required_power(target_rate, link, &phases)?;
    let mut power_history = vec![power];
    let mut converged = false;
    for _ in 0..MAX_OUTER {
        let opt = phases_emi_aware_from(link, power, &phases, opts)?;
        let next = irs_required_power(target_rate, link, &opt.phases)?;
        phases = opt.phases;
        let change = ((power - next) / power).abs();
        power = next;
        power_history.push(power);
        if change < tol {
            converged = true;
            break;
        }
    }
    Ok(IrsPowerSolution {
        power,
        phases,
        power_history,
        converged,
    })
}
