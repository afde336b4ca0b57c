//! Forward noising processes.
//!
//! Three related dynamics live here:
//!
//! - the intrinsic Riemannian Ornstein-Uhlenbeck diffusion on CP^(d-1):
//!   a log-map drift relative to an anchor state plus isotropic horizontal
//!   Brownian noise, discretized by Euler steps in the tangent space
//!   followed by the exact exponential-map retraction;
//! - its stochastic-unitary realization on the Hilbert sphere driven by
//!   the full Gell-Mann generator set in Stratonovich form, integrated by
//!   an Euler-Heun predictor-corrector step, with a numeric calibration of
//!   the rate eta against the intrinsic short-time displacement;
//! - the Euclidean variance-preserving forward step used by the baseline,
//!   acting on states flattened to R^(2d).

use num_complex::Complex64;

use crate::geometry::{
    exp_map, fs_distance, inner, log_map, project_horizontal, PureState, TangentVector,
    CUT_LOCUS_TOL,
};
use crate::quantum_linear::HermitianOperator;
use crate::rng::RngStream;
use crate::{Error, Result};

/// Noise schedule and forward-process constants.
///
/// sigma(t) interpolates exponentially from `sigma_min` at t = 0 to
/// `sigma_max` at t = `horizon`. The drift is
/// `drift_sign * lambda_ou * Log_psi(anchor)`; the default sign of -1
/// points away from the anchor. `horizon / n_steps` is both the forward
/// simulation grid and the local-time step.
#[derive(Clone, Debug)]
pub struct NoiseSchedule {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub horizon: f64,
    pub n_steps: usize,
    pub lambda_ou: f64,
    pub drift_sign: f64,
    pub anchor: PureState,
}

impl NoiseSchedule {
    /// Default constants: sigma in [0.05, 1.0], horizon 1 over 500 steps,
    /// OU strength 0.2 with the literal (repelling) sign, uniform anchor.
    pub fn defaults(d: usize) -> Self {
        Self {
            sigma_min: 0.05,
            sigma_max: 1.0,
            horizon: 1.0,
            n_steps: 500,
            lambda_ou: 0.2,
            drift_sign: -1.0,
            anchor: PureState::uniform(d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_min > 0.0 && self.sigma_min <= self.sigma_max) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < sigma_min <= sigma_max, got {} and {}",
                self.sigma_min, self.sigma_max
            )));
        }
        if self.n_steps < 1 {
            return Err(Error::InvalidArgument("n_steps must be >= 1".into()));
        }
        if self.horizon <= 0.0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        if self.drift_sign != 1.0 && self.drift_sign != -1.0 {
            return Err(Error::InvalidArgument(format!(
                "drift_sign must be +1 or -1, got {}",
                self.drift_sign
            )));
        }
        Ok(())
    }

    /// Grid step horizon / n_steps.
    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }
}

/// sigma(t) = sigma_min (sigma_max / sigma_min)^(t / horizon).
pub fn sigma_at(sched: &NoiseSchedule, t: f64) -> Result<f64> {
    if !(0.0..=sched.horizon + 1e-12).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "time {t} outside [0, {}]",
            sched.horizon
        )));
    }
    let ratio = sched.sigma_max / sched.sigma_min;
    Ok(sched.sigma_min * ratio.powf(t / sched.horizon))
}

/// Integral of sigma(s)^2 over [0, t]; the variance-preserving baseline
/// reuses the schedule as beta(t) = sigma(t)^2.
pub fn integrated_sigma_sq(sched: &NoiseSchedule, t: f64) -> f64 {
    let l = (sched.sigma_max / sched.sigma_min).ln();
    let s0 = sched.sigma_min * sched.sigma_min;
    if l.abs() < 1e-14 {
        s0 * t
    } else {
        s0 * sched.horizon / (2.0 * l) * ((2.0 * l * t / sched.horizon).exp() - 1.0)
    }
}

/// One forward trajectory pair (psi_{t - dt}, psi_t) produced on the grid.
#[derive(Clone, Debug)]
pub struct LocalPair {
    pub phi: PureState,
    pub psi: PureState,
    pub t: f64,
    pub dt: f64,
}

/// OU drift `drift_sign * lambda_ou * Log_psi(anchor)`. Zero when
/// lambda_ou = 0, when psi coincides with the anchor, and (with a warning)
/// at the measure-zero cut locus of the anchor.
pub fn drift(sched: &NoiseSchedule, psi: &PureState, _t: f64) -> TangentVector {
    if sched.lambda_ou == 0.0 {
        return TangentVector::zero(psi.clone());
    }
    match log_map(psi, &sched.anchor) {
        Ok(log) => log.scaled(sched.drift_sign * sched.lambda_ou),
        Err(_) => {
            eprintln!("warning: state at the anchor cut locus; using zero drift");
            TangentVector::zero(psi.clone())
        }
    }
}

/// Scratch buffers for in-place forward simulation.
struct StepScratch {
    gauss: Vec<Complex64>,
    tangent: Vec<Complex64>,
}

impl StepScratch {
    fn new(d: usize) -> Self {
        Self {
            gauss: vec![Complex64::new(0.0, 0.0); d],
            tangent: vec![Complex64::new(0.0, 0.0); d],
        }
    }
}

/// In-place Euler step in the tangent space followed by the exponential
/// retraction. `state` must be unit norm; it stays unit norm.
fn forward_step_in_place(
    sched: &NoiseSchedule,
    state: &mut [Complex64],
    t: f64,
    dt: f64,
    rng: &mut RngStream,
    scratch: &mut StepScratch,
) -> Result<()> {
    if dt == 0.0 {
        return Ok(());
    }
    let d = state.len();
    let sigma = sigma_at(sched, t)?;
    let noise_scale = sigma * dt.sqrt();

    // Isotropic horizontal Gaussian.
    for g in scratch.gauss.iter_mut() {
        *g = Complex64::new(rng.normal(), rng.normal());
    }
    let c = inner(state, &scratch.gauss);
    for ((v, g), s) in scratch
        .tangent
        .iter_mut()
        .zip(&scratch.gauss)
        .zip(state.iter())
    {
        *v = noise_scale * (g - c * s);
    }

    // OU drift toward/away from the anchor.
    if sched.lambda_ou != 0.0 {
        let ca = inner(state, sched.anchor.amplitudes());
        let m = ca.norm();
        if m > CUT_LOCUS_TOL {
            let ph = (ca / m).conj();
            // w = aligned anchor - radial part; |w| = sin(r).
            let mut s_sq = 0.0;
            for (g, (a, s)) in scratch
                .gauss
                .iter_mut()
                .zip(sched.anchor.amplitudes().iter().zip(state.iter()))
            {
                *g = a * ph - m * s;
                s_sq += g.norm_sqr();
            }
            let sn = s_sq.sqrt();
            if sn > 1e-300 {
                let r = sn.atan2(m);
                let f = sched.drift_sign * sched.lambda_ou * r / sn * dt;
                for (v, w) in scratch.tangent.iter_mut().zip(&scratch.gauss) {
                    *v += f * w;
                }
            }
        }
    }

    // Exponential map.
    let theta = scratch
        .tangent
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if theta == 0.0 {
        return Ok(());
    }
    let (sin_t, cos_t) = theta.sin_cos();
    let f = sin_t / theta;
    for (s, v) in state.iter_mut().zip(&scratch.tangent) {
        *s = cos_t * *s + f * v;
    }
    let _ = d;
    Ok(())
}

/// One Euler-Maruyama step of the forward diffusion:
/// v = drift(psi, t) dt + sigma(t) sqrt(dt) xi, then Exp_psi(v).
pub fn forward_step(
    sched: &NoiseSchedule,
    psi: &PureState,
    t: f64,
    dt: f64,
    rng: &mut RngStream,
) -> Result<PureState> {
    let mut state = psi.amplitudes().to_vec();
    let mut scratch = StepScratch::new(psi.dim());
    forward_step_in_place(sched, &mut state, t, dt, rng, &mut scratch)?;
    Ok(PureState::from_raw(state))
}

const PAIR_MAX_RETRIES: usize = 16;

/// Simulates the forward diffusion from time 0 up to the grid time nearest
/// to `t` and returns the last two states as a local pair. The final step
/// is redrawn (counted) in the measure-zero event that it lands at the cut
/// locus of its start.
pub fn simulate_pair(
    sched: &NoiseSchedule,
    psi0: &PureState,
    t: f64,
    rng: &mut RngStream,
) -> Result<(LocalPair, u32)> {
    let dt = sched.dt();
    if !(dt - 1e-12..=sched.horizon + 1e-12).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "pair time {t} outside [dt, horizon]"
        )));
    }
    let k = ((t / dt).round() as usize).clamp(1, sched.n_steps);
    let mut state = psi0.amplitudes().to_vec();
    let mut scratch = StepScratch::new(psi0.dim());
    for j in 0..(k - 1) {
        forward_step_in_place(sched, &mut state, j as f64 * dt, dt, rng, &mut scratch)?;
    }
    let phi = PureState::from_raw(state.clone());
    let t_last = (k - 1) as f64 * dt;
    let mut resamples = 0u32;
    loop {
        let mut next = state.clone();
        forward_step_in_place(sched, &mut next, t_last, dt, rng, &mut scratch)?;
        let psi = PureState::from_raw(next);
        if fs_distance(&phi, &psi)? < std::f64::consts::FRAC_PI_2 - 1e-6 {
            return Ok((
                LocalPair {
                    phi,
                    psi,
                    t: k as f64 * dt,
                    dt,
                },
                resamples,
            ));
        }
        resamples += 1;
        if resamples as usize > PAIR_MAX_RETRIES {
            return Err(Error::InvalidArgument(
                "local pair repeatedly landed at the cut locus".into(),
            ));
        }
    }
}

/// One Euler-Heun (Stratonovich predictor-corrector) step of the
/// stochastic-unitary evolution
/// `d psi = -i sqrt(eta) sum_k G_k psi o dW_k`,
/// sharing one Gaussian increment per generator between predictor and
/// corrector. For the complete Gell-Mann set the Ito compensator
/// `-eta/2 sum_k G_k^2` is an exact multiple of the identity, so it has no
/// projective effect and is not added separately; the per-step
/// renormalization residue stays below 1e-6 and is asserted.
pub fn sse_step(
    generators: &[HermitianOperator],
    eta: f64,
    psi: &PureState,
    dt: f64,
    rng: &mut RngStream,
) -> Result<PureState> {
    if eta == 0.0 || dt == 0.0 {
        return Ok(psi.clone());
    }
    let d = psi.dim();
    for g in generators {
        if g.dim() != d {
            return Err(Error::DimensionMismatch {
                left: g.dim(),
                right: d,
            });
        }
    }
    let sqrt_eta = eta.sqrt();
    let sqrt_dt = dt.sqrt();
    let coeffs: Vec<Complex64> = (0..generators.len())
        .map(|_| Complex64::new(0.0, -1.0) * (sqrt_eta * sqrt_dt * rng.normal()))
        .collect();

    // Predictor.
    let mut predictor = psi.amplitudes().to_vec();
    for (g, c) in generators.iter().zip(&coeffs) {
        let g_psi = g.apply(psi.amplitudes());
        for (p, v) in predictor.iter_mut().zip(&g_psi) {
            *p += c * v;
        }
    }
    // Corrector averages the noise coefficient over both endpoints.
    let mut out = psi.amplitudes().to_vec();
    for (g, c) in generators.iter().zip(&coeffs) {
        let g_psi = g.apply(psi.amplitudes());
        let g_pred = g.apply(&predictor);
        let half = 0.5 * c;
        for ((o, a), b) in out.iter_mut().zip(&g_psi).zip(&g_pred) {
            *o += half * (a + b);
        }
    }
    let n = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let residue = (n - 1.0).abs();
    assert!(
        residue < 1e-6,
        "stochastic-unitary step drifted off the sphere by {residue:e}; reduce dt"
    );
    for z in out.iter_mut() {
        *z /= n;
    }
    Ok(PureState::from_raw(out))
}

/// Mean squared FS displacement of one stochastic-unitary step, relative
/// to the intrinsic target sigma^2 (2d - 2) dt, averaged over Haar starts.
pub fn sse_displacement_ratio(
    generators: &[HermitianOperator],
    d: usize,
    sigma: f64,
    eta: f64,
    dt: f64,
    n_samples: usize,
    rng: &mut RngStream,
) -> Result<f64> {
    if eta == 0.0 {
        return Ok(0.0);
    }
    let target = sigma * sigma * (2 * d - 2) as f64 * dt;
    let mut acc = 0.0;
    for i in 0..n_samples {
        let mut r = rng.derive(i as u64);
        let start = crate::geometry::haar_state(d, &mut r);
        let next = sse_step(generators, eta, &start, dt, &mut r)?;
        let dist = fs_distance(&start, &next)?;
        acc += dist * dist;
    }
    Ok(acc / n_samples as f64 / target)
}

const CALIBRATION_SAMPLES: usize = 200_000;

/// Finds eta such that the stochastic-unitary short-time mean squared FS
/// displacement matches sigma^2 (2d - 2) dt within 2%, and returns the
/// dimensionless constant eta / sigma^2. Displacement is linear in eta, so
/// a secant refinement of the measured ratio converges immediately.
pub fn calibrate_sse_rate(d: usize, sigma: f64, dt: f64, rng: &mut RngStream) -> Result<f64> {
    if dt > 1e-3 {
        return Err(Error::InvalidArgument(format!(
            "calibration requires dt <= 1e-3, got {dt}"
        )));
    }
    let generators = crate::quantum_linear::gell_mann_basis(d);
    let mut eta = sigma * sigma;
    let mut ratios = Vec::new();
    for round in 0..4 {
        let mut r = rng.derive(round as u64);
        let ratio = sse_displacement_ratio(
            &generators,
            d,
            sigma,
            eta,
            dt,
            CALIBRATION_SAMPLES,
            &mut r,
        )?;
        ratios.push((eta, ratio));
        if (ratio - 1.0).abs() <= 0.02 {
            return Ok(eta / (sigma * sigma));
        }
        if ratio <= 0.0 {
            break;
        }
        eta /= ratio;
    }
    Err(Error::Calibration(format!(
        "displacement ratio did not settle within 2%: {ratios:?}"
    )))
}

/// Euclidean variance-preserving forward step on R^(2d):
/// x <- x - beta(t) x dt / 2 + sqrt(beta(t) dt) N(0, I), beta = sigma^2.
pub fn vp_forward_step(
    x: &[f64],
    t: f64,
    dt: f64,
    sched: &NoiseSchedule,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let sigma = sigma_at(sched, t)?;
    let beta = sigma * sigma;
    let noise = (beta * dt).sqrt();
    Ok(x.iter()
        .map(|xi| xi - 0.5 * beta * xi * dt + noise * rng.normal())
        .collect())
}

/// Flattens a state to R^(2d) as (Re psi, Im psi).
pub fn state_to_real(psi: &PureState) -> Vec<f64> {
    let d = psi.dim();
    let mut out = Vec::with_capacity(2 * d);
    out.extend(psi.amplitudes().iter().map(|z| z.re));
    out.extend(psi.amplitudes().iter().map(|z| z.im));
    out
}

/// Reassembles a real 2d-vector into a normalized state.
pub fn real_to_state(x: &[f64]) -> Result<PureState> {
    let d = x.len() / 2;
    if x.len() != 2 * d || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "real vector length {} is not an even number >= 4",
            x.len()
        )));
    }
    let amps: Vec<Complex64> = (0..d).map(|j| Complex64::new(x[j], x[d + j])).collect();
    PureState::normalized(amps)
}

/// Projects the generator noise fields of the stochastic-unitary dynamics
/// onto the horizontal space at psi: X_k = -i G_k psi minus its component
/// along psi.
pub fn horizontal_sse_field(
    generator: &HermitianOperator,
    psi: &PureState,
) -> Result<TangentVector> {
    let g_psi = generator.apply(psi.amplitudes());
    let field: Vec<Complex64> = g_psi
        .into_iter()
        .map(|z| Complex64::new(0.0, -1.0) * z)
        .collect();
    project_horizontal(psi, &field)
}
