//! Fubini-Study geometry of the pure-state manifold CP^(d-1).
//!
//! States are stored as unit vectors in C^d with an arbitrary global phase;
//! the projective quotient is handled by routing every comparison through
//! the modulus of the overlap or an explicit phase alignment. Tangent data
//! are kept in the horizontal subspace at the base representative, i.e.
//! `<base, v> = 0`, which removes both the normalization and the phase
//! directions. On horizontal vectors the FS norm equals the ambient
//! Euclidean norm (the quotient map is a Riemannian submersion).
//!
//! Geodesic distances live in [0, pi/2]; the logarithm map and parallel
//! transport reject inputs at the cut locus (orthogonal states) instead of
//! picking an arbitrary direction.

use num_complex::Complex64;

use crate::rng::RngStream;
use crate::{Error, Result};

/// Unit-norm tolerance for state construction.
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Horizontality tolerance for tangent construction.
pub const HORIZONTAL_TOL: f64 = 1e-10;
/// Overlap modulus below which two states count as orthogonal (cut locus).
pub const CUT_LOCUS_TOL: f64 = 1e-9;

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Real part of the Hermitian inner product (the ambient real inner product).
pub fn re_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A pure quantum state: unit complex vector of dimension d, representing a
/// point of CP^(d-1) via an arbitrary phase representative.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector, requiring unit norm within 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "state dimension must be >= 2, got {}",
                amps.len()
            )));
        }
        let deviation = (norm(&amps) - 1.0).abs();
        if deviation > UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm { deviation });
        }
        Ok(Self { amps })
    }

    /// Normalizes an arbitrary nonzero vector to a state.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amps);
        if n < 1e-300 {
            return Err(Error::InvalidArgument(
                "cannot normalize a zero vector".into(),
            ));
        }
        let amps = amps.into_iter().map(|z| z / n).collect();
        Ok(Self { amps })
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// Computational basis state |k> in dimension d.
    pub fn basis(d: usize, k: usize) -> Self {
        assert!(d >= 2 && k < d);
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Uniform superposition (all amplitudes 1/sqrt(d)).
    pub fn uniform(d: usize) -> Self {
        assert!(d >= 2);
        let a = 1.0 / (d as f64).sqrt();
        Self {
            amps: vec![Complex64::new(a, 0.0); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// The same projective point with an extra global phase e^{i theta}.
    pub fn with_phase(&self, theta: f64) -> Self {
        let ph = Complex64::from_polar(1.0, theta);
        Self {
            amps: self.amps.iter().map(|z| z * ph).collect(),
        }
    }
}

/// A horizontal tangent vector anchored at a base state.
#[derive(Clone, Debug)]
pub struct TangentVector {
    base: PureState,
    components: Vec<Complex64>,
}

impl TangentVector {
    /// Wraps components, requiring horizontality at `base` within 1e-10.
    pub fn new(base: PureState, components: Vec<Complex64>) -> Result<Self> {
        if base.dim() != components.len() {
            return Err(Error::DimensionMismatch {
                left: base.dim(),
                right: components.len(),
            });
        }
        let residual = inner(base.amplitudes(), &components).norm();
        if residual > HORIZONTAL_TOL {
            return Err(Error::NotHorizontal { residual });
        }
        Ok(Self { base, components })
    }

    pub(crate) fn from_raw(base: PureState, components: Vec<Complex64>) -> Self {
        Self { base, components }
    }

    pub fn zero(base: PureState) -> Self {
        let d = base.dim();
        Self {
            base,
            components: vec![Complex64::new(0.0, 0.0); d],
        }
    }

    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// FS norm; equals the ambient Euclidean norm for horizontal vectors.
    pub fn norm(&self) -> f64 {
        norm(&self.components)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base: self.base.clone(),
            components: self.components.iter().map(|z| z * factor).collect(),
        }
    }
}

/// Overlap <psi, phi>, conjugate-linear in the first argument.
pub fn overlap(psi: &PureState, phi: &PureState) -> Result<Complex64> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: phi.dim(),
        });
    }
    Ok(inner(psi.amplitudes(), phi.amplitudes()))
}

/// Geodesic FS distance arccos |<psi, phi>| in [0, pi/2].
pub fn fs_distance(psi: &PureState, phi: &PureState) -> Result<f64> {
    let c = overlap(psi, phi)?;
    let m = c.norm().clamp(-1.0, 1.0);
    if m < 0.99 {
        return Ok(m.acos());
    }
    // Near-coincident states: arccos of the overlap modulus loses half the
    // significant digits, so evaluate through the sine of the angle.
    let ph = (c / m).conj();
    let s_sq: f64 = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(p, q)| (q * ph - m * p).norm_sqr())
        .sum();
    Ok(s_sq.sqrt().atan2(m))
}

/// Rotates the global phase of `phi` so that `<base, phi>` is real positive.
pub fn phase_align(base: &PureState, phi: &PureState) -> Result<PureState> {
    let c = overlap(base, phi)?;
    if c.norm() <= CUT_LOCUS_TOL {
        return Err(Error::OrthogonalStates);
    }
    let ph = (c / c.norm()).conj();
    Ok(PureState::from_raw(
        phi.amplitudes().iter().map(|z| z * ph).collect(),
    ))
}

/// Removes the component along the base: `ambient - <base, ambient> base`.
/// Idempotent; kills both the radial and the global-phase directions.
pub fn project_horizontal(base: &PureState, ambient: &[Complex64]) -> Result<TangentVector> {
    if base.dim() != ambient.len() {
        return Err(Error::DimensionMismatch {
            left: base.dim(),
            right: ambient.len(),
        });
    }
    let c = inner(base.amplitudes(), ambient);
    let components = base
        .amplitudes()
        .iter()
        .zip(ambient)
        .map(|(b, a)| a - c * b)
        .collect();
    Ok(TangentVector {
        base: base.clone(),
        components,
    })
}

/// FS exponential map: cos(|v|) base + sin(|v|) v/|v|.
pub fn exp_map(v: &TangentVector) -> PureState {
    let theta = v.norm();
    if theta == 0.0 {
        return v.base.clone();
    }
    let (s, c) = theta.sin_cos();
    let f = s / theta;
    let amps = v
        .base
        .amplitudes()
        .iter()
        .zip(&v.components)
        .map(|(b, w)| c * b + f * w)
        .collect();
    PureState::from_raw(amps)
}

/// Initial velocity of the unique geodesic from `base` to `target`.
///
/// Errors with [`Error::OrthogonalStates`] at the cut locus. The returned
/// vector has norm equal to the FS distance.
pub fn log_map(base: &PureState, target: &PureState) -> Result<TangentVector> {
    let c = overlap(base, target)?;
    let m = c.norm();
    if m <= CUT_LOCUS_TOL {
        return Err(Error::OrthogonalStates);
    }
    let ph = (c / m).conj();
    // w = phase-aligned target minus its radial component; |w| = sin(r).
    let w: Vec<Complex64> = base
        .amplitudes()
        .iter()
        .zip(target.amplitudes())
        .map(|(b, t)| t * ph - m * b)
        .collect();
    let s = norm(&w);
    let r = s.atan2(m);
    if s < 1e-300 {
        return Ok(TangentVector::zero(base.clone()));
    }
    let f = r / s;
    Ok(TangentVector {
        base: base.clone(),
        components: w.into_iter().map(|z| z * f).collect(),
    })
}

/// Parallel transport of `w` from `base` to `target` along the connecting
/// geodesic.
///
/// Writing u for the unit initial velocity of the geodesic and a = <u, w>
/// for the complex coefficient of w along it, the transported vector is
/// `w + a ((cos r - 1) u - sin r base)`: the along-geodesic complex line
/// rotates with the geodesic and its complex-orthogonal complement is
/// unchanged. This preserves both the FS norm and the complex structure.
/// The result is anchored at the phase-aligned target and re-projected
/// horizontal there to scrub rounding residue.
pub fn parallel_transport(
    base: &PureState,
    target: &PureState,
    w: &TangentVector,
) -> Result<TangentVector> {
    if base.dim() != w.base.dim() {
        return Err(Error::DimensionMismatch {
            left: base.dim(),
            right: w.base.dim(),
        });
    }
    let c = overlap(base, target)?;
    let m = c.norm();
    if m <= CUT_LOCUS_TOL {
        return Err(Error::OrthogonalStates);
    }
    let ph = (c / m).conj();
    let aligned: Vec<Complex64> = target.amplitudes().iter().map(|z| z * ph).collect();
    let u_raw: Vec<Complex64> = base
        .amplitudes()
        .iter()
        .zip(&aligned)
        .map(|(b, t)| t - m * b)
        .collect();
    let s = norm(&u_raw);
    let aligned = PureState::from_raw(aligned);
    if s < 1e-300 {
        // Coincident points: transport is the identity.
        return Ok(TangentVector {
            base: aligned,
            components: w.components.clone(),
        });
    }
    let u: Vec<Complex64> = u_raw.into_iter().map(|z| z / s).collect();
    let r = s.atan2(m);
    let a = inner(&u, &w.components);
    let (sin_r, cos_r) = r.sin_cos();
    let moved: Vec<Complex64> = w
        .components
        .iter()
        .zip(&u)
        .zip(base.amplitudes())
        .map(|((wi, ui), bi)| wi + a * ((cos_r - 1.0) * ui - sin_r * bi))
        .collect();
    project_horizontal(&aligned, &moved)
}

/// Isotropic standard Gaussian on the (2d-2)-real-dimensional horizontal
/// space at `base`: draw a complex standard Gaussian in C^d (unit variance
/// per real component) and project. E |result|^2 = 2d - 2.
pub fn sample_horizontal_gaussian(base: &PureState, rng: &mut RngStream) -> TangentVector {
    let d = base.dim();
    let mut g = Vec::with_capacity(d);
    for _ in 0..d {
        let re = rng.normal();
        let im = rng.normal();
        g.push(Complex64::new(re, im));
    }
    project_horizontal(base, &g).expect("dimensions match by construction")
}

/// Haar-random pure state: normalized complex standard Gaussian vector.
pub fn haar_state(d: usize, rng: &mut RngStream) -> PureState {
    assert!(d >= 2);
    let mut g = Vec::with_capacity(d);
    for _ in 0..d {
        let re = rng.normal();
        let im = rng.normal();
        g.push(Complex64::new(re, im));
    }
    PureState::normalized(g).expect("Gaussian vector is nonzero almost surely")
}

/// A fixed orthonormal basis (under the real inner product) of the
/// horizontal space at `base`; exactly 2d-2 vectors.
pub fn horizontal_frame(base: &PureState) -> Vec<Vec<Complex64>> {
    let d = base.dim();
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(2 * d - 2);
    'cands: for j in 0..2 * d {
        if frame.len() == 2 * d - 2 {
            break;
        }
        let mut cand = vec![Complex64::new(0.0, 0.0); d];
        if j % 2 == 0 {
            cand[j / 2] = Complex64::new(1.0, 0.0);
        } else {
            cand[j / 2] = Complex64::new(0.0, 1.0);
        }
        let mut v = project_horizontal(base, &cand)
            .expect("dims match")
            .components;
        for f in &frame {
            let p = re_inner(f, &v);
            for (vi, fi) in v.iter_mut().zip(f) {
                *vi -= p * fi;
            }
        }
        let n = norm(&v);
        if n < 1e-6 {
            continue 'cands;
        }
        for vi in v.iter_mut() {
            *vi /= n;
        }
        frame.push(v);
    }
    assert_eq!(frame.len(), 2 * d - 2, "horizontal space has dim 2d-2");
    frame
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 1e-12;

    fn rand_state(d: usize, rng: &mut RngStream) -> PureState {
        haar_state(d, rng)
    }

    #[test]
    fn overlap_basics() {
        let e1 = PureState::basis(4, 0);
        let e2 = PureState::basis(4, 1);
        let o = overlap(&e1, &e1).unwrap();
        assert!((o.re - 1.0).abs() < TAU && o.im.abs() < TAU);
        assert!(overlap(&e1, &e2).unwrap().norm() < TAU);

        let mut rng = RngStream::new(1);
        let psi = rand_state(4, &mut rng);
        let theta = 0.7;
        let o = overlap(&psi, &psi.with_phase(theta)).unwrap();
        assert!((o.norm() - 1.0).abs() < TAU);
        assert!((o.arg() - theta).abs() < 1e-10);
    }

    #[test]
    fn overlap_dim_mismatch() {
        let a = PureState::basis(2, 0);
        let b = PureState::basis(4, 0);
        assert!(matches!(
            overlap(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fs_distance_basics() {
        let e1 = PureState::basis(2, 0);
        let e2 = PureState::basis(2, 1);
        assert!((fs_distance(&e1, &e2).unwrap() - std::f64::consts::FRAC_PI_2).abs() < TAU);

        let mut rng = RngStream::new(2);
        let psi = rand_state(4, &mut rng);
        assert!(fs_distance(&psi, &psi.with_phase(1.3)).unwrap() < 1e-7);

        let plus = PureState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        assert!((fs_distance(&e1, &plus).unwrap() - std::f64::consts::FRAC_PI_4).abs() < TAU);
    }

    #[test]
    fn phase_align_cases() {
        let e1 = PureState::basis(2, 0);
        let rotated = e1.with_phase(0.7);
        let back = phase_align(&e1, &rotated).unwrap();
        assert!((back.amplitudes()[0].re - 1.0).abs() < TAU);
        assert!(back.amplitudes()[0].im.abs() < TAU);

        let plus = PureState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let i_plus = plus.with_phase(std::f64::consts::FRAC_PI_2);
        let aligned = phase_align(&e1, &i_plus).unwrap();
        for (a, b) in aligned.amplitudes().iter().zip(plus.amplitudes()) {
            assert!((a - b).norm() < TAU);
        }

        let e2 = PureState::basis(2, 1);
        assert!(matches!(
            phase_align(&e1, &e2),
            Err(Error::OrthogonalStates)
        ));
    }

    #[test]
    fn projection_basics() {
        let e1 = PureState::basis(2, 0);
        let radial = project_horizontal(&e1, e1.amplitudes()).unwrap();
        assert!(radial.norm() < TAU);

        let phase_dir: Vec<Complex64> =
            e1.amplitudes().iter().map(|z| z * Complex64::i()).collect();
        assert!(project_horizontal(&e1, &phase_dir).unwrap().norm() < TAU);

        let e2 = PureState::basis(2, 1);
        let v = project_horizontal(&e1, e2.amplitudes()).unwrap();
        assert!((v.norm() - 1.0).abs() < TAU);
        assert!((v.components()[1].re - 1.0).abs() < TAU);

        // Idempotence on a generic ambient vector.
        let mut rng = RngStream::new(3);
        let base = rand_state(4, &mut rng);
        let amb: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.normal(), rng.normal()))
            .collect();
        let once = project_horizontal(&base, &amb).unwrap();
        let twice = project_horizontal(&base, once.components()).unwrap();
        for (a, b) in once.components().iter().zip(twice.components()) {
            assert!((a - b).norm() < TAU);
        }
    }

    #[test]
    fn exp_map_basics() {
        let e1 = PureState::basis(2, 0);
        let zero = TangentVector::zero(e1.clone());
        let same = exp_map(&zero);
        for (a, b) in same.amplitudes().iter().zip(e1.amplitudes()) {
            assert_eq!(a, b);
        }

        // Quarter great circle lands on e2 up to phase.
        let e2 = PureState::basis(2, 1);
        let v = log_map(&e1, &PureState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]).unwrap())
        .unwrap();
        let quarter = v.scaled(std::f64::consts::FRAC_PI_2 / v.norm());
        let out = exp_map(&quarter);
        assert!(fs_distance(&out, &e2).unwrap() < 1e-12);
    }

    #[test]
    fn log_map_basics() {
        let e1 = PureState::basis(2, 0);
        let z = log_map(&e1, &e1).unwrap();
        assert!(z.norm() < TAU);

        let plus = PureState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let v = log_map(&e1, &plus).unwrap();
        assert!((v.norm() - std::f64::consts::FRAC_PI_4).abs() < TAU);
        assert!(v.components()[0].norm() < TAU);
        assert!((v.components()[1].re - std::f64::consts::FRAC_PI_4).abs() < TAU);

        let e2 = PureState::basis(2, 1);
        assert!(matches!(log_map(&e1, &e2), Err(Error::OrthogonalStates)));
    }

    #[test]
    fn exp_log_roundtrip_random_pairs() {
        let mut rng = RngStream::new(4);
        for d in [2usize, 4, 16] {
            for _ in 0..200 {
                let a = rand_state(d, &mut rng);
                let b = rand_state(d, &mut rng);
                if overlap(&a, &b).unwrap().norm() < 1e-6 {
                    continue;
                }
                let v = log_map(&a, &b).unwrap();
                let back = exp_map(&v);
                assert!(fs_distance(&back, &b).unwrap() < 1e-10);
                assert!((v.norm() - fs_distance(&a, &b).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transport_identity_and_isometry() {
        let mut rng = RngStream::new(5);
        let psi = rand_state(4, &mut rng);
        let w = sample_horizontal_gaussian(&psi, &mut rng);
        let moved = parallel_transport(&psi, &psi, &w).unwrap();
        for (a, b) in moved.components().iter().zip(w.components()) {
            assert!((a - b).norm() < 1e-12);
        }

        for _ in 0..200 {
            let a = rand_state(4, &mut rng);
            let b = rand_state(4, &mut rng);
            if overlap(&a, &b).unwrap().norm() < 1e-6 {
                continue;
            }
            let w = sample_horizontal_gaussian(&a, &mut rng);
            let t = parallel_transport(&a, &b, &w).unwrap();
            assert!((t.norm() - w.norm()).abs() < 1e-10);
            // Horizontal at the phase-aligned target.
            let resid = inner(t.base().amplitudes(), t.components()).norm();
            assert!(resid < 1e-10);
        }
    }

    #[test]
    fn transport_of_geodesic_velocity() {
        // Transport of the geodesic's own velocity stays tangent to it.
        let e1 = PureState::basis(2, 0);
        let mid = PureState::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        let v = log_map(&e1, &mid).unwrap(); // norm pi/4 toward e2
        let t = parallel_transport(&e1, &mid, &v).unwrap();
        assert!((t.norm() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        // At the midpoint the geodesic velocity is (-e1 + e2)/sqrt(2) * r.
        let r = std::f64::consts::FRAC_PI_4;
        let exp0 = -r / 2f64.sqrt();
        let exp1 = r / 2f64.sqrt();
        assert!((t.components()[0].re - exp0).abs() < 1e-12);
        assert!((t.components()[1].re - exp1).abs() < 1e-12);
    }

    #[test]
    fn transport_roundtrip() {
        let mut rng = RngStream::new(6);
        for _ in 0..300 {
            let a = rand_state(4, &mut rng);
            let b = rand_state(4, &mut rng);
            if overlap(&a, &b).unwrap().norm() < 1e-6 {
                continue;
            }
            let w = sample_horizontal_gaussian(&a, &mut rng);
            let fwd = parallel_transport(&a, &b, &w).unwrap();
            let back = parallel_transport(fwd.base(), &a, &fwd).unwrap();
            // The return base is phase-aligned to fwd's base and equals a.
            for (x, y) in back.base().amplitudes().iter().zip(a.amplitudes()) {
                assert!((x - y).norm() < 1e-9);
            }
            for (x, y) in back.components().iter().zip(w.components()) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn transport_preserves_complex_structure() {
        let mut rng = RngStream::new(7);
        let a = rand_state(4, &mut rng);
        let b = rand_state(4, &mut rng);
        let w = sample_horizontal_gaussian(&a, &mut rng);
        let iw = TangentVector::new(
            a.clone(),
            w.components().iter().map(|z| z * Complex64::i()).collect(),
        )
        .unwrap();
        let tw = parallel_transport(&a, &b, &w).unwrap();
        let tiw = parallel_transport(&a, &b, &iw).unwrap();
        for (x, y) in tiw.components().iter().zip(tw.components()) {
            assert!((x - y * Complex64::i()).norm() < 1e-10);
        }
    }

    #[test]
    fn gaussian_horizontality_and_moments() {
        let mut rng = RngStream::new(8);
        let base = PureState::basis(2, 0);
        let n = 100_000;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let xi = sample_horizontal_gaussian(&base, &mut rng);
            assert!(inner(base.amplitudes(), xi.components()).norm() < 1e-10);
            sum_sq += xi.norm() * xi.norm();
        }
        let mean = sum_sq / n as f64;
        assert!((mean - 2.0).abs() < 0.05, "E|xi|^2 = {mean}, want 2 +- 0.05");
    }

    #[test]
    fn gaussian_covariance_identity() {
        // Empirical covariance in a fixed horizontal frame is the identity.
        let mut rng = RngStream::new(9);
        let base = haar_state(4, &mut rng);
        let frame = horizontal_frame(&base);
        let k = frame.len();
        assert_eq!(k, 6);
        let n = 100_000;
        let mut cov = vec![0.0; k * k];
        for _ in 0..n {
            let xi = sample_horizontal_gaussian(&base, &mut rng);
            let coords: Vec<f64> = frame.iter().map(|f| re_inner(f, xi.components())).collect();
            for i in 0..k {
                for j in 0..k {
                    cov[i * k + j] += coords[i] * coords[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let c = cov[i * k + j] / n as f64;
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (c - want).abs() < 0.02,
                    "cov[{i}][{j}] = {c}, want {want} +- 0.02"
                );
            }
        }
    }

    #[test]
    fn haar_moments() {
        let mut rng = RngStream::new(10);
        let e1 = PureState::basis(4, 0);
        let n = 100_000;
        let mut m2 = 0.0;
        let mut m4 = 0.0;
        for _ in 0..n {
            let psi = haar_state(4, &mut rng);
            assert!((norm(psi.amplitudes()) - 1.0).abs() < 1e-12);
            let f = overlap(&psi, &e1).unwrap().norm_sqr();
            m2 += f;
            m4 += f * f;
        }
        m2 /= n as f64;
        m4 /= n as f64;
        assert!((m2 - 0.25).abs() < 0.005, "E|<psi,e1>|^2 = {m2}");
        assert!((m4 - 0.1).abs() < 0.005, "E|<psi,e1>|^4 = {m4}");
    }

    #[test]
    fn gauge_invariance() {
        let mut rng = RngStream::new(11);
        for _ in 0..100 {
            let a = rand_state(4, &mut rng);
            let b = rand_state(4, &mut rng);
            let ta = rng.uniform() * 6.0;
            let tb = rng.uniform() * 6.0;
            let a2 = a.with_phase(ta);
            let b2 = b.with_phase(tb);
            let d0 = fs_distance(&a, &b).unwrap();
            let d1 = fs_distance(&a2, &b2).unwrap();
            assert!((d0 - d1).abs() < 1e-12);
            if overlap(&a, &b).unwrap().norm() > 1e-6 {
                let l0 = log_map(&a, &b).unwrap().norm();
                let l1 = log_map(&a2, &b2).unwrap().norm();
                assert!((l0 - l1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = RngStream::new(12);
        for _ in 0..500 {
            let a = rand_state(4, &mut rng);
            let b = rand_state(4, &mut rng);
            let c = rand_state(4, &mut rng);
            let ab = fs_distance(&a, &b).unwrap();
            let bc = fs_distance(&b, &c).unwrap();
            let ac = fs_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-12);
        }
    }

    #[test]
    fn frame_is_orthonormal() {
        let mut rng = RngStream::new(13);
        for d in [2usize, 4, 8] {
            let base = rand_state(d, &mut rng);
            let frame = horizontal_frame(&base);
            assert_eq!(frame.len(), 2 * d - 2);
            for (i, f) in frame.iter().enumerate() {
                assert!(inner(base.amplitudes(), f).norm() < 1e-10);
                for (j, g) in frame.iter().enumerate() {
                    let p = re_inner(f, g);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((p - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn state_validation() {
        let bad = vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)];
        assert!(matches!(
            PureState::new(bad.clone()),
            Err(Error::NotUnitNorm { .. })
        ));
        assert!(PureState::normalized(bad).is_ok());
        let zero = vec![Complex64::new(0.0, 0.0); 3];
        assert!(PureState::normalized(zero).is_err());
    }

    #[test]
    fn tangent_validation() {
        let e1 = PureState::basis(2, 0);
        let not_horizontal = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            TangentVector::new(e1, not_horizontal),
            Err(Error::NotHorizontal { .. })
        ));
    }
}
