//! Dense complex linear algebra for quantum observables.
//!
//! Everything here targets the small dimensions of the experiments
//! (d <= 64, reduced density matrices up to 8x8): dense row-major storage,
//! a cyclic Jacobi eigensolver on the real-symmetric embedding of a
//! Hermitian matrix, partial traces over trailing qubits, and von Neumann
//! entropy in nats.

use num_complex::Complex64;

use crate::geometry::PureState;
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix, row-major.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    entries: Vec<Complex64>,
    dim: usize,
}

impl HermitianOperator {
    pub fn new(entries: Vec<Complex64>, dim: usize) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        let mut deviation: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let delta = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                deviation = deviation.max(delta);
            }
        }
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { entries, dim })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Matrix-vector product O psi.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(psi) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert-Schmidt inner product Tr(A B) for Hermitian A, B.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        acc.re
    }
}

/// Density matrix: Hermitian, trace one, positive semidefinite.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: Vec<Complex64>,
    dim: usize,
}

impl DensityMatrix {
    pub fn new(entries: Vec<Complex64>, dim: usize) -> Result<Self> {
        let op = HermitianOperator::new(entries, dim)?;
        let tr = op.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {} + {}i is not 1",
                tr.re, tr.im
            )));
        }
        let evals = hermitian_eigenvalues(&op)?;
        if let Some(min) = evals.first() {
            if *min < -1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "density matrix has negative eigenvalue {min}"
                )));
            }
        }
        Ok(Self {
            entries: op.entries,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn as_operator(&self) -> HermitianOperator {
        HermitianOperator {
            entries: self.entries.clone(),
            dim: self.dim,
        }
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.as_operator())
    }
}

fn kron(a: &[Complex64], ad: usize, b: &[Complex64], bd: usize) -> Vec<Complex64> {
    let d = ad * bd;
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..ad {
        for j in 0..ad {
            let f = a[i * ad + j];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..bd {
                for l in 0..bd {
                    out[(i * bd + k) * d + (j * bd + l)] = f * b[k * bd + l];
                }
            }
        }
    }
    out
}

fn pauli_2x2(which: usize) -> Vec<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match which {
        0 => vec![z, one, one, z],        // X
        1 => vec![z, -i, i, z],           // Y
        _ => vec![one, z, z, -one],       // Z
    }
}

fn identity(d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        out[i * d + i] = Complex64::new(1.0, 0.0);
    }
    out
}

/// The 3n single-qubit observables X_i, Y_i, Z_i on n qubits, each acting
/// as identity on the other qubits. Qubit 0 owns the most significant bit
/// of the basis index.
pub fn pauli_observables(n_qubits: usize) -> Vec<HermitianOperator> {
    assert!(n_qubits >= 1);
    let d = 1usize << n_qubits;
    let mut ops = Vec::with_capacity(3 * n_qubits);
    for q in 0..n_qubits {
        for p in 0..3 {
            let left = identity(1 << q);
            let mid = kron(&left, 1 << q, &pauli_2x2(p), 2);
            let right = identity(1 << (n_qubits - 1 - q));
            let full = kron(&mid, 1 << (q + 1), &right, 1 << (n_qubits - 1 - q));
            ops.push(HermitianOperator {
                entries: full,
                dim: d,
            });
        }
    }
    ops
}

/// Generalized Gell-Mann basis of su(d): d^2 - 1 Hermitian traceless
/// matrices with Tr(G_j G_k) = 2 delta_jk. For d = 2 these are the Pauli
/// matrices.
pub fn gell_mann_basis(d: usize) -> Vec<HermitianOperator> {
    assert!(d >= 2);
    let z = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(d * d - 1);
    // Symmetric pairs E_jk + E_kj.
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = vec![z; d * d];
            m[j * d + k] = Complex64::new(1.0, 0.0);
            m[k * d + j] = Complex64::new(1.0, 0.0);
            out.push(HermitianOperator { entries: m, dim: d });
        }
    }
    // Antisymmetric pairs -i E_jk + i E_kj.
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = vec![z; d * d];
            m[j * d + k] = Complex64::new(0.0, -1.0);
            m[k * d + j] = Complex64::new(0.0, 1.0);
            out.push(HermitianOperator { entries: m, dim: d });
        }
    }
    // Diagonal generators.
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut m = vec![z; d * d];
        for j in 0..l {
            m[j * d + j] = Complex64::new(norm, 0.0);
        }
        m[l * d + l] = Complex64::new(-norm * l as f64, 0.0);
        out.push(HermitianOperator { entries: m, dim: d });
    }
    out
}

/// Real expectation value <psi| O |psi>.
pub fn expectation(op: &HermitianOperator, psi: &PureState) -> Result<f64> {
    if op.dim != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim,
            right: psi.dim(),
        });
    }
    let o_psi = op.apply(psi.amplitudes());
    let val = crate::geometry::inner(psi.amplitudes(), &o_psi);
    assert!(
        val.im.abs() < 1e-12,
        "expectation of a Hermitian operator has imaginary residue {}",
        val.im
    );
    Ok(val.re)
}

/// Reduced density matrix of the first `n_keep` qubits (big-endian bit
/// order): (rho_A)_ab = sum_c psi[(a,c)] conj(psi[(b,c)]) with the joint
/// index (a,c) = a * 2^(n_total - n_keep) + c.
pub fn partial_trace_first(
    psi: &PureState,
    n_keep: usize,
    n_total: usize,
) -> Result<DensityMatrix> {
    let d = psi.dim();
    if d != (1usize << n_total) {
        return Err(Error::NotPowerOfTwo { dim: d });
    }
    if n_keep == 0 || n_keep >= n_total {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_keep < n_total, got {n_keep} of {n_total}"
        )));
    }
    let da = 1usize << n_keep;
    let dc = 1usize << (n_total - n_keep);
    let amps = psi.amplitudes();
    let mut rho = vec![Complex64::new(0.0, 0.0); da * da];
    for a in 0..da {
        for b in 0..da {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..dc {
                acc += amps[a * dc + c] * amps[b * dc + c].conj();
            }
            rho[a * da + b] = acc;
        }
    }
    DensityMatrix::new(rho, da)
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFFDIAG_TOL: f64 = 1e-12;
const PAIR_GAP_TOL: f64 = 1e-9;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// H = A + iB is embedded into the real symmetric 2m x 2m matrix
/// [[A, -B], [B, A]], diagonalized by cyclic Jacobi sweeps; the real
/// spectrum appears in duplicated pairs which are returned once each.
pub fn hermitian_eigenvalues(op: &HermitianOperator) -> Result<Vec<f64>> {
    let m = op.dim;
    let n = 2 * m;
    let mut a = vec![0.0f64; n * n];
    for i in 0..m {
        for j in 0..m {
            let z = op.get(i, j);
            a[i * n + j] = z.re;
            a[i * n + (m + j)] = -z.im;
            a[(m + i) * n + j] = z.im;
            a[(m + i) * n + (m + j)] = z.re;
        }
    }

    let mut converged = false;
    let mut max_off = 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a[p * n + q].abs());
            }
        }
        if max_off < JACOBI_OFFDIAG_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < JACOBI_OFFDIAG_TOL {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            offdiag: max_off,
        });
    }

    let mut evals: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    evals.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    let mut out = Vec::with_capacity(m);
    for pair in evals.chunks(2) {
        let gap = (pair[1] - pair[0]).abs();
        if gap > PAIR_GAP_TOL {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue pair mismatch {gap:e}; embedding spectrum is not doubled"
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Von Neumann entropy -sum lambda ln lambda in nats, eigenvalues clamped
/// to [0, 1] and 0 ln 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let evals = rho.eigenvalues()?;
    let mut s = 0.0;
    for lam in evals {
        let lam = lam.clamp(0.0, 1.0);
        if lam > 0.0 {
            s -= lam * lam.ln();
        }
    }
    Ok(s.max(0.0))
}
