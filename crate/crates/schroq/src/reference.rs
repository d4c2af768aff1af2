//! Ground truth for validation: a dense discretized Hamiltonian with exact
//! spectral evolution, analytic energy levels and eigenfunctions, and the
//! library of initial states used by the experiment presets.
//!
//! The dense Hamiltonian deliberately uses the *circuits' own* discrete
//! kinetic operator, K = F diag(p_j^2/2) F^dag with F the grid Fourier
//! transform of the mesh convention, rather than a finite-difference
//! Laplacian.  That makes the oracle share the discretization with the
//! circuit path exactly, so comparisons against it isolate the Trotter
//! error.  For the Coulomb potential the oracle likewise uses the truncated
//! reciprocal surrogate by default; an exact-1/|x| variant exists to
//! quantify the surrogate's effect separately.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{coulomb_surrogate_value, PotentialSpec};
use crate::mesh_qft::{MeshConvention, MeshKind, SampledWavefunction};

/// Which discrete model of -kappa/|x| the oracle uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoulombModel {
    /// The truncated reciprocal expansion, identical to the circuit.
    TruncatedReciprocal,
    /// The exact 1/|x_k| values.
    Exact,
}

/// Dense N x N Hermitian discretization of H = p^2/2 + V(x), with its
/// eigensystem precomputed (ascending eigenvalues, orthonormal vectors).
#[derive(Debug, Clone)]
pub struct DenseHamiltonian {
    matrix: DMatrix<Complex64>,
    convention: MeshConvention,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Oracle Hamiltonian with the circuit-matching Coulomb surrogate.
pub fn dense_hamiltonian(pot: &PotentialSpec, conv: MeshConvention) -> Result<DenseHamiltonian> {
    dense_hamiltonian_with(pot, conv, CoulombModel::TruncatedReciprocal)
}

/// Oracle Hamiltonian with an explicit choice of Coulomb model.
pub fn dense_hamiltonian_with(
    pot: &PotentialSpec,
    conv: MeshConvention,
    coulomb: CoulombModel,
) -> Result<DenseHamiltonian> {
    let n = conv.num_points();
    if n > 64 {
        return Err(Error::Unsupported(format!(
            "dense oracle limited to 64 points, got {n}"
        )));
    }
    if matches!(pot, PotentialSpec::Coulomb { .. }) {
        if conv.kind() != MeshKind::Symmetric {
            return Err(Error::InvalidParameter(
                "coulomb oracle requires the symmetric mesh (x = 0 excluded)".into(),
            ));
        }
        if coulomb == CoulombModel::TruncatedReciprocal && n != 16 {
            return Err(Error::Unsupported(
                "the truncated-reciprocal surrogate is defined on the 16-point mesh".into(),
            ));
        }
    }

    let nf = n as f64;
    let c = conv.offset();
    let scale = Complex64::new(1.0 / nf.sqrt(), 0.0);
    // F[k][j] = (1/sqrt(N)) e^{2 pi i (j - Nc)(k/N - c)} maps momentum
    // amplitudes to coordinate amplitudes.
    let f = DMatrix::from_fn(n, n, |k, j| {
        scale * Complex64::cis(TAU * (j as f64 - nf * c) * (k as f64 / nf - c))
    });
    let momenta = conv.momentum_points();
    let kin_diag = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(momenta[i] * momenta[i] / 2.0, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    let mut h = &f * kin_diag * f.adjoint();

    let xs = conv.mesh_points();
    for k in 0..n {
        let v = match (pot, coulomb) {
            (PotentialSpec::Coulomb { strength }, CoulombModel::TruncatedReciprocal) => {
                coulomb_surrogate_value(*strength, k)
            }
            _ => pot.value(xs[k]),
        };
        h[(k, k)] += Complex64::new(v, 0.0);
    }

    // symmetrize away the last bits of rounding before the eigensolver
    let h = (h.clone() + h.adjoint()) * Complex64::new(0.5, 0.0);

    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(i));
    }

    Ok(DenseHamiltonian {
        matrix: h,
        convention: conv,
        eigenvalues,
        eigenvectors,
    })
}

impl DenseHamiltonian {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn convention(&self) -> MeshConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// n-th eigenvector as a grid wavefunction (arbitrary global phase).
    pub fn eigenvector(&self, n: usize) -> Result<SampledWavefunction> {
        if n >= self.dim() {
            return Err(Error::IndexOutOfRange { index: n, dim: self.dim() });
        }
        SampledWavefunction::new(
            self.convention,
            self.eigenvectors.column(n).iter().copied().collect(),
        )
    }

    /// Largest deviation from Hermiticity, |H - H^dag|_max.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.matrix - self.matrix.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// e^{-iHt} as a dense matrix via the spectral decomposition.
    pub fn evolution_matrix(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let phases = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::cis(-self.eigenvalues[i] * t)
            } else {
                Complex64::ZERO
            }
        });
        &self.eigenvectors * phases * self.eigenvectors.adjoint()
    }

    /// Applies e^{-iHt} to grid samples.
    pub fn exact_evolution(&self, state: &SampledWavefunction, t: f64) -> Result<SampledWavefunction> {
        if state.convention() != self.convention {
            return Err(Error::InvalidParameter(
                "state and Hamiltonian use different mesh conventions".into(),
            ));
        }
        let v = DVector::from_column_slice(state.values());
        // project, phase, resum
        let coeffs = self.eigenvectors.adjoint() * v;
        let mut out = DVector::from_element(self.dim(), Complex64::ZERO);
        for n in 0..self.dim() {
            let ph = Complex64::cis(-self.eigenvalues[n] * t);
            out += self.eigenvectors.column(n) * (coeffs[n] * ph);
        }
        SampledWavefunction::new(self.convention, out.iter().copied().collect())
    }

    /// Expansion coefficients <v_n|psi> of grid samples over the eigenbasis.
    pub fn expansion_coefficients(&self, state: &SampledWavefunction) -> Vec<Complex64> {
        let v = DVector::from_column_slice(state.values());
        (self.eigenvectors.adjoint() * v).iter().copied().collect()
    }
}

/// One bound state of the finite square well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellLevel {
    pub energy: f64,
    /// true for even-parity states.
    pub even: bool,
    /// Residual of the matching condition at the returned energy.
    pub residual: f64,
}

/// All bound states of the finite well, found by scanning E through
/// (-V0, 0) in steps of V0/1000 and bisecting each bracketed sign change.
///
/// The even and odd matching conditions k tan(ka) = kap and
/// -k cot(ka) = kap are used in their pole-free forms
/// k sin(ka) - kap cos(ka) and k cos(ka) + kap sin(ka).
pub fn square_well_levels(depth: f64, half_width: f64) -> Vec<WellLevel> {
    let even_fn = |e: f64| {
        let k = (2.0 * (depth + e)).sqrt();
        let kap = (-2.0 * e).sqrt();
        k * (k * half_width).sin() - kap * (k * half_width).cos()
    };
    let odd_fn = |e: f64| {
        let k = (2.0 * (depth + e)).sqrt();
        let kap = (-2.0 * e).sqrt();
        k * (k * half_width).cos() + kap * (k * half_width).sin()
    };

    let mut levels = Vec::new();
    for (even, f) in [(true, &even_fn as &dyn Fn(f64) -> f64), (false, &odd_fn)] {
        let steps = 1000usize;
        let margin = depth * 1e-9;
        let lo = -depth + margin;
        let hi = -margin;
        let mut prev_e = lo;
        let mut prev_f = f(prev_e);
        for i in 1..=steps {
            let e = lo + (hi - lo) * i as f64 / steps as f64;
            let fe = f(e);
            if prev_f == 0.0 || prev_f.signum() != fe.signum() {
                let (mut a, mut b) = (prev_e, e);
                let mut fa = prev_f;
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if b - a < 1e-13 {
                        break;
                    }
                    let fm = f(m);
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if fa.signum() != fm.signum() {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                let root = 0.5 * (a + b);
                levels.push(WellLevel {
                    energy: root,
                    even,
                    residual: f(root).abs(),
                });
            }
            prev_e = e;
            prev_f = fe;
        }
    }
    levels.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    levels
}

/// Analytic energy levels of the potential, ascending.  The harmonic and
/// Coulomb towers are truncated at twelve entries; the Coulomb list is the
/// odd-sector tower -kappa^2/(2 n^2).
pub fn analytic_levels(pot: &PotentialSpec) -> Vec<f64> {
    match pot {
        PotentialSpec::Harmonic { omega } => {
            (0..12).map(|n| omega * (n as f64 + 0.5)).collect()
        }
        PotentialSpec::SquareWell { depth, half_width } => square_well_levels(*depth, *half_width)
            .into_iter()
            .map(|l| l.energy)
            .collect(),
        PotentialSpec::Coulomb { strength } => (1..=12)
            .map(|n| -strength * strength / (2.0 * (n * n) as f64))
            .collect(),
    }
}

fn hermite(n: usize, y: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * y;
    for m in 1..n {
        let h2 = 2.0 * y * h1 - 2.0 * m as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Analytic eigenfunction samples, normalized on the grid.
///
/// Harmonic: Hermite-Gaussian phi_n.  Square well: the piecewise
/// trigonometric/exponential bound state of the n-th level.  Coulomb: the
/// odd hydrogen-like states x L_{n-1}^1(2 kappa |x|/n) e^{-kappa |x|/n},
/// n = 1..3.
pub fn analytic_eigenfunction(
    pot: &PotentialSpec,
    n: usize,
    conv: MeshConvention,
) -> Result<SampledWavefunction> {
    match pot {
        PotentialSpec::Harmonic { omega } => {
            let w = *omega;
            SampledWavefunction::from_fn(conv, |x| {
                Complex64::new(hermite(n, w.sqrt() * x) * (-w * x * x / 2.0).exp(), 0.0)
            })
        }
        PotentialSpec::SquareWell { depth, half_width } => {
            let levels = square_well_levels(*depth, *half_width);
            let level = levels
                .get(n)
                .copied()
                .ok_or(Error::IndexOutOfRange { index: n, dim: levels.len() })?;
            let k = (2.0 * (depth + level.energy)).sqrt();
            let kap = (-2.0 * level.energy).sqrt();
            let a = *half_width;
            SampledWavefunction::from_fn(conv, move |x| {
                let v = if level.even {
                    if x.abs() <= a {
                        (k * x).cos()
                    } else {
                        (k * a).cos() * (-kap * (x.abs() - a)).exp()
                    }
                } else if x.abs() <= a {
                    (k * x).sin()
                } else {
                    x.signum() * (k * a).sin() * (-kap * (x.abs() - a)).exp()
                };
                Complex64::new(v, 0.0)
            })
        }
        PotentialSpec::Coulomb { strength } => {
            let kap = *strength;
            let quantum_n = n + 1;
            let poly: Box<dyn Fn(f64) -> f64> = match quantum_n {
                1 => Box::new(|_r: f64| 1.0),
                2 => Box::new(move |r: f64| 1.0 - kap * r / 2.0),
                3 => Box::new(move |r: f64| {
                    1.0 - 2.0 * kap * r / 3.0 + 2.0 * (kap * r) * (kap * r) / 27.0
                }),
                _ => {
                    return Err(Error::Unsupported(
                        "coulomb eigenfunctions provided for n = 1..3".into(),
                    ))
                }
            };
            SampledWavefunction::from_fn(conv, move |x| {
                let r = x.abs();
                Complex64::new(x * poly(r) * (-kap * r / quantum_n as f64).exp(), 0.0)
            })
        }
    }
}

/// Names accepted by [`initial_state_library`].
pub const INITIAL_STATE_NAMES: &[&str] = &[
    "gauss100",
    "x-gauss100",
    "x2-gauss100",
    "sech2-20",
    "gauss20",
    "x-gauss20",
    "x-exp10",
    "x-absx-exp10",
];

/// The preset initial states, sampled on the mesh and normalized.
///
/// * `gauss100`, `x-gauss100`, `x2-gauss100` — e^{-omega x^2/2} times 1, x,
///   x^2 at omega = 100 (ground, first and ground+second mix of the
///   matching oscillator);
/// * `sech2-20` — 1/cosh^2(20 x);
/// * `gauss20`, `x-gauss20` — e^{-10 x^2} and x e^{-10 x^2} (square-well
///   probes);
/// * `x-exp10`, `x-absx-exp10` — x e^{-10|x|} and x|x| e^{-10|x|} (Coulomb
///   probes).
pub fn initial_state_library(name: &str, conv: MeshConvention) -> Result<SampledWavefunction> {
    let f: Box<dyn Fn(f64) -> f64> = match name {
        "gauss100" => Box::new(|x: f64| (-50.0 * x * x).exp()),
        "x-gauss100" => Box::new(|x: f64| x * (-50.0 * x * x).exp()),
        "x2-gauss100" => Box::new(|x: f64| x * x * (-50.0 * x * x).exp()),
        "sech2-20" => Box::new(|x: f64| {
            let c = (20.0 * x).cosh();
            1.0 / (c * c)
        }),
        "gauss20" => Box::new(|x: f64| (-10.0 * x * x).exp()),
        "x-gauss20" => Box::new(|x: f64| x * (-10.0 * x * x).exp()),
        "x-exp10" => Box::new(|x: f64| x * (-10.0 * x.abs()).exp()),
        "x-absx-exp10" => Box::new(|x: f64| x * x.abs() * (-10.0 * x.abs()).exp()),
        _ => {
            return Err(Error::UnknownInitialState {
                name: name.to_string(),
                valid: INITIAL_STATE_NAMES.join(", "),
            })
        }
    };
    SampledWavefunction::from_fn(conv, |x| Complex64::new(f(x), 0.0))
}
