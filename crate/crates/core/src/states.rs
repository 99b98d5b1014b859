//! Two-qubit states: validated density matrices, X states, the Fano
//! (Pauli-basis) decomposition and Haar-random single-qubit inputs.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::qmath::{
    hermitian_eig, kron, paulis, ComplexMatrix, Real3, HERMITIAN_TOL, PSD_CLAMP, ZERO,
};

/// Tolerance on `Tr ρ = 1`.
pub const TRACE_TOL: f64 = 1e-10;

/// Off-X entries at or below this magnitude are treated as zero.
pub const X_STATE_TOL: f64 = 1e-10;

/// A 4×4 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::identity(4).scale_real(0.25),
        }
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }
}

/// Checks the three density-matrix conditions on a 4×4 matrix.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::BadPartition(format!(
            "two-qubit state must be 4x4, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::BadTrace(tr.re));
    }
    let min = hermitian_eig(m)?.min_value();
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    Ok(DensityMatrix { mat: m.clone() })
}

/// X state parameters: the diagonal plus the two anti-diagonal coherences.
///
/// In the computational basis |00⟩, |01⟩, |10⟩, |11⟩ the matrix is
///
/// ```text
/// ρ11  0    0    ρ14
/// 0    ρ22  ρ23  0
/// 0    ρ23* ρ33  0
/// ρ14* 0    0    ρ44
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho14: Complex64,
    pub rho23: Complex64,
}

impl XState {
    pub fn new(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Result<Self> {
        let x = Self {
            rho11,
            rho22,
            rho33,
            rho44,
            rho14,
            rho23,
        };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<()> {
        let diag = [self.rho11, self.rho22, self.rho33, self.rho44];
        let sum: f64 = diag.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadTrace(sum));
        }
        if let Some(&neg) = diag.iter().find(|&&d| d < -1e-12) {
            return Err(Error::NotPsd(neg));
        }
        let outer = self.rho11 * self.rho44 - self.rho14.norm_sqr();
        let inner = self.rho22 * self.rho33 - self.rho23.norm_sqr();
        if outer < -1e-12 || inner < -1e-12 {
            return Err(Error::NotPsd(outer.min(inner)));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::diag_real(&[self.rho11, self.rho22, self.rho33, self.rho44]);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        validate_density(&self.to_matrix())
    }
}

/// Reads off the X-state parameters, failing if any off-X entry is nonzero.
pub fn as_x_state(rho: &DensityMatrix) -> Result<XState> {
    let m = rho.matrix();
    for i in 0..4 {
        for j in 0..4 {
            let on_x = i == j || i + j == 3;
            if !on_x && m[(i, j)].norm() > X_STATE_TOL {
                return Err(Error::NotXState {
                    row: i,
                    col: j,
                    magnitude: m[(i, j)].norm(),
                });
            }
        }
    }
    Ok(XState {
        rho11: m[(0, 0)].re,
        rho22: m[(1, 1)].re,
        rho33: m[(2, 2)].re,
        rho44: m[(3, 3)].re,
        rho14: m[(0, 3)],
        rho23: m[(1, 2)],
    })
}

/// Local Bloch vectors `r`, `s` and correlation matrix `T` of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoForm {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: Real3,
}

impl FanoForm {
    pub fn max_abs_diff(&self, other: &FanoForm) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..3 {
            worst = worst.max((self.r[j] - other.r[j]).abs());
            worst = worst.max((self.s[j] - other.s[j]).abs());
            for n in 0..3 {
                worst = worst.max((self.t[j][n] - other.t[j][n]).abs());
            }
        }
        worst
    }
}

/// `r_j = Tr(ρ σ_j⊗I)`, `s_j = Tr(ρ I⊗σ_j)`, `T_mn = Tr(ρ σ_m⊗σ_n)`.
pub fn fano_decompose(rho: &DensityMatrix) -> FanoForm {
    let sigma = paulis();
    let id = ComplexMatrix::identity(2);
    let m = rho.matrix();
    let expect = |op: &ComplexMatrix| (m * op).trace().re;

    let mut form = FanoForm {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for j in 0..3 {
        form.r[j] = expect(&kron(&sigma[j], &id));
        form.s[j] = expect(&kron(&id, &sigma[j]));
        for n in 0..3 {
            form.t[j][n] = expect(&kron(&sigma[j], &sigma[n]));
        }
    }
    form
}

/// Rebuilds `ρ = ¼(I⊗I + r·σ⊗I + I⊗s·σ + Σ T_mn σ_m⊗σ_n)` and validates it.
pub fn fano_compose(f: &FanoForm) -> Result<DensityMatrix> {
    let sigma = paulis();
    let id = ComplexMatrix::identity(2);
    let mut m = ComplexMatrix::identity(4);
    for j in 0..3 {
        m = &m + &kron(&sigma[j], &id).scale_real(f.r[j]);
        m = &m + &kron(&id, &sigma[j]).scale_real(f.s[j]);
        for n in 0..3 {
            m = &m + &kron(&sigma[j], &sigma[n]).scale_real(f.t[j][n]);
        }
    }
    validate_density(&m.scale_real(0.25))
}

/// `α|00⟩ + β|11⟩` with `|α|² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureTwoQubit {
    alpha: Complex64,
    beta: Complex64,
}

impl PureTwoQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgs(format!(
                "|alpha|^2 + |beta|^2 = {norm}, expected 1"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Takes `β = √(1 − |α|²)` real and non-negative.
    pub fn from_alpha(alpha: Complex64) -> Result<Self> {
        let a2 = alpha.norm_sqr();
        if a2 > 1.0 + 1e-12 || !a2.is_finite() {
            return Err(Error::AlphaOutOfRange(alpha.norm()));
        }
        Ok(Self {
            alpha,
            beta: Complex64::new((1.0 - a2).max(0.0).sqrt(), 0.0),
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Amplitudes in the order |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.alpha, ZERO, ZERO, self.beta]
    }
}

pub fn pure_projector(psi: &PureTwoQubit) -> DensityMatrix {
    let amps = psi.amplitudes();
    DensityMatrix {
        mat: ComplexMatrix::outer(&amps, &amps),
    }
}

/// Haar-uniform pure qubit `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` with
/// `cos θ` uniform on [−1, 1] and `φ` uniform on [0, 2π).
pub fn sample_haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [Complex64; 2] {
    let cos_theta: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let c = ((1.0 + cos_theta) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - cos_theta) / 2.0).max(0.0).sqrt();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]
}

/// Random X state: exponential populations, coherences uniform in the
/// allowed disks `|ρ14| ≤ √(ρ11ρ44)`, `|ρ23| ≤ √(ρ22ρ33)`.
pub fn sample_x_state<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let w: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = w.iter().sum();
    let [r11, r22, r33, r44] = w.map(|v| v / total);
    let mut disk = |bound: f64| {
        let radius = bound * rng.random::<f64>().sqrt();
        Complex64::from_polar(radius, std::f64::consts::TAU * rng.random::<f64>())
    };
    let rho14 = disk((r11 * r44).sqrt());
    let rho23 = disk((r22 * r33).sqrt());
    // Renormalize the last population so the trace is exactly one.
    let rho44 = 1.0 - r11 - r22 - r33;
    XState {
        rho11: r11,
        rho22: r22,
        rho33: r33,
        rho44,
        rho14,
        rho23,
    }
}
