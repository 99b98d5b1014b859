//! Concurrence (pure, Wootters general, X-state closed form) and the
//! partial-transpose separability test.

use num_complex::Complex64;

use crate::error::Result;
use crate::qmath::{hermitian_eig, kron, pauli, psd_sqrt, ComplexMatrix, PSD_CLAMP};
use crate::states::{DensityMatrix, XState};

/// Which argument of the concurrence maximum was active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConcurrenceBranch {
    /// The state is separable.
    Zero,
    /// `|ρ23| − √(ρ11ρ44)`: coherence between |01⟩ and |10⟩.
    AntiDiagonal,
    /// `|ρ14| − √(ρ22ρ33)`: coherence between |00⟩ and |11⟩.
    Diagonal,
    /// Entangled, computed from the spin-flip spectrum (no X structure used).
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    pub branch: ConcurrenceBranch,
}

/// `ρ′ = (σ₂⊗σ₂) ρ* (σ₂⊗σ₂)`.
pub fn spin_flip_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&pauli(1), &pauli(1));
    &(&yy * &m.conj()) * &yy
}

pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    spin_flip_matrix(rho.matrix())
}

/// `2|ad − bc|` for `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩`.
pub fn concurrence_pure(psi: &[Complex64; 4]) -> f64 {
    let [a, b, c, d] = *psi;
    2.0 * (a * d - b * c).norm()
}

/// `λ₁ ≥ … ≥ λ₄`, the square roots of the eigenvalues of `ρρ′`.
///
/// `√ρ ρ′ √ρ` is Hermitian with the same spectrum as `ρρ′`, and it equals
/// `A A†` for `A = √ρ √ρ′`. The `λᵢ` are therefore the singular values of
/// `A`, read off as the non-negative eigenvalues of the Hermitian embedding
/// `[[0, A], [A†, 0]]`. Going through singular values keeps the absolute
/// error of small `λᵢ` at machine precision; square-rooting computed `νᵢ`
/// would inflate 1e-16 noise to 1e-8.
pub fn spin_flip_roots(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho.matrix())?;
    let root_flipped = spin_flip_matrix(&root);
    let a = &root * &root_flipped;
    let mut embed = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            embed[(i, 4 + j)] = a[(i, j)];
            embed[(4 + j, i)] = a[(i, j)].conj();
        }
    }
    let eig = hermitian_eig(&embed)?;
    let mut lam = [0.0; 4];
    for (dst, &v) in lam.iter_mut().zip(&eig.values) {
        *dst = v.max(0.0);
    }
    Ok(lam)
}

/// Eigenvalues `ν₁ ≥ … ≥ ν₄` of `ρρ′`.
pub fn spin_flip_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    Ok(spin_flip_roots(rho)?.map(|l| l * l))
}

/// Wootters concurrence `max{√ν₁ − √ν₂ − √ν₃ − √ν₄, 0}`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let lam = spin_flip_roots(rho)?;
    let arg = lam[0] - lam[1] - lam[2] - lam[3];
    Ok(if arg > 0.0 {
        ConcurrenceResult {
            value: arg,
            branch: ConcurrenceBranch::Spectral,
        }
    } else {
        ConcurrenceResult {
            value: 0.0,
            branch: ConcurrenceBranch::Zero,
        }
    })
}

/// `2·max{0, |ρ23| − √(ρ11ρ44), |ρ14| − √(ρ22ρ33)}`.
pub fn concurrence_x(x: &XState) -> ConcurrenceResult {
    let anti = x.rho23.norm() - (x.rho11 * x.rho44).max(0.0).sqrt();
    let diag = x.rho14.norm() - (x.rho22 * x.rho33).max(0.0).sqrt();
    if diag > 0.0 && diag >= anti {
        ConcurrenceResult {
            value: 2.0 * diag,
            branch: ConcurrenceBranch::Diagonal,
        }
    } else if anti > 0.0 {
        ConcurrenceResult {
            value: 2.0 * anti,
            branch: ConcurrenceBranch::AntiDiagonal,
        }
    } else {
        ConcurrenceResult {
            value: 0.0,
            branch: ConcurrenceBranch::Zero,
        }
    }
}

/// Transpose of the second qubit: `⟨ij|ρ^{T_B}|kl⟩ = ⟨il|ρ|kj⟩`.
pub fn partial_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = m[(2 * i + l, 2 * k + j)];
                }
            }
        }
    }
    out
}

/// Smallest eigenvalue of the partial transpose.
pub fn partial_transpose_min_eigenvalue(rho: &DensityMatrix) -> f64 {
    hermitian_eig(&partial_transpose(rho.matrix()))
        .expect("partial transpose of a Hermitian matrix is Hermitian")
        .min_value()
}

/// Peres–Horodecki test; for two qubits this is equivalent to separability.
pub fn is_ppt(rho: &DensityMatrix) -> bool {
    partial_transpose_min_eigenvalue(rho) >= -PSD_CLAMP
}
