use super::Real3;

/// Singular values of a real 3×3 matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, after which the column norms are the singular values. This
/// never forms `tᵀt`, so it stays independent of the Hermitian eigensolver.
pub fn singular_values_3x3(t: &Real3) -> [f64; 3] {
    // Work on columns.
    let mut cols = [[0.0f64; 3]; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        for i in 0..3 {
            col[i] = t[i][j];
        }
    }
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];

    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (x, y) = (cols[p], cols[q]);
                cols[p] = std::array::from_fn(|i| c * x[i] - s * y[i]);
                cols[q] = std::array::from_fn(|i| s * x[i] + c * y[i]);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv = [
        dot(&cols[0], &cols[0]).sqrt(),
        dot(&cols[1], &cols[1]).sqrt(),
        dot(&cols[2], &cols[2]).sqrt(),
    ];
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
