use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct NumericKernel {
    /// Orthonormal kernel basis, smallest singular value first.
    pub basis: Vec<DVector<f64>>,
    pub nullity: usize,
    /// All `ncols` singular values, descending (zero-padded for wide input).
    pub singular_values: Vec<f64>,
}

impl NumericKernel {
    pub fn rank(&self) -> usize {
        self.singular_values.len() - self.nullity
    }
}

/// Kernel of `m` from its SVD: right singular vectors whose singular value is
/// below `tol_ratio · σ_max`. A zero matrix has full nullity.
pub fn numeric_nullspace(m: &DMatrix<f64>, tol_ratio: f64) -> NumericKernel {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return NumericKernel {
            basis: Vec::new(),
            nullity: 0,
            singular_values: Vec::new(),
        };
    }
    // Pad wide matrices with zero rows so that V is square.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cutoff = tol_ratio * sigma_max;
    let null_idx: Vec<usize> = order
        .iter()
        .rev()
        .copied()
        .filter(|&k| sigma_max == 0.0 || svd.singular_values[k] < cutoff)
        .collect();
    let basis = null_idx.iter().map(|&k| v_t.row(k).transpose()).collect::<Vec<_>>();
    NumericKernel {
        nullity: basis.len(),
        basis,
        singular_values: sv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_no_kernel() {
        let k = numeric_nullspace(&DMatrix::identity(5, 5), 1e-8);
        assert_eq!(k.nullity, 0);
        assert_eq!(k.rank(), 5);
    }

    #[test]
    fn rank_one_outer_product() {
        let a = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let b = DVector::from_vec(vec![0.3, 1.0, -1.0, 2.0, 0.7]);
        let m = &a * b.transpose();
        let k = numeric_nullspace(&m, 1e-8);
        assert_eq!(k.nullity, 4);
        for v in &k.basis {
            assert!((&m * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_and_wide_matrices() {
        assert_eq!(numeric_nullspace(&DMatrix::zeros(3, 4), 1e-8).nullity, 4);
        let m = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        let k = numeric_nullspace(&m, 1e-8);
        assert_eq!(k.nullity, 2);
        for v in &k.basis {
            assert!((&m * v).norm() < 1e-12);
        }
    }
}
