//! Real spectral decomposition of symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, sym_part, Matrix};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius mass, relative to `‖S‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// `S = N diag(lambda) Nᵀ` with `N` orthogonal and `lambda` non-increasing.
#[derive(Clone, Debug)]
pub struct SpectralDecomp {
    pub n: Matrix,
    pub lambda: Vec<f64>,
}

impl SpectralDecomp {
    pub fn reconstruct(&self) -> Matrix {
        self.reconstruct_with(&self.lambda)
    }

    /// `N diag(values) Nᵀ` for a replacement spectrum; exactly symmetric.
    pub fn reconstruct_with(&self, values: &[f64]) -> Matrix {
        let dim = self.n.dim();
        assert_eq!(values.len(), dim, "dimension mismatch");
        let mut out = Matrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let x: f64 = (0..dim).map(|k| self.n[(i, k)] * values[k] * self.n[(j, k)]).sum();
                out[(i, j)] = x;
                out[(j, i)] = x;
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// The input is symmetrised as `(S + Sᵀ)/2` first. Eigenvalues come back in
/// non-increasing order; ties keep the order Jacobi produced them in. Each
/// eigenvector is signed so its largest-magnitude entry (first one on ties) is
/// positive.
pub fn eig_symmetric(s: &Matrix) -> Result<SpectralDecomp> {
    let mut a = sym_part(s);
    let dim = a.dim();
    let mut v = Matrix::identity(dim);
    let target = OFF_DIAGONAL_TOL * frobenius_norm(&a);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..dim {
            for q in p + 1..dim {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..dim).collect();
    // Stable: equal eigenvalues keep Jacobi's order.
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));

    let lambda: Vec<f64> = order.iter().map(|&k| a[(k, k)]).collect();
    let mut n = Matrix::from_fn(dim, |i, j| v[(i, order[j])]);
    for j in 0..dim {
        let mut pivot = 0;
        for i in 1..dim {
            if n[(i, j)].abs() > n[(pivot, j)].abs() {
                pivot = i;
            }
        }
        if n[(pivot, j)] < 0.0 {
            for i in 0..dim {
                n[(i, j)] = -n[(i, j)];
            }
        }
    }
    Ok(SpectralDecomp { n, lambda })
}

/// One Jacobi rotation zeroing `a[p][q]`; accumulates the rotation into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    // Negligible against both diagonal entries: annihilate without rotating.
    if apq.abs() <= f64::EPSILON * 0.25 * app.abs().min(aqq.abs()) {
        a[(p, q)] = 0.0;
        a[(q, p)] = 0.0;
        return;
    }
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    } else {
        0.0
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let n = a.dim();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_norm;
    use proptest::prelude::*;

    fn orthogonality_defect(n: &Matrix) -> f64 {
        (&(&n.transpose() * n) - &Matrix::identity(n.dim())).max_abs()
    }

    fn check_invariants(s: &Matrix, d: &SpectralDecomp) {
        assert!(d.lambda.windows(2).all(|w| w[0] >= w[1]), "{:?}", d.lambda);
        assert!(orthogonality_defect(&d.n) <= 1e-10);
        let err = frobenius_norm(&(&d.reconstruct() - &sym_part(s)));
        assert!(err <= 1e-9 * (1.0 + frobenius_norm(s)), "reconstruction error {err}");
    }

    #[test]
    fn example1_symmetric_part() {
        let b = Matrix::from_array3([[-1.0, 3.0, 0.0], [3.0, -1.0, 0.0], [0.0, 0.0, -6.0]]);
        let d = eig_symmetric(&b).unwrap();
        for (got, want) in d.lambda.iter().zip([2.0, -4.0, -6.0]) {
            assert!((got - want).abs() < 1e-12, "{:?}", d.lambda);
        }
        check_invariants(&b, &d);
        // Largest-magnitude entry positive: ties go to the first row.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want_n = Matrix::from_array3([[h, h, 0.0], [h, -h, 0.0], [0.0, 0.0, 1.0]]);
        assert!(d.n.max_abs_diff(&want_n) < 1e-12, "{:?}", d.n);
    }

    #[test]
    fn identity_and_diagonal() {
        let d = eig_symmetric(&Matrix::identity(4)).unwrap();
        assert_eq!(d.lambda, vec![1.0; 4]);
        assert!(orthogonality_defect(&d.n) <= 1e-15);

        let s = Matrix::from_diagonal(&[-1.0, 5.0, 2.0]);
        let d = eig_symmetric(&s).unwrap();
        assert_eq!(d.lambda, vec![5.0, 2.0, -1.0]);
        let perm = Matrix::from_array3([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        assert_eq!(d.n, perm);
    }

    #[test]
    fn zero_and_one_by_one() {
        let d = eig_symmetric(&Matrix::zeros(3)).unwrap();
        assert_eq!(d.lambda, vec![0.0; 3]);
        let d = eig_symmetric(&Matrix::from_rows(&[[-4.0]]).unwrap()).unwrap();
        assert_eq!(d.lambda, vec![-4.0]);
        assert_eq!(d.n, Matrix::identity(1));
    }

    #[test]
    fn nonsymmetric_input_is_symmetrised() {
        let a = Matrix::from_array3([[-1.0, 4.0, 2.0], [2.0, -1.0, 3.0], [-2.0, -3.0, -6.0]]);
        let d = eig_symmetric(&a).unwrap();
        assert!((d.lambda[0] - 2.0).abs() < 1e-12);
        check_invariants(&a, &d);
    }

    #[test]
    fn deterministic() {
        let s = Matrix::from_fn(5, |i, j| ((i * 7 + j * 3) % 5) as f64 + ((i + j) as f64).sin());
        let a = eig_symmetric(&s).unwrap();
        let b = eig_symmetric(&s).unwrap();
        assert_eq!(a.n, b.n);
        assert_eq!(a.lambda, b.lambda);
    }

    #[test]
    fn wide_dynamic_range() {
        let s = Matrix::from_diagonal(&[1e12, 1.0, -1e-12]);
        let q = crate::linalg::random_orthogonal(3, 11);
        let rotated = crate::linalg::sym_part(&s.conjugate_by(&q));
        let d = eig_symmetric(&rotated).unwrap();
        check_invariants(&rotated, &d);
    }

    proptest! {
        #[test]
        fn invariants_on_random_symmetric(n in 1usize..=10, xs in prop::collection::vec(-10.0..10.0f64, 100)) {
            let s = sym_part(&Matrix::from_fn(n, |i, j| xs[i * 10 + j]));
            let d = eig_symmetric(&s).unwrap();
            check_invariants(&s, &d);
            let sum: f64 = d.lambda.iter().sum();
            prop_assert!((sum - s.trace()).abs() <= 1e-9 * (1.0 + s.trace().abs()));
        }
    }
}
