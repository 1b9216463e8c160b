//! Best approximation by squares of skew-symmetric matrices.
//!
//! A real `n×n` matrix `U` is a *skew square* when `U = K²` for some skew `K`.
//! Equivalently `U = N diag(d) Nᵀ` with `N` orthogonal and `d` made of equal
//! non-positive pairs, plus a single zero when `n` is odd.
//!
//! Given any `A`, [`approximate`] returns the skew square nearest to `A` in the
//! Frobenius norm: diagonalise the symmetric part `B = N Λ Nᵀ` (`Λ`
//! non-increasing), average adjacent eigenvalue pairs, clamp positive averages
//! to zero, and rebuild with the same `N`.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, sym_part, Matrix};
use crate::spectral::{eig_symmetric, SpectralDecomp};

/// Default relative tolerance for [`is_member`].
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SkewSquareResult {
    /// The approximant `U* = N diag(d*) Nᵀ`.
    pub u_star: Matrix,
    /// Orthogonal factor of the symmetric part of the input.
    pub n_factor: Matrix,
    /// Eigenvalues of the symmetric part, non-increasing.
    pub lambda: Vec<f64>,
    /// Diagonal of `D*`.
    pub d_star: Vec<f64>,
    /// The `⌊n/2⌋` pair values `μ*ᵢ ≤ 0`.
    pub mu_star: Vec<f64>,
    /// `‖U* − A‖_F`.
    pub residual: f64,
}

/// Offset of the first eigenvalue pair: 0 for even `n`, 1 for odd `n` (the
/// leading slot is reserved for the zero eigenvalue).
#[inline]
fn pair_offset(n: usize) -> usize {
    n % 2
}

/// Pair means `μ*ᵢ`, taken as the mean when the pair sum is `≤ 0` and zero
/// otherwise.
pub fn mu_star_from_lambda(lambda: &[f64]) -> Result<Vec<f64>> {
    if let Some(index) = lambda.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::Unsorted {
            index,
            prev: lambda[index],
            next: lambda[index + 1],
        });
    }
    let offset = pair_offset(lambda.len());
    Ok(lambda[offset..]
        .chunks_exact(2)
        .map(|pair| {
            let sum = pair[0] + pair[1];
            if sum <= 0.0 {
                sum / 2.0
            } else {
                0.0
            }
        })
        .collect())
}

/// Diagonal of `D*` for a non-increasing spectrum: each `μ*ᵢ` twice, with a
/// leading zero when `n` is odd.
pub fn d_star_from_lambda(lambda: &[f64]) -> Result<Vec<f64>> {
    let mu = mu_star_from_lambda(lambda)?;
    Ok(expand_pairs(lambda.len(), &mu))
}

fn expand_pairs(n: usize, mu: &[f64]) -> Vec<f64> {
    let mut d = Vec::with_capacity(n);
    if pair_offset(n) == 1 {
        d.push(0.0);
    }
    for &m in mu {
        d.push(m);
        d.push(m);
    }
    d
}

/// The skew-square-spectral approximant of `a`.
///
/// Only the symmetric part of `a` enters the construction; the reported
/// residual is measured against `a` itself.
pub fn approximate(a: &Matrix) -> Result<SkewSquareResult> {
    let decomp = eig_symmetric(&sym_part(a))?;
    let mu_star = mu_star_from_lambda(&decomp.lambda)?;
    let d_star = expand_pairs(a.dim(), &mu_star);
    let u_star = decomp.reconstruct_with(&d_star);
    let residual = frobenius_norm(&(&u_star - a));
    let SpectralDecomp { n, lambda } = decomp;
    Ok(SkewSquareResult {
        u_star,
        n_factor: n,
        lambda,
        d_star,
        mu_star,
        residual,
    })
}

/// Whether `s` is a skew square up to `tol`.
///
/// All checks use the absolute threshold `tol·(1 + ‖S‖_F)`: `S` must be
/// symmetric, every eigenvalue non-positive, and the sorted spectrum must split
/// into adjacent equal pairs (after a leading zero when `n` is odd).
pub fn is_member(s: &Matrix, tol: f64) -> bool {
    let scale = tol * (1.0 + frobenius_norm(s));
    if s.asymmetry() > scale {
        return false;
    }
    let Ok(decomp) = eig_symmetric(s) else {
        return false;
    };
    spectrum_is_paired(&decomp.lambda, scale)
}

fn spectrum_is_paired(lambda: &[f64], scale: f64) -> bool {
    if lambda.iter().any(|&l| l > scale) {
        return false;
    }
    let offset = pair_offset(lambda.len());
    if offset == 1 && lambda[0].abs() > scale {
        return false;
    }
    lambda[offset..]
        .chunks_exact(2)
        .all(|pair| (pair[0] - pair[1]).abs() <= scale)
}

/// A skew `K` with `K² = u`, built from the spectral factor of `u`.
///
/// Each eigenvalue pair `μ` becomes the block `[[0, −√−μ], [√−μ, 0]]`; the
/// odd-dimension leading slot stays zero. The root is not unique (flipping any
/// block gives another); this picks one fixed representative.
pub fn skew_square_root(u: &Matrix) -> Result<Matrix> {
    skew_square_root_with_tol(u, MEMBERSHIP_TOL)
}

pub fn skew_square_root_with_tol(u: &Matrix, tol: f64) -> Result<Matrix> {
    let scale = tol * (1.0 + frobenius_norm(u));
    if u.asymmetry() > scale {
        return Err(Error::NotMember);
    }
    let decomp = eig_symmetric(u)?;
    if !spectrum_is_paired(&decomp.lambda, scale) {
        return Err(Error::NotMember);
    }
    let dim = u.dim();
    let offset = pair_offset(dim);
    let mut block = Matrix::zeros(dim);
    for (i, pair) in decomp.lambda[offset..].chunks_exact(2).enumerate() {
        let r = (-(pair[0] + pair[1]) / 2.0).max(0.0).sqrt();
        let p = offset + 2 * i;
        block[(p, p + 1)] = -r;
        block[(p + 1, p)] = r;
    }
    Ok(block.conjugate_by(&decomp.n))
}
