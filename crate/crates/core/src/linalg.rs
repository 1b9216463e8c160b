//! Dense small-matrix algebra.
//!
//! [`Matrix`] is a square, row-major, finite-valued `n×n` matrix. Everything in
//! this crate is small (a handful of rows), so there is no sparse or blocked
//! path and products are the textbook triple loop.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Relative skewness tolerance used by [`star`].
pub const SKEW_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from rows, rejecting ragged, empty or non-finite input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare {
                rows: 0,
                row: 0,
                cols: 0,
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(x);
            }
        }
        Ok(Matrix { n, data })
    }

    /// Const-friendly 3×3 constructor for literals known to be finite.
    pub fn from_array3(rows: [[f64; 3]; 3]) -> Self {
        let m = Matrix::from_fn(3, |i, j| rows[i][j]);
        debug_assert!(m.data.iter().all(|x| x.is_finite()));
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Matrix::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest entrywise difference; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `max |M - Mᵀ|` over all entries.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    /// `max |M + Mᵀ|` over all entries, diagonal included.
    pub fn skewness_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                m = m.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        m
    }

    /// `Q M Qᵀ`.
    pub fn conjugate_by(&self, q: &Matrix) -> Matrix {
        &(q * self) * &q.transpose()
    }

    /// Parses the matrix CSV format: `n` lines of `n` comma-separated decimals,
    /// no header. Blank lines are ignored.
    pub fn from_csv_str(text: &str) -> Result<Matrix> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|field| {
                    let field = field.trim();
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::parse(lineno + 1, format!("`{field}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Matrix::from_rows(&rows)
    }

    /// Emits the matrix CSV format with 17 significant digits per entry, which
    /// round-trips every `f64` exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for row in self.data.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for row in self.data.chunks(self.n) {
            write!(f, "  ")?;
            for x in row {
                write!(f, "{x:>14.6e} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Matrix { n, data: out }
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

/// Three real components; houses angular velocities, accelerations and axes.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vector3(pub [f64; 3]);

impl Vector3 {
    pub const ZERO: Vector3 = Vector3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3([x, y, z])
    }

    pub fn dot(&self, o: &Vector3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vector3 {
        Vector3(self.0.map(|x| x * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Unit vector in the same direction, or `None` for a zero/non-finite input.
    pub fn normalized(&self) -> Option<Vector3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Index<usize> for Vector3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `Σᵢⱼ XᵢⱼYᵢⱼ`.
pub fn frobenius_inner(x: &Matrix, y: &Matrix) -> Result<f64> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch {
            expected: x.n,
            actual: y.n,
        });
    }
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a * b).sum())
}

pub fn frobenius_norm(x: &Matrix) -> f64 {
    x.data.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `(A + Aᵀ)/2`.
pub fn sym_part(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// `(A - Aᵀ)/2`.
pub fn skew_part(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.n, |i, j| 0.5 * (a[(i, j)] - a[(j, i)]))
}

/// Reads the vector off a skew 3×3 matrix: `(W₃₂, W₁₃, W₂₁)`.
///
/// Rejects inputs with `max|W + Wᵀ| > 1e-9·(1 + ‖W‖_F)`.
pub fn star(w: &Matrix) -> Result<Vector3> {
    if w.n != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: w.n,
        });
    }
    let defect = w.skewness_defect();
    if defect > SKEW_TOL * (1.0 + frobenius_norm(w)) {
        return Err(Error::NotSkew { asymmetry: defect });
    }
    Ok(Vector3::new(w[(2, 1)], w[(0, 2)], w[(1, 0)]))
}

/// The skew matrix `∗v` with `(∗v)ᵢⱼ = Σₖ εᵢₖⱼ vₖ`, so that `(∗v)x = v × x`.
pub fn ast(v: &Vector3) -> Matrix {
    let [a, b, c] = v.0;
    Matrix::from_array3([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])
}

/// Deterministic random orthogonal matrix for a given seed.
pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_orthogonal_with(n, &mut rng)
}

/// Random element of O(n) built as a product of plane rotations with random
/// angles, three sweeps over every coordinate pair, followed by a reflection
/// of the first row with probability ½.
pub fn random_orthogonal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    assert!(n >= 1, "matrix dimension must be at least 1");
    let mut q = Matrix::identity(n);
    for _ in 0..3 {
        for p in 0..n {
            for r in p + 1..n {
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                let (s, c) = angle.sin_cos();
                // Left-multiply by the rotation in the (p, r) plane.
                for j in 0..n {
                    let a = q[(p, j)];
                    let b = q[(r, j)];
                    q[(p, j)] = c * a - s * b;
                    q[(r, j)] = s * a + c * b;
                }
            }
        }
    }
    if rng.random_bool(0.5) {
        for j in 0..n {
            q[(0, j)] = -q[(0, j)];
        }
    }
    q
}
