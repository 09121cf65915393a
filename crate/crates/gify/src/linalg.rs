//! Dense complex linear algebra shared across the crate.
//!
//! Every matrix is a `DMatrix<Complex<f64>>`; real spaces carry zero
//! imaginary parts. Rank, null-space, and range decisions threshold
//! singular values relative to the largest one.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::{Error, Result, NULLSPACE_RTOL};

pub type Scalar = Complex<f64>;

/// Absolute singular-value floor: anything at or below this is treated as
/// zero regardless of scale. All data handled by the crate is O(1)
/// (unitaries, basis coordinates, samples in [-1, 1]), so a fixed floor
/// keeps degenerate matrices (numerically ~1e-16 but not exactly zero)
/// from promoting noise to rank.
pub const SIGMA_FLOOR: f64 = 1e-12;
pub type Mat = DMatrix<Scalar>;
pub type CVec = DVector<Scalar>;

pub fn scalar(re: f64) -> Scalar {
    Complex::new(re, 0.0)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> Mat {
    Mat::zeros(rows, cols)
}

pub fn is_finite(m: &Mat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entry modulus; 0 for empty matrices.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &Mat, b: &Mat, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs(&(a - b)) <= tol
}

/// Column-major flattening.
pub fn vec_of(m: &Mat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVec, rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v.as_slice())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Operator norm: the largest singular value.
pub fn op_norm(m: &Mat) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    if !is_finite(m) {
        return Err(Error::NonFinite("operator norm input".into()));
    }
    let sv = m.clone().svd(false, false).singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

fn pad_rows_to_square(m: &Mat) -> Mat {
    let (r, c) = m.shape();
    if r >= c {
        return m.clone();
    }
    let mut out = zeros(c, c);
    out.view_mut((0, 0), (r, c)).copy_from(m);
    out
}

fn pad_cols_to_square(m: &Mat) -> Mat {
    let (r, c) = m.shape();
    if c >= r {
        return m.clone();
    }
    let mut out = zeros(r, r);
    out.view_mut((0, 0), (r, c)).copy_from(m);
    out
}

/// Numerical rank with singular values thresholded at `rtol * sigma_max`.
pub fn rank(m: &Mat, rtol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = (rtol * smax).max(SIGMA_FLOOR);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis of the null space of `m`.
///
/// The matrix is zero-padded to a square so the thin SVD exposes the full
/// right singular basis.
pub fn nullspace(m: &Mat, rtol: f64) -> Vec<CVec> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..cols)
            .map(|i| CVec::from_fn(cols, |j, _| if i == j { scalar(1.0) } else { scalar(0.0) }))
            .collect();
    }
    let p = pad_rows_to_square(m);
    let svd = p.svd(false, true);
    let v_t = svd.v_t.expect("svd v_t requested");
    let sv = svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = (rtol * smax).max(SIGMA_FLOOR);
    let mut out = Vec::new();
    for i in 0..v_t.nrows() {
        let s = if i < sv.len() { sv[i] } else { 0.0 };
        if s <= cut {
            out.push(v_t.row(i).adjoint());
        }
    }
    out
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &Mat, rtol: f64) -> Vec<CVec> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let p = pad_cols_to_square(m);
    let svd = p.svd(true, false);
    let u = svd.u.expect("svd u requested");
    let sv = svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cut = (rtol * smax).max(SIGMA_FLOOR);
    let mut out = Vec::new();
    for i in 0..sv.len() {
        if sv[i] > cut {
            out.push(CVec::from(u.column(i)));
        }
    }
    out
}

pub fn stack_columns(vecs: &[CVec]) -> Mat {
    if vecs.is_empty() {
        return zeros(0, 0);
    }
    let rows = vecs[0].len();
    Mat::from_fn(rows, vecs.len(), |i, j| vecs[j][i])
}

/// Vertical stack of equal-width matrices.
pub fn stack_rows(mats: &[Mat]) -> Mat {
    if mats.is_empty() {
        return zeros(0, 0);
    }
    let cols = mats[0].ncols();
    let rows: usize = mats.iter().map(|m| m.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for m in mats {
        out.view_mut((at, 0), (m.nrows(), cols)).copy_from(m);
        at += m.nrows();
    }
    out
}

/// Extracts a real basis for a span known to be the complexification of a
/// real space (all defining systems real): splits each vector into real and
/// imaginary parts and re-extracts the column space.
pub fn realify_span(vecs: &[CVec], rtol: f64) -> Vec<CVec> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let mut parts = Vec::with_capacity(2 * vecs.len());
    for v in vecs {
        parts.push(v.map(|z| scalar(z.re)));
        parts.push(v.map(|z| scalar(z.im)));
    }
    column_space(&stack_columns(&parts), rtol)
}

/// Assembles a block matrix from a rectangular grid of equal-shape blocks.
pub fn block_matrix(blocks: &[Vec<Mat>]) -> Mat {
    let brows = blocks.len();
    let bcols = blocks[0].len();
    let (h, w) = blocks[0][0].shape();
    let mut out = zeros(brows * h, bcols * w);
    for (i, row) in blocks.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            out.view_mut((i * h, j * w), (h, w)).copy_from(blk);
        }
    }
    out
}

pub fn block_of(m: &Mat, i: usize, j: usize, block: usize) -> Mat {
    Mat::from(m.view((i * block, j * block), (block, block)))
}

/// Compact display: real entries print bare, complex ones as a+bi.
pub fn display(m: &Mat) -> String {
    let complex = m.iter().any(|z| z.im.abs() > 1e-12);
    let cell = |z: &Scalar| {
        if complex {
            format!("{:.3}{:+.3}i", z.re, z.im)
        } else {
            format!("{:7.3}", z.re)
        }
    };
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| cell(&m[(i, j)])).collect();
        out.push_str("[ ");
        out.push_str(&row.join("  "));
        out.push_str(" ]\n");
    }
    out
}

/// Uniform entries in [-1, 1]; imaginary parts sampled only when `complex`.
pub fn rand_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize, complex: bool) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let re = rng.gen_range(-1.0..1.0);
        let im = if complex {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        };
        Complex::new(re, im)
    })
}

/// Least-squares machinery for a fixed independent set of columns.
#[derive(Clone)]
pub struct LstSq {
    basis: Mat,
    pinv: Mat,
}

impl LstSq {
    /// `columns` must be linearly independent; checked by rank.
    pub fn new(columns: Mat) -> Result<Self> {
        let s = columns.ncols();
        if rank(&columns, NULLSPACE_RTOL) != s {
            return Err(Error::InvalidSpace(
                "basis columns are linearly dependent".into(),
            ));
        }
        let pinv = if s == 0 {
            zeros(0, columns.nrows())
        } else {
            let svd = columns.clone().svd(true, true);
            let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
            svd.pseudo_inverse(smax * 1e-13)
                .map_err(|e| Error::InvalidSpace(format!("pseudo-inverse failed: {e}")))?
        };
        Ok(LstSq {
            basis: columns,
            pinv,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn coords(&self, v: &CVec) -> CVec {
        &self.pinv * v
    }

    pub fn project(&self, v: &CVec) -> CVec {
        &self.basis * self.coords(v)
    }

    pub fn residual(&self, v: &CVec) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn combine(&self, coords: &CVec) -> CVec {
        &self.basis * coords
    }
}
