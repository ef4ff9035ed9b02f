//! Periodic convolution operators built from a point-spread function.
//!
//! Under periodic boundary conditions the blur matrix is block circulant
//! with circulant blocks, so products with `A` and `Aᵀ` cost `O(n log n)`
//! through the FFT. The PSF is normalized at construction, which gives the
//! flux-preservation identities `A·e = e` and `Aᵀ·e = e`.
//!
//! [`DenseBlurOperator`] materializes the same matrix explicitly for small
//! images and serves as the independent oracle for adjointness and
//! normalization checks against the FFT path.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};
use sgp_core::Scalar;

use crate::error::ImagingError;
use crate::image::{compensated_sum, Image};

/// A linear operator on row-major images, safe for concurrent use.
pub trait LinearOperator<T: Scalar>: Send + Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;

    /// `out = A x`.
    fn apply(&self, x: &[T], out: &mut [T]);

    /// `out = Aᵀ x`.
    fn apply_adjoint(&self, x: &[T], out: &mut [T]);

    fn pixels(&self) -> usize {
        self.rows() * self.cols()
    }
}

/// Normalizes a PSF kernel to unit mass and embeds it in an `rows × cols`
/// frame with its center at the origin, wrapping periodically.
fn embed_normalized_psf<T: Scalar>(
    psf: &Image<T>,
    rows: usize,
    cols: usize,
) -> Result<Vec<T>, ImagingError> {
    if psf.rows() > rows || psf.cols() > cols {
        return Err(ImagingError::InvalidPsf(format!(
            "kernel {}x{} larger than image {}x{}",
            psf.rows(),
            psf.cols(),
            rows,
            cols
        )));
    }
    if !psf.as_slice().iter().all(|v| v.is_finite()) {
        return Err(ImagingError::InvalidPsf("non-finite kernel entries".into()));
    }
    let mass = compensated_sum(psf.as_slice());
    if !(mass > T::zero()) {
        return Err(ImagingError::InvalidPsf(
            "kernel mass must be positive for normalization".into(),
        ));
    }

    let (center_r, center_c) = (psf.rows() / 2, psf.cols() / 2);
    let mut frame = vec![T::zero(); rows * cols];
    for r in 0..psf.rows() {
        for c in 0..psf.cols() {
            let rr = (r + rows - center_r) % rows;
            let cc = (c + cols - center_c) % cols;
            frame[rr * cols + cc] = psf.get(r, c) / mass;
        }
    }
    Ok(frame)
}

/// FFT-backed periodic blur operator.
pub struct BlurOperator<T: FftNum> {
    rows: usize,
    cols: usize,
    /// DFT of the embedded PSF (the optical transfer function).
    otf: Vec<Complex<T>>,
    fwd_row: Arc<dyn Fft<T>>,
    fwd_col: Arc<dyn Fft<T>>,
    inv_row: Arc<dyn Fft<T>>,
    inv_col: Arc<dyn Fft<T>>,
}

impl<T: Scalar + FftNum> BlurOperator<T> {
    /// Builds the operator for `rows × cols` images; the kernel is
    /// normalized so that `A e = e`.
    pub fn new(psf: &Image<T>, rows: usize, cols: usize) -> Result<Self, ImagingError> {
        if rows == 0 || cols == 0 {
            return Err(ImagingError::InvalidPsf("empty image frame".into()));
        }
        let frame = embed_normalized_psf(psf, rows, cols)?;

        let mut planner = FftPlanner::new();
        let fwd_row = planner.plan_fft_forward(cols);
        let fwd_col = planner.plan_fft_forward(rows);
        let inv_row = planner.plan_fft_inverse(cols);
        let inv_col = planner.plan_fft_inverse(rows);

        let mut op = Self {
            rows,
            cols,
            otf: Vec::new(),
            fwd_row,
            fwd_col,
            inv_row,
            inv_col,
        };
        let mut otf: Vec<Complex<T>> = frame
            .into_iter()
            .map(|v| Complex::new(v, T::zero()))
            .collect();
        op.fft2(&mut otf, true);
        op.otf = otf;
        Ok(op)
    }

    /// In-place 2-D FFT (unnormalized); `forward` selects the direction.
    /// One scratch allocation per call, shared by every row and column
    /// transform.
    fn fft2(&self, buf: &mut [Complex<T>], forward: bool) {
        let (row_fft, col_fft) = if forward {
            (&self.fwd_row, &self.fwd_col)
        } else {
            (&self.inv_row, &self.inv_col)
        };
        let scratch_len = row_fft
            .get_inplace_scratch_len()
            .max(col_fft.get_inplace_scratch_len());
        let zero = Complex::new(T::zero(), T::zero());
        let mut scratch = vec![zero; scratch_len];
        for row in buf.chunks_exact_mut(self.cols) {
            row_fft.process_with_scratch(row, &mut scratch);
        }
        let mut column = vec![zero; self.rows];
        for c in 0..self.cols {
            for r in 0..self.rows {
                column[r] = buf[r * self.cols + c];
            }
            col_fft.process_with_scratch(&mut column, &mut scratch);
            for r in 0..self.rows {
                buf[r * self.cols + c] = column[r];
            }
        }
    }

    fn convolve(&self, x: &[T], out: &mut [T], conjugate: bool) {
        debug_assert_eq!(x.len(), self.pixels());
        let mut buf: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.fft2(&mut buf, true);
        for (b, &h) in buf.iter_mut().zip(&self.otf) {
            *b *= if conjugate { h.conj() } else { h };
        }
        self.fft2(&mut buf, false);
        let scale = T::one() / T::from_usize(self.pixels()).expect("pixel count fits scalar");
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re * scale;
        }
    }
}

impl<T: Scalar + FftNum> LinearOperator<T> for BlurOperator<T> {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[T], out: &mut [T]) {
        self.convolve(x, out, false);
    }

    fn apply_adjoint(&self, x: &[T], out: &mut [T]) {
        // The adjoint of a real circular convolution is convolution with the
        // conjugate transfer function.
        self.convolve(x, out, true);
    }
}

/// Dense materialization of the periodic blur matrix, `A_{pq} = k(p - q)`,
/// for cross-validating the FFT operator on small images.
pub struct DenseBlurOperator<T> {
    rows: usize,
    cols: usize,
    matrix: Vec<T>,
}

/// Dense operators hold an `n × n` matrix; refuse anything big.
const DENSE_PIXEL_LIMIT: usize = 256;

impl<T: Scalar> DenseBlurOperator<T> {
    pub fn new(psf: &Image<T>, rows: usize, cols: usize) -> Result<Self, ImagingError> {
        let n = rows * cols;
        if n > DENSE_PIXEL_LIMIT {
            return Err(ImagingError::InvalidPsf(format!(
                "dense operator limited to {DENSE_PIXEL_LIMIT} pixels, got {n}"
            )));
        }
        let frame = embed_normalized_psf(psf, rows, cols)?;
        let mut matrix = vec![T::zero(); n * n];
        for pr in 0..rows {
            for pc in 0..cols {
                let p = pr * cols + pc;
                for qr in 0..rows {
                    for qc in 0..cols {
                        let q = qr * cols + qc;
                        let dr = (pr + rows - qr) % rows;
                        let dc = (pc + cols - qc) % cols;
                        matrix[p * n + q] = frame[dr * cols + dc];
                    }
                }
            }
        }
        Ok(Self { rows, cols, matrix })
    }
}

impl<T: Scalar> LinearOperator<T> for DenseBlurOperator<T> {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[T], out: &mut [T]) {
        let n = self.pixels();
        for p in 0..n {
            let mut acc = T::zero();
            for q in 0..n {
                acc += self.matrix[p * n + q] * x[q];
            }
            out[p] = acc;
        }
    }

    fn apply_adjoint(&self, x: &[T], out: &mut [T]) {
        let n = self.pixels();
        for q in 0..n {
            let mut acc = T::zero();
            for p in 0..n {
                acc += self.matrix[p * n + q] * x[p];
            }
            out[q] = acc;
        }
    }
}
