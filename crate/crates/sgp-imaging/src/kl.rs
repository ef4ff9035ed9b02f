//! Generalized Kullback–Leibler divergence for Poisson data.

use sgp_core::Scalar;

use crate::blur::LinearOperator;
use crate::error::{domain, ImagingError};
use crate::image::Image;

/// Poisson observation model: data `g` with mean `A x* + b`.
///
/// `b > 0` keeps the divergence finite on the whole nonnegative orthant;
/// `b = 0` is accepted for hand-built problems where `A x` stays positive
/// wherever `g` is.
pub struct PoissonModel<T, A> {
    operator: A,
    data: Image<T>,
    background: T,
}

impl<T: Scalar, A: LinearOperator<T>> PoissonModel<T, A> {
    pub fn new(operator: A, data: Image<T>, background: T) -> Result<Self, ImagingError> {
        if data.rows() != operator.rows() || data.cols() != operator.cols() {
            return Err(ImagingError::Shape {
                expected_rows: operator.rows(),
                expected_cols: operator.cols(),
                rows: data.rows(),
                cols: data.cols(),
            });
        }
        if data.as_slice().iter().any(|v| !v.is_finite() || *v < T::zero()) {
            return Err(domain("data image must be finite and nonnegative"));
        }
        if !(background >= T::zero()) || !background.is_finite() {
            return Err(domain("background must be finite and nonnegative"));
        }
        Ok(Self {
            operator,
            data,
            background,
        })
    }

    pub fn operator(&self) -> &A {
        &self.operator
    }

    pub fn data(&self) -> &Image<T> {
        &self.data
    }

    pub fn background(&self) -> T {
        self.background
    }

    pub fn pixels(&self) -> usize {
        self.data.len()
    }

    /// `A x + b` into `out`.
    pub(crate) fn forward(&self, x: &[T], out: &mut [T]) {
        self.operator.apply(x, out);
        for v in out.iter_mut() {
            *v += self.background;
        }
    }
}

fn check_nonnegative<T: Scalar>(x: &[T], n: usize) -> Result<(), ImagingError> {
    if x.len() != n {
        return Err(domain(format!(
            "image of {} pixels where {n} were expected",
            x.len()
        )));
    }
    if x.iter().any(|v| *v < T::zero() || v.is_nan()) {
        return Err(domain("negative pixel values"));
    }
    Ok(())
}

/// KL divergence between the data and the blurred estimate:
/// `Σ_i [ g_i log(g_i / (Ax + b)_i) + (Ax + b)_i - g_i ]`,
/// with the convention that `g_i = 0` terms reduce to `(Ax + b)_i`.
///
/// Nonnegative, and zero exactly when `Ax + b = g`.
pub fn kl_value<T: Scalar, A: LinearOperator<T>>(
    model: &PoissonModel<T, A>,
    x: &[T],
) -> Result<T, ImagingError> {
    check_nonnegative(x, model.pixels())?;
    let mut mean = vec![T::zero(); x.len()];
    model.forward(x, &mut mean);
    Ok(kl_from_mean(model.data.as_slice(), &mean))
}

pub(crate) fn kl_from_mean<T: Scalar>(g: &[T], mean: &[T]) -> T {
    let mut acc = T::zero();
    for (&gi, &mi) in g.iter().zip(mean) {
        if gi > T::zero() {
            acc += gi * (gi / mi).ln() + mi - gi;
        } else {
            acc += mi;
        }
    }
    acc
}

/// Gradient of [`kl_value`]: `e - Aᵀ(g / (Ax + b))` (using `Aᵀe = e`).
pub fn kl_gradient<T: Scalar, A: LinearOperator<T>>(
    model: &PoissonModel<T, A>,
    x: &[T],
    grad: &mut [T],
) -> Result<(), ImagingError> {
    check_nonnegative(x, model.pixels())?;
    let mut mean = vec![T::zero(); x.len()];
    model.forward(x, &mut mean);
    kl_gradient_from_mean(model, &mean, grad);
    Ok(())
}

pub(crate) fn kl_gradient_from_mean<T: Scalar, A: LinearOperator<T>>(
    model: &PoissonModel<T, A>,
    mean: &[T],
    grad: &mut [T],
) {
    let g = model.data.as_slice();
    let mut ratio = vec![T::zero(); mean.len()];
    for i in 0..mean.len() {
        // The g_i = 0 convention removes the pixel from the fit term.
        ratio[i] = if g[i] > T::zero() {
            g[i] / mean[i]
        } else {
            T::zero()
        };
    }
    model.operator.apply_adjoint(&ratio, grad);
    for v in grad.iter_mut() {
        *v = T::one() - *v;
    }
}
