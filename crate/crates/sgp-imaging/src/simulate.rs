//! Synthetic test problems: phantoms, Gaussian PSFs and seeded Poisson data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use sgp_core::Scalar;

use crate::blur::{BlurOperator, LinearOperator};
use crate::error::{domain, ImagingError};
use crate::image::Image;
use crate::kl::PoissonModel;
use rustfft::FftNum;

/// Noise model for the simulated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// `g_i ~ Poisson(mean_i)` from a seeded generator.
    Poisson,
    /// `g = mean` exactly (the variance-0 switch).
    None,
}

/// Truncated, normalized Gaussian kernel of the given variance on a
/// `side × side` grid (odd `side` keeps the peak centered).
pub fn gaussian_psf<T: Scalar>(side: usize, variance: f64) -> Result<Image<T>, ImagingError> {
    if side == 0 {
        return Err(ImagingError::InvalidPsf("empty kernel".into()));
    }
    if !(variance > 0.0) {
        return Err(ImagingError::InvalidPsf("variance must be positive".into()));
    }
    let center = (side / 2) as f64;
    let mut data = Vec::with_capacity(side * side);
    let mut mass = 0.0;
    for r in 0..side {
        for c in 0..side {
            let dr = r as f64 - center;
            let dc = c as f64 - center;
            let v = (-(dr * dr + dc * dc) / (2.0 * variance)).exp();
            mass += v;
            data.push(v);
        }
    }
    let img = Image::new(
        side,
        side,
        data.into_iter().map(|v| T::of(v / mass)).collect(),
    )?;
    Ok(img)
}

/// Piecewise-constant disk phantom with values in `[0, 1]`: a bright outer
/// ring around a mid-intensity disk holding three smaller features. The
/// sharp edges exercise the edge-preserving regularizer.
pub fn disk_phantom<T: Scalar>(rows: usize, cols: usize) -> Image<T> {
    let features: [(f64, f64, f64, f64); 4] = [
        // (center_r, center_c, radius, value) in unit coordinates
        (0.0, 0.0, 0.40, 0.5),
        (-0.12, -0.10, 0.11, 1.0),
        (0.12, 0.10, 0.09, 0.05),
        (0.05, -0.16, 0.06, 0.85),
    ];
    Image::from_fn(rows, cols, |r, c| {
        let y = (r as f64 + 0.5) / rows as f64 - 0.5;
        let x = (c as f64 + 0.5) / cols as f64 - 0.5;
        let rad = (x * x + y * y).sqrt();
        let mut v = 0.0;
        if rad > 0.40 && rad <= 0.44 {
            v = 1.0; // outer ring
        }
        for &(fy, fx, fr, fv) in &features {
            let d = ((y - fy) * (y - fy) + (x - fx) * (x - fx)).sqrt();
            if d <= fr {
                v = fv;
            }
        }
        T::of(v)
    })
}

/// One Poisson draw; inversion for small means, rejection for large ones
/// (both inside `rand_distr`), special-casing `mean = 0`.
fn poisson_draw(rng: &mut ChaCha8Rng, mean: f64) -> Result<f64, ImagingError> {
    if mean == 0.0 {
        return Ok(0.0);
    }
    let dist = Poisson::new(mean)
        .map_err(|e| domain(format!("Poisson mean {mean} rejected: {e}")))?;
    Ok(dist.sample(rng))
}

/// A simulated observation model together with its scaled ground truth.
pub type SimulatedProblem<T> = (PoissonModel<T, BlurOperator<T>>, Image<T>);

/// Simulated deblurring problem: data `g_i ~ Poisson((A(s·x*))_i + s·b)`
/// where `s` is the scale factor multiplying both object and background
/// before blurring. Returns the model together with the scaled ground truth
/// for error reporting.
pub fn simulate_problem<T: Scalar + FftNum>(
    truth: &Image<T>,
    psf: &Image<T>,
    background: T,
    scale: T,
    seed: u64,
    noise: NoiseModel,
) -> Result<SimulatedProblem<T>, ImagingError> {
    if truth.as_slice().iter().any(|v| *v < T::zero() || !v.is_finite()) {
        return Err(domain("ground truth must be nonnegative and finite"));
    }
    if !(scale > T::zero()) || !scale.is_finite() {
        return Err(domain("scale factor must be positive"));
    }
    if !(background >= T::zero()) || !background.is_finite() {
        return Err(domain("background must be nonnegative"));
    }

    let scaled_truth = truth.scaled(scale);
    let scaled_background = background * scale;
    let operator = BlurOperator::new(psf, truth.rows(), truth.cols())?;

    let mut mean = vec![T::zero(); scaled_truth.len()];
    operator.apply(scaled_truth.as_slice(), &mut mean);
    for m in mean.iter_mut() {
        // Blur of a nonnegative image can go a few ulps negative through
        // the FFT; Poisson means must not.
        *m = (*m + scaled_background).max(T::zero());
    }

    let data = match noise {
        NoiseModel::None => mean.clone(),
        NoiseModel::Poisson => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Vec::with_capacity(mean.len());
            for &m in &mean {
                let lambda = m.to_f64().expect("mean fits f64");
                g.push(T::of(poisson_draw(&mut rng, lambda)?));
            }
            g
        }
    };

    let data = Image::new(truth.rows(), truth.cols(), data)?;
    let model = PoissonModel::new(operator, data, scaled_background)?;
    Ok((model, scaled_truth))
}
