//! The composite deblurring objective `KL(x) + ν·HS_ρ(x)` over `x ≥ 0`.

use sgp_core::{Scalar, SmoothObjective};

use crate::blur::LinearOperator;
use crate::error::{domain, ImagingError};
use crate::hs::HsRegularizer;
use crate::kl::{kl_from_mean, kl_gradient_from_mean, PoissonModel};

/// Convex fit-plus-regularization objective for Poisson deblurring.
///
/// Borrows the observation model so one model can serve many values of the
/// regularization parameter `ν` (as the discrepancy search requires).
pub struct CompositeObjective<'m, T, A> {
    model: &'m PoissonModel<T, A>,
    reg: HsRegularizer<T>,
    nu: T,
}

impl<'m, T: Scalar, A: LinearOperator<T>> CompositeObjective<'m, T, A> {
    pub fn new(
        model: &'m PoissonModel<T, A>,
        reg: HsRegularizer<T>,
        nu: T,
    ) -> Result<Self, ImagingError> {
        if reg.pixels() != model.pixels() {
            return Err(domain("regularizer and model geometry differ"));
        }
        if !(nu > T::zero()) || !nu.is_finite() {
            return Err(domain("regularization parameter nu must be positive"));
        }
        Ok(Self { model, reg, nu })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn regularizer(&self) -> &HsRegularizer<T> {
        &self.reg
    }

    pub fn model(&self) -> &PoissonModel<T, A> {
        self.model
    }
}

impl<T: Scalar, A: LinearOperator<T>> SmoothObjective<T> for CompositeObjective<'_, T, A> {
    fn dimension(&self) -> usize {
        self.model.pixels()
    }

    fn value(&self, x: &[T]) -> T {
        let mut mean = vec![T::zero(); x.len()];
        self.model.forward(x, &mut mean);
        let kl = kl_from_mean(self.model.data().as_slice(), &mean);
        match self.reg.value(x) {
            Ok(hs) => kl + self.nu * hs,
            Err(_) => T::nan(),
        }
    }

    fn gradient(&self, x: &[T], grad: &mut [T]) {
        let mut mean = vec![T::zero(); x.len()];
        self.model.forward(x, &mut mean);
        kl_gradient_from_mean(self.model, &mean, grad);
        let mut hs_grad = vec![T::zero(); x.len()];
        if self.reg.gradient(x, &mut hs_grad).is_ok() {
            for i in 0..x.len() {
                grad[i] += self.nu * hs_grad[i];
            }
        } else {
            for g in grad.iter_mut() {
                *g = T::nan();
            }
        }
    }

    fn value_and_gradient(&self, x: &[T], grad: &mut [T]) -> T {
        let mut mean = vec![T::zero(); x.len()];
        self.model.forward(x, &mut mean);
        let kl = kl_from_mean(self.model.data().as_slice(), &mean);
        kl_gradient_from_mean(self.model, &mean, grad);
        let mut hs_grad = vec![T::zero(); x.len()];
        if self.reg.gradient(x, &mut hs_grad).is_err() {
            return T::nan();
        }
        for i in 0..x.len() {
            grad[i] += self.nu * hs_grad[i];
        }
        match self.reg.value(x) {
            Ok(hs) => kl + self.nu * hs,
            Err(_) => T::nan(),
        }
    }
}
