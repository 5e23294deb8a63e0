use crate::market_data::FnCurve;

/// A curve of survival probabilities `t -> Q(τ > t)` with `Q(τ > 0) = 1`.
pub trait SurvivalCurve<T> {
    fn survival(&self, t: T) -> T;
}

impl<T, S: SurvivalCurve<T> + ?Sized> SurvivalCurve<T> for &S {
    #[inline]
    fn survival(&self, t: T) -> T {
        (**self).survival(t)
    }
}

impl<T, F: Fn(T) -> T> SurvivalCurve<T> for FnCurve<F> {
    #[inline]
    fn survival(&self, t: T) -> T {
        (self.0)(t)
    }
}
