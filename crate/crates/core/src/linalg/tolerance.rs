use crate::scalar::Real;

/// Absolute tolerances used by structural checks.
///
/// The `f64` defaults are hermiticity 1e-10, unitarity 1e-10, rank 1e-9,
/// conservation 1e-9 and grouping 1e-9. For narrower scalars each default is
/// raised to `64 * epsilon` so the checks stay decidable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    pub hermiticity: T,
    pub unitarity: T,
    pub rank: T,
    pub conservation: T,
    pub grouping: T,
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(64.0);
        let pick = |x: f64| T::lit(x).max(floor);
        Self {
            hermiticity: pick(1e-10),
            unitarity: pick(1e-10),
            rank: pick(1e-9),
            conservation: pick(1e-9),
            grouping: pick(1e-9),
        }
    }
}

impl<T: Real> ToleranceConfig<T> {
    /// Returns `true` when every tolerance is finite and nonnegative.
    pub fn is_valid(&self) -> bool {
        [self.hermiticity, self.unitarity, self.rank, self.conservation, self.grouping]
            .iter()
            .all(|t| t.is_finite() && *t >= T::zero())
    }

    pub fn uniform(tol: T) -> Self {
        Self { hermiticity: tol, unitarity: tol, rank: tol, conservation: tol, grouping: tol }
    }
}
