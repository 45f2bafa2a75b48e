//! Time evolution of expectation values and the decohered weak limit.
//!
//! The expectation of an observable in a van Hove state splits into a
//! time-independent singular term and an oscillatory double integral over
//! the regular kernels. Both are evaluated by composite trapezoid
//! quadrature on the energy grid, with a fixed reduction order so repeated
//! runs are bit-identical.

use ndarray::Array2;
use num_complex::Complex;

use crate::float::{cis, Cplx, Float};
use crate::grid::EnergyGrid;

use super::kernel::{SpectralError, SpectralKernel, VanHoveObservable, VanHoveState};
use super::tol;

/// Largest time for which the direct oscillatory quadrature stays inside
/// its accuracy budget (a quarter radian of phase per grid cell). Beyond
/// it results are still produced but flagged.
pub fn oscillatory_t_max<T: Float>(grid: &EnergyGrid<T>, hbar: T) -> T {
    hbar / (T::of(4.0) * grid.spacing())
}

/// Precomputed quadrature state for evaluating `S + R(t)` at many times.
///
/// The singular contribution `S` and the channel-contracted, weight-folded
/// regular matrix are computed once; each time evaluation is then a single
/// phase-weighted reduction over the grid square.
pub struct ExpectationEvaluator<T: Float> {
    grid: EnergyGrid<T>,
    hbar: T,
    singular: Cplx<T>,
    contracted: Array2<Cplx<T>>,
}

impl<T: Float> ExpectationEvaluator<T> {
    pub fn new(
        state: &VanHoveState<T>,
        obs: &VanHoveObservable<T>,
    ) -> Result<Self, SpectralError> {
        check_compatible(&state.kernel, &obs.kernel)?;
        let g = state.kernel.grid;
        let n = g.n_points;
        let m = state.kernel.n_channels;

        let mut singular = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let w = g.trapezoid_weight(i);
            let mut block = Complex::new(T::zero(), T::zero());
            for a in 0..m {
                for b in 0..m {
                    block = block
                        + state.kernel.singular[[i, a, b]].conj()
                            * obs.kernel.singular[[i, a, b]];
                }
            }
            singular = singular + block * w;
        }

        let mut contracted = Array2::from_elem((n, n), Complex::new(T::zero(), T::zero()));
        for i in 0..n {
            let wi = g.trapezoid_weight(i);
            for j in 0..n {
                let wj = g.trapezoid_weight(j);
                let mut block = Complex::new(T::zero(), T::zero());
                for a in 0..m {
                    for b in 0..m {
                        block = block
                            + state.kernel.regular[[i, j, a, b]].conj()
                                * obs.kernel.regular[[i, j, a, b]];
                    }
                }
                contracted[[i, j]] = block * (wi * wj);
            }
        }

        Ok(Self { grid: g, hbar: state.hbar, singular, contracted })
    }

    /// Time-independent singular contribution (complex, residue unchecked).
    pub fn singular_part(&self) -> Cplx<T> {
        self.singular
    }

    /// Oscillatory regular contribution
    /// `R(t) = sum_ij w_i w_j conj(rho)_ij exp(i (w_i - w_j) t / hbar) O_ij`.
    pub fn regular_part(&self, t: T) -> Cplx<T> {
        let n = self.grid.n_points;
        let phases: Vec<Cplx<T>> = (0..n)
            .map(|i| cis(self.grid.point(i) * t / self.hbar))
            .collect();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let ui = phases[i];
            let mut row = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                row = row + self.contracted[[i, j]] * phases[j].conj();
            }
            acc = acc + row * ui;
        }
        acc
    }

    /// Full expectation `S + R(t)` with the imaginary-residue check.
    pub fn expectation(&self, t: T) -> Result<T, SpectralError> {
        let z = self.singular + self.regular_part(t);
        finalize(z)
    }

    pub fn t_max_valid(&self) -> T {
        oscillatory_t_max(&self.grid, self.hbar)
    }
}

fn check_compatible<T: Float>(
    a: &SpectralKernel<T>,
    b: &SpectralKernel<T>,
) -> Result<(), SpectralError> {
    if a.grid != b.grid {
        return Err(SpectralError::GridMismatch);
    }
    if a.n_channels != b.n_channels {
        return Err(SpectralError::ChannelMismatch(a.n_channels, b.n_channels));
    }
    Ok(())
}

fn finalize<T: Float>(z: Cplx<T>) -> Result<T, SpectralError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpectralError::NonFiniteResult);
    }
    let residue = z.im.abs();
    if residue > T::of(tol::IMAG_RESIDUE) {
        return Err(SpectralError::ImaginaryResidue(
            residue.as_f64(),
            tol::IMAG_RESIDUE,
        ));
    }
    Ok(z.re)
}

/// Expectation value of `obs` in `state` at time `t`.
pub fn expectation_at_time<T: Float>(
    state: &VanHoveState<T>,
    obs: &VanHoveObservable<T>,
    t: T,
) -> Result<T, SpectralError> {
    ExpectationEvaluator::new(state, obs)?.expectation(t)
}

/// One row of a decay curve.
#[derive(Debug, Clone, Copy)]
pub struct DecayPoint<T> {
    pub t: T,
    /// Full expectation `S + Re R(t)`.
    pub total: T,
    /// Complex regular contribution before the residue is discarded.
    pub regular: Cplx<T>,
}

/// Expectation values over a time grid, with the singular plateau computed
/// once and shared by every row.
#[derive(Debug, Clone)]
pub struct DecayCurve<T: Float> {
    pub points: Vec<DecayPoint<T>>,
    /// The time-independent singular contribution.
    pub singular: T,
    /// Validity horizon of the direct oscillatory quadrature.
    pub t_max_valid: T,
    /// How many requested times exceeded the horizon.
    pub n_beyond_validity: usize,
}

/// Evaluates the expectation over an increasing time grid.
pub fn decay_curve<T: Float>(
    state: &VanHoveState<T>,
    obs: &VanHoveObservable<T>,
    t_grid: &[T],
) -> Result<DecayCurve<T>, SpectralError> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectralError::BadTimeGrid);
    }
    let ev = ExpectationEvaluator::new(state, obs)?;
    let singular = finalize(ev.singular_part())?;
    let t_max_valid = ev.t_max_valid();
    let mut points = Vec::with_capacity(t_grid.len());
    let mut n_beyond = 0usize;
    for &t in t_grid {
        let regular = ev.regular_part(t);
        let total = finalize(ev.singular_part() + regular)?;
        if t > t_max_valid {
            n_beyond += 1;
        }
        points.push(DecayPoint { t, total, regular });
    }
    Ok(DecayCurve { points, singular, t_max_valid, n_beyond_validity: n_beyond })
}

/// Decohered state: the singular part survives, the regular part is
/// dropped. Idempotent by construction.
pub fn weak_limit<T: Float>(state: &VanHoveState<T>) -> VanHoveState<T> {
    let mut kernel = SpectralKernel::zeros(state.kernel.grid, state.kernel.n_channels);
    kernel.singular.assign(&state.kernel.singular);
    VanHoveState { kernel, hbar: state.hbar }
}
