//! Uniform grids: the energy axis for spectral kernels and the rectangular
//! `(q, p)` lattice for phase-space fields.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::float::Float;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("energy grid needs omega_min >= 0, got {0}")]
    NegativeOmega(f64),
    #[error("energy grid needs omega_max > omega_min ({min} >= {max})")]
    EmptyRange { min: f64, max: f64 },
    #[error("grid needs at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("phase grid counts must be even, got n_q={n_q}, n_p={n_p}")]
    OddCount { n_q: usize, n_p: usize },
    #[error("grid extent must be finite")]
    NonFinite,
}

/// Uniform grid on the energy half-line, endpoints inclusive.
///
/// Spacing is `(omega_max - omega_min) / (n_points - 1)`; point `i` sits at
/// `omega_min + i * spacing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid<T> {
    pub omega_min: T,
    pub omega_max: T,
    pub n_points: usize,
}

impl<T: Float> EnergyGrid<T> {
    pub fn new(omega_min: T, omega_max: T, n_points: usize) -> Result<Self, GridError> {
        if !(omega_min.is_finite() && omega_max.is_finite()) {
            return Err(GridError::NonFinite);
        }
        if omega_min < T::zero() {
            return Err(GridError::NegativeOmega(omega_min.as_f64()));
        }
        if omega_max <= omega_min {
            return Err(GridError::EmptyRange {
                min: omega_min.as_f64(),
                max: omega_max.as_f64(),
            });
        }
        if n_points < 2 {
            return Err(GridError::TooFewPoints { need: 2, got: n_points });
        }
        Ok(Self { omega_min, omega_max, n_points })
    }

    #[inline]
    pub fn spacing(&self) -> T {
        (self.omega_max - self.omega_min) / T::from_usize(self.n_points - 1).unwrap()
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        debug_assert!(i < self.n_points);
        self.omega_min + T::from_usize(i).unwrap() * self.spacing()
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Composite-trapezoid quadrature weight of point `i`.
    #[inline]
    pub fn trapezoid_weight(&self, i: usize) -> T {
        let h = self.spacing();
        if i == 0 || i == self.n_points - 1 {
            h / T::of(2.0)
        } else {
            h
        }
    }
}

/// Rectangular phase-space lattice for one degree of freedom.
///
/// Both axes are sampled cell-style: `n` points of spacing
/// `(max - min) / n`, the upper edge excluded. This makes the lattice
/// periodic-friendly (spectral differentiation treats `max - min` as the
/// period) and keeps plain Riemann sums identical to the trapezoid rule
/// for fields that decay or wrap at the edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid<T> {
    pub q_min: T,
    pub q_max: T,
    pub p_min: T,
    pub p_max: T,
    pub n_q: usize,
    pub n_p: usize,
}

impl<T: Float> PhaseGrid<T> {
    pub fn new(
        q_min: T,
        q_max: T,
        p_min: T,
        p_max: T,
        n_q: usize,
        n_p: usize,
    ) -> Result<Self, GridError> {
        for v in [q_min, q_max, p_min, p_max] {
            if !v.is_finite() {
                return Err(GridError::NonFinite);
            }
        }
        if q_max <= q_min || p_max <= p_min {
            return Err(GridError::EmptyRange {
                min: q_min.as_f64(),
                max: q_max.as_f64(),
            });
        }
        if n_q < 4 || n_p < 4 {
            return Err(GridError::TooFewPoints { need: 4, got: n_q.min(n_p) });
        }
        if n_q % 2 != 0 || n_p % 2 != 0 {
            return Err(GridError::OddCount { n_q, n_p });
        }
        Ok(Self { q_min, q_max, p_min, p_max, n_q, n_p })
    }

    /// Grid whose momentum axis is the Fourier dual of the position axis.
    ///
    /// With `dq = (q_max - q_min) / n_q` the conjugate momentum lattice has
    /// `dp = pi hbar / (n_p dq)`, centered on zero. Operator/field
    /// round-trips through the Weyl transform are exact inverse DFT pairs
    /// on such grids.
    pub fn conjugate(q_min: T, q_max: T, n_q: usize, n_p: usize, hbar: T) -> Result<Self, GridError> {
        if n_q < 4 || n_p < 4 || n_q % 2 != 0 || n_p % 2 != 0 {
            return Err(GridError::OddCount { n_q, n_p });
        }
        let dq = (q_max - q_min) / T::from_usize(n_q).unwrap();
        let dp = T::PI() * hbar / (T::from_usize(n_p).unwrap() * dq);
        let half = T::from_usize(n_p / 2).unwrap() * dp;
        Self::new(q_min, q_max, -half, half, n_q, n_p)
    }

    #[inline]
    pub fn dq(&self) -> T {
        (self.q_max - self.q_min) / T::from_usize(self.n_q).unwrap()
    }

    #[inline]
    pub fn dp(&self) -> T {
        (self.p_max - self.p_min) / T::from_usize(self.n_p).unwrap()
    }

    #[inline]
    pub fn q(&self, i: usize) -> T {
        self.q_min + T::from_usize(i).unwrap() * self.dq()
    }

    #[inline]
    pub fn p(&self, j: usize) -> T {
        self.p_min + T::from_usize(j).unwrap() * self.dp()
    }

    /// Area element `dq * dp`.
    #[inline]
    pub fn cell_area(&self) -> T {
        self.dq() * self.dp()
    }

    /// True when the momentum axis is conjugate to the position axis for
    /// the given `hbar` (see [`PhaseGrid::conjugate`]).
    pub fn is_conjugate(&self, hbar: T) -> bool {
        let want = T::PI() * hbar / (T::from_usize(self.n_p).unwrap() * self.dq());
        let rel = ((self.dp() - want) / want).abs();
        rel < T::of(1e-12) && (self.p_min + self.p_max).abs() <= self.dp() * T::of(1.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_grid_spacing_is_exact() {
        let g = EnergyGrid::new(0.0, 10.0, 401).unwrap();
        assert_eq!(g.spacing(), 10.0 / 400.0);
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(400), 10.0);
    }

    #[test]
    fn energy_grid_rejects_bad_inputs() {
        assert!(EnergyGrid::new(-0.1, 1.0, 10).is_err());
        assert!(EnergyGrid::new(0.0, 0.0, 10).is_err());
        assert!(EnergyGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_range() {
        let g = EnergyGrid::new(1.0, 4.0, 7).unwrap();
        let total: f64 = (0..7).map(|i| g.trapezoid_weight(i)).sum();
        assert!((total - 3.0).abs() < 1e-14);
    }

    #[test]
    fn phase_grid_rejects_odd_and_tiny() {
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 5, 8).is_err());
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 2, 8).is_err());
    }

    #[test]
    fn conjugate_grid_satisfies_duality() {
        let g = PhaseGrid::conjugate(-8.0, 8.0, 64, 64, 1.0).unwrap();
        assert!(g.is_conjugate(1.0));
        // p-axis symmetric around zero, upper edge excluded
        assert!((g.p_min + g.p_max).abs() < 1e-14);
        assert_eq!(g.p(32), 0.0);
    }

    #[test]
    fn works_in_f32() {
        let g = PhaseGrid::<f32>::conjugate(-4.0, 4.0, 32, 32, 1.0).unwrap();
        assert!(g.is_conjugate(1.0));
    }
}
