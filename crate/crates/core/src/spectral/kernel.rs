//! Van Hove kernels and the state constraint report.

use ndarray::{Array3, Array4};
use thiserror::Error;

use crate::float::{Cplx, Float};
use crate::grid::EnergyGrid;

use super::tol;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("singular array has shape {got:?}, expected {want:?}")]
    SingularShape { got: Vec<usize>, want: Vec<usize> },
    #[error("regular array has shape {got:?}, expected {want:?}")]
    RegularShape { got: Vec<usize>, want: Vec<usize> },
    #[error("kernel contains a non-finite entry at {0}")]
    NonFinite(String),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("observable violates self-adjointness by {0:e}")]
    NotSelfAdjoint(f64),
    #[error("state and observable use different energy grids")]
    GridMismatch,
    #[error("state and observable use different channel counts: {0} vs {1}")]
    ChannelMismatch(usize, usize),
    #[error("time grid must be non-empty and strictly increasing")]
    BadTimeGrid,
    #[error("expectation value has imaginary residue {0:e} above {1:e}")]
    ImaginaryResidue(f64, f64),
    #[error("expectation value is not finite")]
    NonFiniteResult,
    #[error("pointer basis shape mismatch: {0}")]
    PointerShape(String),
    #[error("singular block at omega index {index} is not hermitian (asymmetry {asym:e})")]
    NonHermitianBlock { index: usize, asym: f64 },
    #[error("state still carries a regular part (max magnitude {0:e}); decohere first")]
    RegularPartPresent(f64),
    #[error("singular part is not diagonal (max off-diagonal {0:e})")]
    NotDiagonal(f64),
}

/// Van Hove pair of arrays over one energy grid.
///
/// `singular` is indexed `(omega, m, m')`, `regular` is
/// `(omega, omega', m, m')`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralKernel<T: Float> {
    pub grid: EnergyGrid<T>,
    pub n_channels: usize,
    pub singular: Array3<Cplx<T>>,
    pub regular: Array4<Cplx<T>>,
}

impl<T: Float> SpectralKernel<T> {
    pub fn new(
        grid: EnergyGrid<T>,
        n_channels: usize,
        singular: Array3<Cplx<T>>,
        regular: Array4<Cplx<T>>,
    ) -> Result<Self, SpectralError> {
        let n = grid.n_points;
        let m = n_channels;
        if singular.shape() != [n, m, m] {
            return Err(SpectralError::SingularShape {
                got: singular.shape().to_vec(),
                want: vec![n, m, m],
            });
        }
        if regular.shape() != [n, n, m, m] {
            return Err(SpectralError::RegularShape {
                got: regular.shape().to_vec(),
                want: vec![n, n, m, m],
            });
        }
        if let Some((idx, _)) = singular
            .indexed_iter()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(SpectralError::NonFinite(format!("singular{idx:?}")));
        }
        if let Some((idx, _)) = regular
            .indexed_iter()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(SpectralError::NonFinite(format!("regular{idx:?}")));
        }
        Ok(Self { grid, n_channels, singular, regular })
    }

    /// Kernel with both arrays zero.
    pub fn zeros(grid: EnergyGrid<T>, n_channels: usize) -> Self {
        let n = grid.n_points;
        let m = n_channels;
        Self {
            grid,
            n_channels,
            singular: Array3::from_elem((n, m, m), Cplx::new(T::zero(), T::zero())),
            regular: Array4::from_elem((n, n, m, m), Cplx::new(T::zero(), T::zero())),
        }
    }

    /// Largest magnitude over both arrays.
    pub fn max_abs(&self) -> T {
        let s = self.singular.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let r = self.regular.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        T::max(s, r)
    }

    /// Max defect of the regular-part hermiticity
    /// `conj(k(w, w', m, m')) = k(w', w, m', m)`.
    pub fn regular_hermiticity_defect(&self) -> (T, (usize, usize, usize, usize)) {
        let n = self.grid.n_points;
        let m = self.n_channels;
        let mut worst = T::zero();
        let mut at = (0, 0, 0, 0);
        for i in 0..n {
            for j in 0..n {
                for a in 0..m {
                    for b in 0..m {
                        let d = (self.regular[[i, j, a, b]].conj()
                            - self.regular[[j, i, b, a]])
                        .norm();
                        if d > worst {
                            worst = d;
                            at = (i, j, a, b);
                        }
                    }
                }
            }
        }
        (worst, at)
    }

    /// Max defect of per-energy self-adjointness of the singular part,
    /// `k(w, m, m') = conj(k(w, m', m))`.
    pub fn singular_hermiticity_defect(&self) -> (T, (usize, usize, usize)) {
        let n = self.grid.n_points;
        let m = self.n_channels;
        let mut worst = T::zero();
        let mut at = (0, 0, 0);
        for i in 0..n {
            for a in 0..m {
                for b in 0..m {
                    let d =
                        (self.singular[[i, a, b]] - self.singular[[i, b, a]].conj()).norm();
                    if d > worst {
                        worst = d;
                        at = (i, a, b);
                    }
                }
            }
        }
        (worst, at)
    }
}

/// Self-adjoint operator in the van Hove basis.
#[derive(Debug, Clone)]
pub struct VanHoveObservable<T: Float> {
    pub kernel: SpectralKernel<T>,
}

impl<T: Float> VanHoveObservable<T> {
    /// Wraps a kernel, rejecting it when self-adjointness fails beyond
    /// tolerance (relative to the kernel scale).
    pub fn new(kernel: SpectralKernel<T>) -> Result<Self, SpectralError> {
        let scale = T::max(T::one(), kernel.max_abs());
        let (ds, _) = kernel.singular_hermiticity_defect();
        let (dr, _) = kernel.regular_hermiticity_defect();
        let defect = T::max(ds, dr);
        if defect > T::of(tol::HERMITICITY) * scale {
            return Err(SpectralError::NotSelfAdjoint(defect.as_f64()));
        }
        Ok(Self { kernel })
    }
}

/// Density kernel plus its quantum of action.
#[derive(Debug, Clone)]
pub struct VanHoveState<T: Float> {
    pub kernel: SpectralKernel<T>,
    pub hbar: T,
}

impl<T: Float> VanHoveState<T> {
    pub fn new(kernel: SpectralKernel<T>, hbar: T) -> Result<Self, SpectralError> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(SpectralError::NonPositiveHbar(hbar.as_f64()));
        }
        Ok(Self { kernel, hbar })
    }

    /// Trace pairing with the identity:
    /// `sum_m integral rho(omega)_{mm} domega` by composite trapezoid.
    pub fn trace(&self) -> Cplx<T> {
        let g = &self.kernel.grid;
        let m = self.kernel.n_channels;
        let mut acc = Cplx::new(T::zero(), T::zero());
        for i in 0..g.n_points {
            let w = g.trapezoid_weight(i);
            for a in 0..m {
                acc = acc + self.kernel.singular[[i, a, a]] * w;
            }
        }
        acc
    }
}

/// The three state constraints of the van Hove representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateConstraint {
    /// `conj(rho(w,w')_{mm'}) = rho(w',w)_{m'm}`
    Hermiticity,
    /// `Re rho(w)_{mm} >= 0`
    Positivity,
    /// trace pairing with the identity equals 1
    Normalization,
}

impl std::fmt::Display for StateConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateConstraint::Hermiticity => write!(f, "hermiticity"),
            StateConstraint::Positivity => write!(f, "positivity"),
            StateConstraint::Normalization => write!(f, "normalization"),
        }
    }
}

/// One violated constraint with the worst offending location.
#[derive(Debug, Clone)]
pub struct ConstraintViolation {
    pub constraint: StateConstraint,
    pub location: String,
    pub magnitude: f64,
}

/// Outcome of `validate_state`: empty iff all constraints hold.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<ConstraintViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "all state constraints hold");
        }
        for v in &self.violations {
            writeln!(f, "{} violated by {:.3e} at {}", v.constraint, v.magnitude, v.location)?;
        }
        Ok(())
    }
}

/// Checks the three state constraints, reporting the worst violation of
/// each. Structural problems (shape, non-finite entries) are caught at
/// construction and cannot appear here.
pub fn validate_state<T: Float>(state: &VanHoveState<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = &state.kernel;
    let scale = T::max(T::one(), k.max_abs());

    let (dr, at) = k.regular_hermiticity_defect();
    if dr > T::of(tol::HERMITICITY) * scale {
        report.violations.push(ConstraintViolation {
            constraint: StateConstraint::Hermiticity,
            location: format!("regular[{}, {}, {}, {}]", at.0, at.1, at.2, at.3),
            magnitude: dr.as_f64(),
        });
    }

    let mut worst_neg = T::zero();
    let mut neg_at = (0usize, 0usize);
    for i in 0..k.grid.n_points {
        for a in 0..k.n_channels {
            let re = k.singular[[i, a, a]].re;
            if -re > worst_neg {
                worst_neg = -re;
                neg_at = (i, a);
            }
        }
    }
    if worst_neg > T::of(tol::POSITIVITY) {
        report.violations.push(ConstraintViolation {
            constraint: StateConstraint::Positivity,
            location: format!("singular[{}, {}, {}]", neg_at.0, neg_at.1, neg_at.1),
            magnitude: worst_neg.as_f64(),
        });
    }

    let tr = state.trace();
    let defect = (tr - Cplx::new(T::one(), T::zero())).norm();
    if defect > T::of(tol::NORMALIZATION) {
        report.violations.push(ConstraintViolation {
            constraint: StateConstraint::Normalization,
            location: "trace".to_string(),
            magnitude: defect.as_f64(),
        });
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::cre;
    use ndarray::{Array3, Array4};

    fn grid() -> EnergyGrid<f64> {
        EnergyGrid::new(0.0, 4.0, 9).unwrap()
    }

    /// Diagonal singular kernel `g(omega) >= 0` normalized on the grid.
    fn normalized_diag_state(g: impl Fn(f64) -> f64) -> VanHoveState<f64> {
        let grid = grid();
        let mut k = SpectralKernel::zeros(grid, 2);
        let mut z = 0.0;
        for i in 0..grid.n_points {
            z += grid.trapezoid_weight(i) * 2.0 * g(grid.point(i));
        }
        for i in 0..grid.n_points {
            for a in 0..2 {
                k.singular[[i, a, a]] = cre(g(grid.point(i)) / z);
            }
        }
        VanHoveState::new(k, 1.0).unwrap()
    }

    #[test]
    fn constructed_valid_state_passes() {
        let s = normalized_diag_state(|w| (-w).exp());
        let report = validate_state(&s);
        assert!(report.is_empty(), "{report}");
    }

    #[test]
    fn negative_diagonal_reports_positivity() {
        let mut s = normalized_diag_state(|w| (-w).exp());
        s.kernel.singular[[3, 1, 1]] = cre(-0.1);
        let report = validate_state(&s);
        let v = report
            .violations
            .iter()
            .find(|v| v.constraint == StateConstraint::Positivity)
            .expect("positivity violation");
        assert!((v.magnitude - 0.1).abs() < 1e-12);
        assert!(v.location.contains("3, 1, 1"));
    }

    #[test]
    fn asymmetric_regular_reports_hermiticity() {
        let mut s = normalized_diag_state(|w| (-w).exp());
        s.kernel.regular[[2, 5, 0, 1]] = cre(1.0);
        // mirror entry left at zero -> defect 1
        let report = validate_state(&s);
        let v = report
            .violations
            .iter()
            .find(|v| v.constraint == StateConstraint::Hermiticity)
            .expect("hermiticity violation");
        assert!((v.magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_reports_trace() {
        let mut s = normalized_diag_state(|w| (-w).exp());
        for i in 0..s.kernel.grid.n_points {
            for a in 0..2 {
                s.kernel.singular[[i, a, a]] = s.kernel.singular[[i, a, a]] * cre(0.9);
            }
        }
        let report = validate_state(&s);
        let v = report
            .violations
            .iter()
            .find(|v| v.constraint == StateConstraint::Normalization)
            .expect("normalization violation");
        assert!((v.magnitude - 0.1).abs() < 1e-9);
    }

    #[test]
    fn shape_mismatch_is_a_structural_error() {
        let g = grid();
        let bad = SpectralKernel::new(
            g,
            2,
            Array3::from_elem((g.n_points, 2, 3), cre(0.0)),
            Array4::from_elem((g.n_points, g.n_points, 2, 2), cre(0.0)),
        );
        assert!(matches!(bad, Err(SpectralError::SingularShape { .. })));
    }

    #[test]
    fn observable_constructor_enforces_self_adjointness() {
        let g = grid();
        let mut k = SpectralKernel::zeros(g, 2);
        k.regular[[1, 2, 0, 1]] = cre(0.5);
        assert!(matches!(
            VanHoveObservable::new(k.clone()),
            Err(SpectralError::NotSelfAdjoint(_))
        ));
        k.regular[[2, 1, 1, 0]] = cre(0.5);
        assert!(VanHoveObservable::new(k).is_ok());
    }
}
