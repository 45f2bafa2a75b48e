//! Dense hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! The spectral blocks this crate diagonalizes are small (one per energy
//! grid point, a handful of channels each), so a cyclic Jacobi sweep is
//! both fast enough and fully deterministic: no pivot heuristics, no
//! backend variability, identical bits on every run.

use ndarray::Array2;
use num_complex::Complex;
use thiserror::Error;

use crate::float::{cone, czero, Cplx, Float};

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not hermitian: max asymmetry {asym:e} exceeds {tol:e}")]
    NotHermitian { asym: f64, tol: f64 },
    #[error("jacobi iteration failed to converge after {0} sweeps")]
    NoConvergence(usize),
}

/// Eigenvalues (ascending order of computation, unsorted) and the unitary
/// whose columns are the matching eigenvectors.
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Array2<Cplx<T>>,
}

/// Max hermiticity defect `max |A[i][j] - conj(A[j][i])|`.
pub fn hermiticity_defect<T: Float>(a: &Array2<Cplx<T>>) -> T {
    let n = a.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..n {
            let d = (a[[i, j]] - a[[j, i]].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Diagonalize a hermitian matrix: `A = V diag(values) V^dagger`.
///
/// `herm_tol` bounds the accepted hermiticity defect relative to the matrix
/// scale; inputs beyond it are rejected rather than silently symmetrized.
pub fn eigen_hermitian<T: Float>(
    a: &Array2<Cplx<T>>,
    herm_tol: T,
) -> Result<HermitianEigen<T>, EigenError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(EigenError::NotSquare { rows: n, cols: a.ncols() });
    }
    let scale = a.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let defect = hermiticity_defect(a);
    if defect > herm_tol * T::max(T::one(), scale) {
        return Err(EigenError::NotHermitian {
            asym: defect.as_f64(),
            tol: (herm_tol * T::max(T::one(), scale)).as_f64(),
        });
    }

    let mut m = a.clone();
    // Work on the exactly-hermitian part so round-off asymmetry cannot leak
    // into the rotations.
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let avg = (m[[i, j]] + m[[j, i]].conj()) / T::of(2.0);
                m[[i, j]] = avg;
                m[[j, i]] = avg.conj();
            } else if i == j {
                m[[i, j]] = Complex::new(m[[i, j]].re, T::zero());
            }
        }
    }
    let mut v = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            cone::<T>()
        } else {
            czero::<T>()
        }
    });

    if n == 1 {
        return Ok(HermitianEigen { values: vec![m[[0, 0]].re], vectors: v });
    }

    let stop = T::epsilon() * T::of(8.0) * T::max(T::one(), scale);
    let max_sweeps = 64;
    for sweep in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let x = m[[i, j]].norm();
                if x > off {
                    off = x;
                }
            }
        }
        if off <= stop {
            let values = (0..n).map(|i| m[[i, i]].re).collect();
            return Ok(HermitianEigen { values, vectors: v });
        }
        let _ = sweep;
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[[p, q]];
                let b = beta.norm();
                if b <= stop {
                    continue;
                }
                let w = beta / b; // unit phase of the off-diagonal entry
                let alpha = m[[p, p]].re;
                let gamma = m[[q, q]].re;
                let tau = (gamma - alpha) / (T::of(2.0) * b);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let sw = Complex::new(s, T::zero()) * w.conj();
                let swc = Complex::new(s, T::zero()) * w;

                // column update: A <- A U, U = [[c, s], [-s w*, c w*]]
                for r in 0..n {
                    let arp = m[[r, p]];
                    let arq = m[[r, q]];
                    m[[r, p]] = arp * c - arq * sw;
                    m[[r, q]] = arp * s + arq * (Complex::new(c, T::zero()) * w.conj());
                }
                // row update: A <- U^dagger A
                for r in 0..n {
                    let apr = m[[p, r]];
                    let aqr = m[[q, r]];
                    m[[p, r]] = apr * c - aqr * swc;
                    m[[q, r]] = apr * s + aqr * (Complex::new(c, T::zero()) * w);
                }
                // accumulate eigenvectors: V <- V U
                for r in 0..n {
                    let vrp = v[[r, p]];
                    let vrq = v[[r, q]];
                    v[[r, p]] = vrp * c - vrq * sw;
                    v[[r, q]] = vrp * s + vrq * (Complex::new(c, T::zero()) * w.conj());
                }
                // pin the rotated pair to exactly hermitian form
                m[[p, q]] = czero();
                m[[q, p]] = czero();
            }
        }
    }
    Err(EigenError::NoConvergence(max_sweeps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Complex::new(re, im)
    }

    fn reconstruct(e: &HermitianEigen<f64>) -> Array2<Cplx<f64>> {
        let n = e.values.len();
        Array2::from_shape_fn((n, n), |(i, j)| {
            (0..n)
                .map(|k| e.vectors[[i, k]] * e.vectors[[j, k]].conj() * e.values[k])
                .sum()
        })
    }

    #[test]
    fn two_by_two_matches_characteristic_polynomial() {
        // real symmetric [[a, c], [c, b]] has eigenvalues
        // (a+b)/2 +- sqrt(((a-b)/2)^2 + c^2)
        let (a, b, cc) = (0.7, -0.2, 0.31);
        let m = array![[c(a, 0.0), c(cc, 0.0)], [c(cc, 0.0), c(b, 0.0)]];
        let e = eigen_hermitian(&m, 1e-8).unwrap();
        let mid = (a + b) / 2.0;
        let rad = (((a - b) / 2.0).powi(2) + cc * cc).sqrt();
        let mut got = e.values.clone();
        got.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((got[0] - (mid - rad)).abs() < 1e-14);
        assert!((got[1] - (mid + rad)).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 5, 8] {
            for _ in 0..20 {
                let mut m = Array2::from_shape_fn((n, n), |_| {
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let mh = &m.clone().reversed_axes().mapv(|z| z.conj()) + &m;
                m = mh.mapv(|z| z / 2.0);
                for i in 0..n {
                    m[[i, i]] = c(m[[i, i]].re, 0.0);
                }
                let e = eigen_hermitian(&m, 1e-8).unwrap();
                let r = reconstruct(&e);
                let err = (&r - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(err < 1e-12, "n={n}: reconstruction error {err:e}");
                // unitarity
                let mut udu = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let dot: Cplx<f64> = (0..n)
                            .map(|k| e.vectors[[k, i]].conj() * e.vectors[[k, j]])
                            .sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        udu = udu.max((dot - c(want, 0.0)).norm());
                    }
                }
                assert!(udu < 1e-13, "unitarity defect {udu:e}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = array![[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(
            eigen_hermitian(&m, 1e-8),
            Err(EigenError::NotHermitian { .. })
        ));
    }

    #[test]
    fn identity_is_fixed_point() {
        let n = 4;
        let m = Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                c(0.25, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let e = eigen_hermitian(&m, 1e-8).unwrap();
        assert!(e.values.iter().all(|&v| (v - 0.25).abs() < 1e-15));
        let r = reconstruct(&e);
        let err = (&r - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }
}
