use super::ConewiseError;

/// Relative width of the band around `B² = 4K` treated as a repeated root.
pub const REPEATED_ROOT_TOL: f64 = 1e-9;

/// Eigen-decomposition of the companion matrix `[[0, 1], [-K, -B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenstructure {
    /// `-B/2 ± iω` with `ω = sqrt(4K - B²) / 2`.
    ComplexPair { real: f64, omega: f64 },
    /// Double root `-B/2`; one eigenvector `(-2/B, 1)`.
    RepeatedReal { eigenvalue: f64, eigenvector: [f64; 2] },
    /// Two real roots. Eigenvectors are normalized to a unit second component,
    /// `v1 = ((-B + sqrt(D)) / 2K, 1)` and `v2 = ((-B - sqrt(D)) / 2K, 1)`, where
    /// `v1` belongs to the fast root `(-B - sqrt(D)) / 2` and `v2` to the slow one.
    DistinctReal {
        fast: f64,
        slow: f64,
        v1: [f64; 2],
        v2: [f64; 2],
    },
}

impl Eigenstructure {
    /// Eigenvalues as `(re, im)` pairs; the imaginary part is nonnegative first.
    pub fn eigenvalues(&self) -> [(f64, f64); 2] {
        match *self {
            Eigenstructure::ComplexPair { real, omega } => [(real, omega), (real, -omega)],
            Eigenstructure::RepeatedReal { eigenvalue, .. } => {
                [(eigenvalue, 0.0), (eigenvalue, 0.0)]
            }
            Eigenstructure::DistinctReal { fast, slow, .. } => [(slow, 0.0), (fast, 0.0)],
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Eigenstructure::ComplexPair { .. })
    }
}

/// `true` when `|B² - 4K| / max(B², 4K)` is within [`REPEATED_ROOT_TOL`].
pub(crate) fn is_repeated(k: f64, b: f64) -> bool {
    let disc = b * b - 4.0 * k;
    disc.abs() <= REPEATED_ROOT_TOL * (b * b).max(4.0 * k)
}

pub fn eigenstructure(k: f64, b: f64) -> Result<Eigenstructure, ConewiseError> {
    if !(k.is_finite() && k > 0.0 && b.is_finite() && b > 0.0) {
        return Err(ConewiseError::Domain { k, b });
    }
    let disc = b * b - 4.0 * k;
    if is_repeated(k, b) {
        let eigenvalue = -b / 2.0;
        return Ok(Eigenstructure::RepeatedReal {
            eigenvalue,
            eigenvector: [1.0 / eigenvalue, 1.0],
        });
    }
    if disc < 0.0 {
        return Ok(Eigenstructure::ComplexPair {
            real: -b / 2.0,
            omega: 0.5 * (-disc).sqrt(),
        });
    }
    let root = disc.sqrt();
    Ok(Eigenstructure::DistinctReal {
        fast: (-b - root) / 2.0,
        slow: (-b + root) / 2.0,
        v1: [(-b + root) / (2.0 * k), 1.0],
        v2: [(-b - root) / (2.0 * k), 1.0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(k: f64, b: f64, v: [f64; 2]) -> [f64; 2] {
        [v[1], -k * v[0] - b * v[1]]
    }

    #[test]
    fn critical_damping_is_repeated() {
        match eigenstructure(1.0, 2.0).unwrap() {
            Eigenstructure::RepeatedReal { eigenvalue, .. } => assert_eq!(eigenvalue, -1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distinct_roots_and_vectors() {
        match eigenstructure(2.0, 3.0).unwrap() {
            Eigenstructure::DistinctReal { fast, slow, v1, v2 } => {
                assert_eq!(fast, -2.0);
                assert_eq!(slow, -1.0);
                assert_eq!(v1, [-0.5, 1.0]);
                assert_eq!(v2, [-1.0, 1.0]);
                let av1 = apply(2.0, 3.0, v1);
                let av2 = apply(2.0, 3.0, v2);
                assert!((av1[0] - fast * v1[0]).abs() < 1e-12);
                assert!((av2[1] - slow * v2[1]).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stiff_contact_is_oscillatory() {
        match eigenstructure(2e6, 25.0).unwrap() {
            Eigenstructure::ComplexPair { real, omega } => {
                assert_eq!(real, -12.5);
                assert!((omega - 0.5 * (8e6f64 - 625.0).sqrt()).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonpositive_inputs_rejected() {
        assert!(eigenstructure(0.0, 1.0).is_err());
        assert!(eigenstructure(1.0, -1.0).is_err());
        assert!(eigenstructure(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn near_critical_band() {
        let k = 1e6;
        let b = 2e3 * (1.0 + 1e-11);
        assert!(matches!(
            eigenstructure(k, b).unwrap(),
            Eigenstructure::RepeatedReal { .. }
        ));
        let b = 2e3 * (1.0 + 1e-6);
        assert!(matches!(
            eigenstructure(k, b).unwrap(),
            Eigenstructure::DistinctReal { .. }
        ));
    }

    #[test]
    fn real_parts_negative() {
        for (k, b) in [(1.0, 0.1), (4000.0, 80.0), (2.0, 3.0), (1.0, 2.0), (7.0, 100.0)] {
            for (re, _) in eigenstructure(k, b).unwrap().eigenvalues() {
                assert!(re < 0.0);
            }
        }
    }
}
