//! Return-map factors: the ratio of exit to entry radius when a trajectory
//! of `zdot = A z` crosses a cone from its entry ray to its exit ray.

use std::f64::consts::PI;

use crate::model::{ConewisePair, Mode};

use super::eigen::is_repeated;
use super::regions::{visible_in_s1, visible_in_s2};
use super::ConewiseError;

pub type Mat2 = [[f64; 2]; 2];

fn mat_vec(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Planar cone swept by the flow of `matrix` from `entry` to `exit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    entry: [f64; 2],
    exit: [f64; 2],
    matrix: Mat2,
}

impl Cone {
    /// Normalizes both rays. The rays must span a cone narrower than a half-plane.
    pub fn new(entry: [f64; 2], exit: [f64; 2], matrix: Mat2) -> Result<Self, ConewiseError> {
        let (ne, nx) = (norm(entry), norm(exit));
        if !(ne.is_finite() && nx.is_finite() && ne > 0.0 && nx > 0.0) {
            return Err(ConewiseError::InvalidCone("zero or non-finite ray"));
        }
        let entry = [entry[0] / ne, entry[1] / ne];
        let exit = [exit[0] / nx, exit[1] / nx];
        if cross(entry, exit).abs() <= 1e-14 {
            return Err(ConewiseError::InvalidCone("entry and exit rays are parallel"));
        }
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(ConewiseError::InvalidCone("non-finite matrix entry"));
        }
        Ok(Self {
            entry,
            exit,
            matrix,
        })
    }

    pub fn entry(&self) -> [f64; 2] {
        self.entry
    }

    pub fn exit(&self) -> [f64; 2] {
        self.exit
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }
}

/// The two cones traversed per half rotation of the worst-case system:
/// free motion from `(ΔB, -ΔK)/L` to `(1, 0)`, contact from `(-1, 0)` to `(ΔB, -ΔK)/L`.
pub fn worst_case_cones(pair: &ConewisePair) -> Result<[Cone; 2], ConewiseError> {
    let l = pair.norm();
    let line = [pair.delta_b() / l, -pair.delta_k() / l];
    Ok([
        Cone::new(line, [1.0, 0.0], pair.matrix(Mode::Free))?,
        Cone::new([-1.0, 0.0], line, pair.matrix(Mode::Contact))?,
    ])
}

/// Closed-form return-map factor of cone `mode` of the worst-case system.
///
/// Chooses the oscillatory, critically damped or overdamped expression from
/// the sign of `B_i² - 4 K_i`.
pub fn lambda_closed_form(pair: &ConewisePair, mode: Mode) -> Result<f64, ConewiseError> {
    let visible = match mode {
        Mode::Free => visible_in_s1(pair),
        Mode::Contact => visible_in_s2(pair),
    };
    if visible.is_some() {
        return Err(ConewiseError::DegenerateCone(mode));
    }
    let k = pair.stiffness(mode);
    let b = pair.damping(mode);
    let (dk, db, l) = (pair.delta_k(), pair.delta_b(), pair.norm());
    // (-1)^i
    let sign = match mode {
        Mode::Free => -1.0,
        Mode::Contact => 1.0,
    };
    let disc = b * b - 4.0 * k;
    let value = if is_repeated(k, b) {
        let den = 2.0 * dk - b * db;
        (b * l / den).abs() * (sign * 2.0 * dk / den).exp()
    } else if disc < 0.0 {
        let omega = 0.5 * (-disc).sqrt();
        let q = b * dk - 2.0 * k * db;
        let phi = (-(sign * 2.0 * omega * dk / q).atan()).rem_euclid(PI);
        let scale = dk * dk / (l * l) + q * q / (4.0 * omega * omega * l * l);
        let prefactor = k / omega / scale.sqrt();
        prefactor.powf(sign) * (-b / (2.0 * omega) * phi).exp()
    } else {
        let root = disc.sqrt();
        let fast = (-b - root) / 2.0;
        let slow = (-b + root) / 2.0;
        let base_slow = ((dk * slow + k * db) / (k * l)).abs();
        let base_fast = ((dk * fast + k * db) / (k * l)).abs();
        base_slow.powf(sign * fast / (slow - fast)) * base_fast.powf(sign * slow / (fast - slow))
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConewiseError::DegenerateCone(mode))
    }
}

/// Real Jordan form `A = P J P^{-1}`.
#[derive(Debug, Clone, Copy)]
enum Jordan {
    /// `J = [[a, -ω], [ω, a]]`.
    Complex { a: f64, omega: f64, p: Mat2 },
    /// `J = [[λ, 1], [0, λ]]`.
    Repeated { lambda: f64, p: Mat2 },
    /// `J = diag(λa, λb)`.
    Distinct { la: f64, lb: f64, p: Mat2 },
}

fn eigvec(a: &Mat2, lambda: f64) -> [f64; 2] {
    let r1 = [a[0][1], lambda - a[0][0]];
    let r2 = [lambda - a[1][1], a[1][0]];
    if norm(r1) >= norm(r2) {
        r1
    } else {
        r2
    }
}

fn real_jordan(a: &Mat2) -> Result<Jordan, ConewiseError> {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = tr * tr - 4.0 * det;
    let scale = (tr * tr).max(4.0 * det.abs());
    if disc.abs() <= 1e-9 * scale {
        let lambda = tr / 2.0;
        let n = [[a[0][0] - lambda, a[0][1]], [a[1][0], a[1][1] - lambda]];
        let size = n.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        let a_size = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        if size <= 1e-12 * a_size.max(f64::MIN_POSITIVE) {
            return Err(ConewiseError::UnsupportedJordanForm);
        }
        let w = if norm([n[0][0], n[1][0]]) >= norm([n[0][1], n[1][1]]) {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        let v = mat_vec(&n, w);
        return Ok(Jordan::Repeated {
            lambda,
            p: [[v[0], w[0]], [v[1], w[1]]],
        });
    }
    if disc < 0.0 {
        let re = tr / 2.0;
        let omega = 0.5 * (-disc).sqrt();
        // eigenvector u + i w of re - iω
        let (u, w) = if a[0][1].abs() >= a[1][0].abs() {
            ([a[0][1], re - a[0][0]], [0.0, -omega])
        } else {
            ([re - a[1][1], a[1][0]], [-omega, 0.0])
        };
        return Ok(Jordan::Complex {
            a: re,
            omega,
            p: [[u[0], w[0]], [u[1], w[1]]],
        });
    }
    let root = disc.sqrt();
    let la = (tr - root) / 2.0;
    let lb = (tr + root) / 2.0;
    let va = eigvec(a, la);
    let vb = eigvec(a, lb);
    Ok(Jordan::Distinct {
        la,
        lb,
        p: [[va[0], vb[0]], [va[1], vb[1]]],
    })
}

fn solve(p: &Mat2, v: [f64; 2]) -> [f64; 2] {
    let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    [
        (p[1][1] * v[0] - p[0][1] * v[1]) / det,
        (-p[1][0] * v[0] + p[0][0] * v[1]) / det,
    ]
}

/// Counter-clockwise angle from `r1` to `r2` in `[0, 2π)`.
pub fn ccw_angle(r1: [f64; 2], r2: [f64; 2]) -> f64 {
    let dot = r1[0] * r2[0] + r1[1] * r2[1];
    cross(r1, r2).atan2(dot).rem_euclid(2.0 * PI)
}

/// Return-map factor of an arbitrary cone, through the real Jordan form of its matrix.
pub fn lambda_general(cone: &Cone) -> Result<f64, ConewiseError> {
    let a = cone.matrix;
    let jordan = real_jordan(&a)?;
    // the flow has to enter the cone through the entry ray
    let turn = cross(cone.entry, cone.exit);
    let flow = cross(cone.entry, mat_vec(&a, cone.entry));
    if flow * turn <= 0.0 {
        return Err(ConewiseError::FlowLeavesCone);
    }
    let value = match jordan {
        Jordan::Complex { a, omega, p } => {
            let rin = solve(&p, cone.entry);
            let rout = solve(&p, cone.exit);
            let phi = ccw_angle(rin, rout);
            norm(rin) / norm(rout) * (a / omega * phi).exp()
        }
        Jordan::Repeated { lambda, p } => {
            let rin = solve(&p, cone.entry);
            let rout = solve(&p, cone.exit);
            if rin[1] == 0.0 || rout[1] == 0.0 {
                return Err(ConewiseError::VisibleEigenvector);
            }
            let time = rout[0] / rout[1] - rin[0] / rin[1];
            if !(time > 0.0) || rin[1] / rout[1] <= 0.0 {
                return Err(ConewiseError::VisibleEigenvector);
            }
            (rin[1] / rout[1]).abs() * (lambda * time).exp()
        }
        Jordan::Distinct { la, lb, p } => {
            let rin = solve(&p, cone.entry);
            let rout = solve(&p, cone.exit);
            if rin[0] == 0.0 || rin[1] == 0.0 || rout[0] == 0.0 || rout[1] == 0.0 {
                return Err(ConewiseError::VisibleEigenvector);
            }
            // e^{(λa - λb) t} = ratio
            let ratio = (rout[0] / rout[1]) / (rin[0] / rin[1]);
            let time = ratio.ln() / (la - lb);
            if !(ratio > 0.0 && time > 0.0) || rin[0] / rout[0] <= 0.0 {
                return Err(ConewiseError::VisibleEigenvector);
            }
            ((rout[1] / rin[1]).abs()).powf(la / (lb - la))
                * ((rout[0] / rin[0]).abs()).powf(lb / (la - lb))
        }
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ConewiseError::VisibleEigenvector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(bf: f64) -> ConewisePair {
        ConewisePair::new(4000.0, 80.0, 2e6, 20.0 + bf).unwrap()
    }

    #[test]
    fn rotation_preserves_radius() {
        let cone = Cone::new([0.0, 1.0], [1.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let l = lambda_general(&cone).unwrap();
        assert!((l - 1.0).abs() < 1e-14, "{l}");
    }

    #[test]
    fn closed_form_matches_jordan_route() {
        for bf in [5.0, 9000.0, 500.0, 20000.0] {
            let p = pair(bf);
            let cones = worst_case_cones(&p).unwrap();
            for (cone, mode) in cones.iter().zip([Mode::Free, Mode::Contact]) {
                let a = lambda_closed_form(&p, mode).unwrap();
                let b = lambda_general(cone).unwrap();
                assert!((a / b - 1.0).abs() < 1e-10, "bf={bf} {mode:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn half_rotation_factor_for_stiff_wall() {
        // independent fine-step simulation of the worst-case system gives 10.7040189
        let p = pair(5.0);
        let l = lambda_closed_form(&p, Mode::Free).unwrap()
            * lambda_closed_form(&p, Mode::Contact).unwrap();
        assert!((l - 10.704_018_9).abs() < 1e-6, "{l}");
    }

    #[test]
    fn visible_cone_is_degenerate() {
        let p = ConewisePair::new(1.0, 10.0, 2.0, 3.0).unwrap();
        assert_eq!(
            lambda_closed_form(&p, Mode::Contact),
            Err(ConewiseError::DegenerateCone(Mode::Contact))
        );
    }

    #[test]
    fn scalar_matrix_unsupported() {
        let cone = Cone::new([0.0, 1.0], [1.0, 0.0], [[-1.0, 0.0], [0.0, -1.0]]).unwrap();
        assert_eq!(lambda_general(&cone), Err(ConewiseError::UnsupportedJordanForm));
    }

    #[test]
    fn trapped_flow_reported() {
        // stable node whose slow eigenvector (1, -1) lies inside the cone
        let a = [[0.0, 1.0], [-2.0, -3.0]];
        let cone = Cone::new([-1.0, 0.1], [1.0, -2.0], a);
        let cone = cone.unwrap();
        assert!(matches!(
            lambda_general(&cone),
            Err(ConewiseError::VisibleEigenvector) | Err(ConewiseError::FlowLeavesCone)
        ));
    }

    #[test]
    fn parallel_rays_rejected() {
        assert!(Cone::new([1.0, 0.0], [2.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]]).is_err());
        assert!(Cone::new([0.0, 0.0], [1.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]]).is_err());
    }

    #[test]
    fn ccw_angle_range() {
        assert!((ccw_angle([1.0, 0.0], [0.0, 1.0]) - PI / 2.0).abs() < 1e-15);
        assert!((ccw_angle([0.0, 1.0], [1.0, 0.0]) - 1.5 * PI).abs() < 1e-15);
    }
}
