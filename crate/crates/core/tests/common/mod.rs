#![allow(dead_code)]

use hybrid_contact::cli::{scenarios, ScenarioConfig};
use hybrid_contact::model::{ConewisePair, Mode};
use nalgebra::{Matrix2, Vector2};
use rand::Rng;

pub fn scenario(name: &str) -> ScenarioConfig {
    ScenarioConfig::parse(scenarios::builtin(name).expect("shipped scenario")).unwrap()
}

pub fn stiff_wall_pair(bf: f64) -> ConewisePair {
    let mut c = scenario("s4_bf5");
    c.gains.as_mut().unwrap().bf = bf;
    c.pair("test").unwrap()
}

fn cross(a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Ratio of radii between leaving `entry` (unit length) and first reaching the
/// direction of `exit`, under `zdot = a z`. Marches the matrix exponential and
/// bisects the crossing time. `None` if the exit ray is not reached within `t_max`.
pub fn transit_ratio(a: [[f64; 2]; 2], entry: [f64; 2], exit: [f64; 2], t_max: f64) -> Option<f64> {
    let m = Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1]);
    let e = Vector2::new(entry[0], entry[1]).normalize();
    let x = Vector2::new(exit[0], exit[1]).normalize();
    let turn = cross(e, x).signum();
    let ahead = |z: Vector2<f64>| turn * cross(z, x);
    // eigenvalue scale of the matrix
    let speed = m.determinant().abs().sqrt() + m.trace().abs();
    let dt = 0.01 / speed;
    let step = (m * dt).exp();
    let mut t = 0.0;
    let mut z = e;
    while t < t_max {
        let next = step * z;
        if ahead(next) <= 0.0 {
            if next.dot(&x) <= 0.0 {
                // reached the antiparallel ray: the flow turned the wrong way
                return None;
            }
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if ahead((m * mid).exp() * z) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * dt {
                    break;
                }
            }
            return Some(((m * hi).exp() * z).norm());
        }
        z = next;
        t += dt;
    }
    None
}

/// Worst-case cone transit factors `(Λ1, Λ2)` from the definition of the partition.
pub fn oracle_lambdas(p: &ConewisePair) -> Option<(f64, f64)> {
    let (dk, db) = (p.k1 - p.k2, p.b1 - p.b2);
    let line = [db, -dk];
    let t_max = 1e4 / p.k1.min(p.b1).max(1e-6);
    let l1 = transit_ratio(p.matrix(Mode::Free), line, [1.0, 0.0], t_max)?;
    let l2 = transit_ratio(p.matrix(Mode::Contact), [-1.0, 0.0], line, t_max)?;
    Some((l1, l2))
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random stiff-regime pair spread over several decades.
pub fn random_pair<R: Rng>(rng: &mut R) -> ConewisePair {
    let k1 = log_uniform(rng, 1.0, 1e4);
    let b1 = log_uniform(rng, 0.1, 300.0);
    let k2 = k1 * log_uniform(rng, 1.5, 1e3);
    let b2 = log_uniform(rng, 0.1, 3e4);
    ConewisePair::new(k1, b1, k2, b2).unwrap()
}

pub fn norm(z: [f64; 2]) -> f64 {
    z[0].hypot(z[1])
}
