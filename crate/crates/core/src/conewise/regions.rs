use crate::model::{ConewisePair, Mode};

use super::eigen::is_repeated;

/// Cone of the worst-case partition.
///
/// `S1 = { z : z2 (ΔK z1 + ΔB z2) <= 0 }` runs the free-motion dynamics,
/// `S2` (strict `> 0`) the contact dynamics. The shared boundary belongs to `S1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    S1,
    S2,
}

impl Region {
    pub fn mode(self) -> Mode {
        match self {
            Region::S1 => Mode::Free,
            Region::S2 => Mode::Contact,
        }
    }
}

/// `z2 (ΔK z1 + ΔB z2)`; its sign selects the region.
pub fn worst_case_indicator(pair: &ConewisePair, z: [f64; 2]) -> f64 {
    z[1] * (pair.delta_k() * z[0] + pair.delta_b() * z[1])
}

pub fn region_of(z: [f64; 2], pair: &ConewisePair) -> Region {
    if worst_case_indicator(pair, z) <= 0.0 {
        Region::S1
    } else {
        Region::S2
    }
}

/// Vector-field projections on both switching surfaces of the worst-case system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlidingReport {
    /// `N1ᵀ A_i ν1` with `N1 = (0, 1)`, `ν1 = (1, 0)`: equals `(-K1, -K2)`.
    pub axis_projections: (f64, f64),
    /// `N2ᵀ A_1 ν2` and `N2ᵀ A_2 ν2` on `ΔK z1 + ΔB z2 = 0`.
    pub line_projections: (f64, f64),
    /// `|N2ᵀ A_1 ν2 - N2ᵀ A_2 ν2| / max(K1, K2)`; zero in exact arithmetic.
    pub identity_residual: f64,
    pub consistent: bool,
}

/// Residual allowed on the projection identity, relative to `max(K_i)`.
pub const SLIDING_IDENTITY_TOL: f64 = 1e-12;

fn project(normal: [f64; 2], a: [[f64; 2]; 2], tangent: [f64; 2]) -> f64 {
    let av = [
        a[0][0] * tangent[0] + a[0][1] * tangent[1],
        a[1][0] * tangent[0] + a[1][1] * tangent[1],
    ];
    normal[0] * av[0] + normal[1] * av[1]
}

/// Checks that neither switching surface of the worst-case system supports a sliding mode.
pub fn sliding_consistency(pair: &ConewisePair) -> SlidingReport {
    let a1 = pair.matrix(Mode::Free);
    let a2 = pair.matrix(Mode::Contact);
    let axis = (
        project([0.0, 1.0], a1, [1.0, 0.0]),
        project([0.0, 1.0], a2, [1.0, 0.0]),
    );
    let l = pair.norm();
    let (dk, db) = (pair.delta_k(), pair.delta_b());
    let normal = [dk / l, db / l];
    let tangent = [-db / l, dk / l];
    let line = (project(normal, a1, tangent), project(normal, a2, tangent));
    let identity_residual = (line.0 - line.1).abs() / pair.k1.max(pair.k2);
    let same_sign_axis = axis.0 < 0.0 && axis.1 < 0.0;
    SlidingReport {
        axis_projections: axis,
        line_projections: line,
        identity_residual,
        consistent: same_sign_axis && identity_residual <= SLIDING_IDENTITY_TOL,
    }
}

/// Which cone (if any) contains a visible eigenvector, with its eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Visibility {
    None,
    S1(f64),
    S2(f64),
}

/// Visible eigenvector of `A_1` inside `S1`: the steep eigenvector must lie
/// above the switching line.
pub(crate) fn visible_in_s1(pair: &ConewisePair) -> Option<f64> {
    let (k, b) = (pair.k1, pair.b1);
    let (dk, db) = (pair.delta_k(), pair.delta_b());
    let disc = b * b - 4.0 * k;
    if db >= 0.0 || (disc < 0.0 && !is_repeated(k, b)) {
        return None;
    }
    let root = disc.max(0.0).sqrt();
    if dk / db < 2.0 * k / (b - root) {
        Some((-b - root) / 2.0)
    } else {
        None
    }
}

/// Visible eigenvector of `A_2` inside `S2`.
pub(crate) fn visible_in_s2(pair: &ConewisePair) -> Option<f64> {
    let (k, b) = (pair.k2, pair.b2);
    let (dk, db) = (pair.delta_k(), pair.delta_b());
    let disc = b * b - 4.0 * k;
    if disc < 0.0 && !is_repeated(k, b) {
        return None;
    }
    let root = disc.max(0.0).sqrt();
    let slow = (-b + root) / 2.0;
    if db >= 0.0 {
        // S2 covers the second and fourth quadrants, so both eigenvectors are inside.
        return Some(slow);
    }
    if dk / db > 2.0 * k / (b + root) {
        Some(slow)
    } else {
        None
    }
}

/// Reports a visible eigenvector; `S2` wins when both cones have one.
pub fn visible_eigenvector_check(pair: &ConewisePair) -> Visibility {
    if let Some(l) = visible_in_s2(pair) {
        Visibility::S2(l)
    } else if let Some(l) = visible_in_s1(pair) {
        Visibility::S1(l)
    } else {
        Visibility::None
    }
}
