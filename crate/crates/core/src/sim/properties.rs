//! Ensemble checks of exponential decay and input-to-state bounds.

/// Exponential envelope `c e^{-λ t}` over an ensemble of normalized norm histories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub lambda: f64,
}

impl Envelope {
    pub fn at(&self, t: f64) -> f64 {
        self.c * (-self.lambda * t).exp()
    }
}

/// Fits `λ` to the decay of the ensemble maximum between `t_end / 2` and `t_end`,
/// then the smallest `c` that bounds every sample. Each history is `(t, ‖z(t)‖ / ‖z0‖)`
/// on a shared grid starting at `t = 0`.
pub fn fit_envelope(histories: &[Vec<(f64, f64)>]) -> Option<Envelope> {
    let len = histories.iter().map(Vec::len).min()?;
    if len < 4 {
        return None;
    }
    let peak = |i: usize| histories.iter().map(|h| h[i].1).fold(0.0, f64::max);
    let (i_mid, i_end) = (len / 2, len - 1);
    let (t_mid, t_end) = (histories[0][i_mid].0, histories[0][i_end].0);
    let (m_mid, m_end) = (peak(i_mid), peak(i_end));
    if !(m_mid > 0.0 && m_end > 0.0) {
        return None;
    }
    let lambda = (m_mid / m_end).ln() / (t_end - t_mid);
    let c = histories
        .iter()
        .flat_map(|h| h.iter())
        .map(|&(t, r)| r * (lambda * t).exp())
        .fold(0.0, f64::max);
    Some(Envelope { c, lambda })
}

/// Largest value over the final `fraction` of a history.
pub fn tail_sup(history: &[(f64, f64)], fraction: f64) -> f64 {
    let skip = ((1.0 - fraction) * history.len() as f64) as usize;
    history[skip..].iter().map(|h| h.1).fold(0.0, f64::max)
}
