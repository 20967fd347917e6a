//! One-dimensional trapezoid grids on `[−T, T]` and on `[e^{−U}, e^{U}]`.

use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// Lebesgue measure on the line.
    Additive,
    /// The measure `da/a` on `(0, ∞)`, integrated in `u = ln a`.
    Multiplicative,
}

/// Nodes with positive trapezoid weights. For multiplicative grids the
/// weights are with respect to `da/a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    kind: GridKind,
    /// Positions in the additive coordinate (`u = ln a` for multiplicative grids).
    coords: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn trapezoid_weights(coords: &[f64]) -> Vec<f64> {
    let n = coords.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { coords[i] - coords[i - 1] } else { 0.0 };
            let right = if i + 1 < n { coords[i + 1] - coords[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

impl Grid1D {
    /// `intervals + 1` equispaced nodes on `[−t, t]`.
    pub fn uniform(t: f64, intervals: usize) -> Result<Self> {
        if !(t > 0.0) || intervals == 0 {
            return Err(Error::InvalidGrid(format!("need t > 0 and at least one interval, got t={t}, n={intervals}")));
        }
        let h = 2.0 * t / intervals as f64;
        let coords: Vec<f64> = (0..=intervals).map(|i| -t + i as f64 * h).collect();
        Self::from_coords(GridKind::Additive, coords)
    }

    /// Nodes `a = e^u` for `intervals + 1` equispaced `u ∈ [−u_max, u_max]`.
    pub fn logarithmic(u_max: f64, intervals: usize) -> Result<Self> {
        let mut g = Self::uniform(u_max, intervals)?;
        g.kind = GridKind::Multiplicative;
        g.nodes = g.coords.iter().map(|u| u.exp()).collect();
        Ok(g)
    }

    /// Grid from arbitrary strictly increasing coordinates with trapezoid weights.
    pub fn from_coords(kind: GridKind, coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidGrid("need at least two nodes".into()));
        }
        if coords.windows(2).any(|w| !(w[1] > w[0])) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidGrid("coordinates must be finite and strictly increasing".into()));
        }
        let weights = trapezoid_weights(&coords);
        let nodes = match kind {
            GridKind::Additive => coords.clone(),
            GridKind::Multiplicative => coords.iter().map(|u| u.exp()).collect(),
        };
        Ok(Grid1D { kind, coords, nodes, weights })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Spacing in the additive coordinate, if uniform.
    pub fn step(&self) -> Option<f64> {
        let h = self.coords[1] - self.coords[0];
        let uniform = self
            .coords
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.max(1.0));
        uniform.then_some(h)
    }

    /// Measure of the truncation interval.
    pub fn measure(&self) -> f64 {
        self.coords[self.coords.len() - 1] - self.coords[0]
    }

    /// Coordinates symmetric about 0 (`a ↦ 1/a` symmetry for multiplicative grids).
    pub fn is_symmetric(&self) -> bool {
        let n = self.coords.len();
        let scale = self.measure().max(1.0);
        (0..n).all(|i| (self.coords[i] + self.coords[n - 1 - i]).abs() <= 1e-12 * scale)
    }

    /// Uniform and symmetric with an even number of intervals, so that
    /// differences of nodes are nodes.
    pub fn is_lattice(&self) -> bool {
        self.step().is_some() && self.is_symmetric() && self.intervals() % 2 == 0
    }

    pub fn integrate(&self, values: &[C64]) -> C64 {
        debug_assert_eq!(values.len(), self.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * *w).sum()
    }

    /// Index of the node at additive coordinate `k·h` on a lattice grid,
    /// where `k` counts steps from the centre.
    #[inline]
    pub fn lattice_index(&self, k: i64) -> Option<usize> {
        let half = (self.intervals() / 2) as i64;
        let i = k + half;
        (0..=2 * half).contains(&i).then_some(i as usize)
    }
}

/// Composite trapezoid rule on `[lo, hi]` with step at most `max_step`.
pub fn trapezoid<F: Fn(f64) -> C64>(lo: f64, hi: f64, max_step: f64, f: F) -> C64 {
    let n = (((hi - lo) / max_step).ceil() as usize).max(1);
    let h = (hi - lo) / n as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        acc += f(lo + i as f64 * h);
    }
    acc * h
}

/// Trapezoid integral of a real function over the line, enlarging the
/// window until the endpoint values are negligible and halving the step
/// until two successive estimates agree to `rel_tol`.
pub fn converged_line_integral<F: Fn(f64) -> f64>(f: F, center: f64, scale: f64, rel_tol: f64) -> f64 {
    let mut half = 8.0 * scale;
    let peak = f(center).abs().max(f64::MIN_POSITIVE);
    for _ in 0..60 {
        if f(center - half).abs().max(f(center + half).abs()) <= 1e-20 * peak {
            break;
        }
        half *= 2.0;
    }
    let rule = |n: usize| {
        let h = 2.0 * half / n as f64;
        let mut acc = 0.5 * (f(center - half) + f(center + half));
        for i in 1..n {
            acc += f(center - half + i as f64 * h);
        }
        acc * h
    };
    let mut n = 64;
    let mut prev = rule(n);
    loop {
        n *= 2;
        let next = rule(n);
        if (next - prev).abs() <= rel_tol * next.abs() || n >= 1 << 22 {
            return next;
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_integrate_to_the_interval_measure() {
        let one = |g: &Grid1D| g.integrate(&vec![C64::new(1.0, 0.0); g.len()]).re;
        let g = Grid1D::uniform(8.0, 64).unwrap();
        assert!((one(&g) - 16.0).abs() < 1e-12);
        let l = Grid1D::logarithmic(3.5, 256).unwrap();
        assert!((one(&l) - 7.0).abs() < 1e-12);
        assert!(g.is_lattice() && l.is_lattice());
        assert!((l.nodes()[0] * l.nodes()[256] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_grids() {
        assert!(Grid1D::uniform(0.0, 4).is_err());
        assert!(Grid1D::uniform(1.0, 0).is_err());
        assert!(Grid1D::from_coords(GridKind::Additive, vec![0.0, 0.0, 1.0]).is_err());
        let skew = Grid1D::from_coords(GridKind::Additive, vec![-1.0, 0.0, 2.0]).unwrap();
        assert!(!skew.is_symmetric());
        assert!(skew.step().is_none());
    }

    #[test]
    fn lattice_indices() {
        let g = Grid1D::uniform(2.0, 8).unwrap();
        assert_eq!(g.lattice_index(0), Some(4));
        assert_eq!(g.nodes()[g.lattice_index(-3).unwrap()], -1.5);
        assert_eq!(g.lattice_index(5), None);
    }

    #[test]
    fn gaussian_integrals() {
        let exact = (2.0 * std::f64::consts::PI).sqrt() * 0.3;
        let v = converged_line_integral(|t| (-(t - 1.0) * (t - 1.0) / (2.0 * 0.09)).exp(), 1.0, 5.0, 1e-14);
        assert!((v - exact).abs() < 1e-13);
        let t = trapezoid(-12.0, 12.0, 0.1, |t| C64::new((-t * t / 2.0).exp(), 0.0));
        assert!((t.re - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }
}
