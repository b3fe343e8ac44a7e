//! Time-dependent coefficients and scheduled Hamiltonians on `t ∈ [0, 1]`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::eigen::HermitianOperator;
use crate::linalg::CMat;
use crate::sparse::SparseMatrix;

use super::layout::{ChainLayout, OperatorTerm, ProductOperator};
use super::ChainError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ramp {
    /// `sin²(πs/2)`: zero slope at both ends.
    SinSquared,
    Linear,
}

impl Ramp {
    fn shape(self, s: f64) -> f64 {
        match self {
            Ramp::SinSquared => {
                let v = (core::f64::consts::FRAC_PI_2 * s).sin();
                v * v
            }
            Ramp::Linear => s,
        }
    }
}

/// A piecewise-smooth coefficient `[0, 1] → ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Constant(f64),
    /// `from` before `start`, `to` after `end`, shaped in between.
    Ramp { from: f64, to: f64, start: f64, end: f64, shape: Ramp },
    /// `peak·sin(πs)` on `[start, end]`, zero outside.
    Bump { start: f64, end: f64, peak: f64 },
    Sum(Vec<Schedule>),
}

fn progress(t: f64, start: f64, end: f64) -> f64 {
    if end <= start {
        return if t < start { 0.0 } else { 1.0 };
    }
    ((t - start) / (end - start)).clamp(0.0, 1.0)
}

impl Schedule {
    pub fn ramp(from: f64, to: f64, start: f64, end: f64) -> Self {
        Schedule::Ramp { from, to, start, end, shape: Ramp::SinSquared }
    }

    /// `sin²(πt/2)` on the whole interval.
    pub fn rising() -> Self {
        Schedule::ramp(0.0, 1.0, 0.0, 1.0)
    }

    /// `1 − sin²(πt/2)` on the whole interval.
    pub fn falling() -> Self {
        Schedule::ramp(1.0, 0.0, 0.0, 1.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::Ramp { from, to, start, end, shape } => from + (to - from) * shape.shape(progress(t, *start, *end)),
            Schedule::Bump { start, end, peak } => {
                if t <= *start || t >= *end {
                    0.0
                } else {
                    peak * (core::f64::consts::PI * progress(t, *start, *end)).sin()
                }
            }
            Schedule::Sum(parts) => parts.iter().map(|p| p.value(t)).sum(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScheduledTerm {
    pub term: OperatorTerm,
    pub schedule: Schedule,
    pub embedded: SparseMatrix,
}

/// `H(t) = Σ_k c_k(t) T_k` with declared conserved operators.
#[derive(Debug, Clone)]
pub struct ScheduledHamiltonian {
    pub layout: ChainLayout,
    pub terms: Vec<ScheduledTerm>,
    pub conserved: Vec<ProductOperator>,
    pub description: String,
    pub warnings: Vec<String>,
}

impl ScheduledHamiltonian {
    pub fn new(layout: ChainLayout, terms: Vec<(OperatorTerm, Schedule)>, description: impl Into<String>) -> Result<Self, ChainError> {
        let mut out = Vec::with_capacity(terms.len());
        for (term, schedule) in terms {
            term.validate(&layout)?;
            let embedded = layout.embed(&term.support, &term.matrix);
            out.push(ScheduledTerm { term, schedule, embedded });
        }
        let h = ScheduledHamiltonian { layout, terms: out, conserved: Vec::new(), description: description.into(), warnings: Vec::new() };
        for k in 0..=10 {
            h.coefficients(k as f64 / 10.0)?;
        }
        Ok(h)
    }

    pub fn with_conserved(mut self, conserved: Vec<ProductOperator>) -> Self {
        self.conserved = conserved;
        self
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn coefficients(&self, t: f64) -> Result<Vec<f64>, ChainError> {
        let c: Vec<f64> = self.terms.iter().map(|s| s.schedule.value(t)).collect();
        if c.iter().any(|v| !v.is_finite()) {
            return Err(ChainError::NonFiniteSchedule(t));
        }
        Ok(c)
    }

    /// The Hamiltonian at time `t` as a lazily summed operator.
    pub fn at(&self, t: f64) -> Result<HamiltonianAt<'_>, ChainError> {
        let coeffs = self.coefficients(t)?;
        Ok(HamiltonianAt { parts: self.terms.iter().zip(coeffs).filter(|(_, c)| *c != 0.0).map(|(s, c)| (c, &s.embedded)).collect(), dim: self.dim() })
    }

    pub fn dense(&self, t: f64) -> Result<CMat, ChainError> {
        Ok(self.at(t)?.to_dense())
    }

    /// Upper bound on `‖[P, H(t)]‖_F` over the declared conserved operators,
    /// from the local residuals of the individual terms.
    pub fn conserved_residual(&self, t: f64) -> Result<f64, ChainError> {
        let coeffs = self.coefficients(t)?;
        let mut worst: f64 = 0.0;
        for p in &self.conserved {
            let r: f64 = self.terms.iter().zip(&coeffs).map(|(s, c)| c.abs() * p.commutator_residual(&self.layout, &s.term)).sum();
            worst = worst.max(r);
        }
        Ok(worst)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|s| s.embedded.is_real())
    }
}

pub struct HamiltonianAt<'a> {
    parts: Vec<(f64, &'a SparseMatrix)>,
    dim: usize,
}

impl HermitianOperator for HamiltonianAt<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &CMat) -> CMat {
        let mut y = CMat::zeros(x.nrows(), x.ncols());
        for (c, m) in &self.parts {
            m.apply_add(*c, x, &mut y);
        }
        y
    }

    fn to_dense(&self) -> CMat {
        let mut h = CMat::zeros(self.dim, self.dim);
        for (c, m) in &self.parts {
            m.add_to_dense(*c, &mut h);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramps_pin_endpoints() {
        let f = Schedule::rising();
        let g = Schedule::falling();
        assert_eq!(f.value(0.0), 0.0);
        assert!((f.value(1.0) - 1.0).abs() < 1e-15);
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            assert!((f.value(t) + g.value(t) - 1.0).abs() < 1e-15);
        }
        let lin = Schedule::Ramp { from: 2.0, to: 4.0, start: 0.5, end: 1.0, shape: Ramp::Linear };
        assert_eq!(lin.value(0.25), 2.0);
        assert!((lin.value(0.75) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn piecewise_sum_and_bump() {
        let up_down = Schedule::Sum(alloc::vec![Schedule::ramp(0.0, 1.0, 0.0, 0.5), Schedule::ramp(0.0, -1.0, 0.5, 1.0)]);
        assert!((up_down.value(0.5) - 1.0).abs() < 1e-15);
        assert!(up_down.value(1.0).abs() < 1e-15);
        let b = Schedule::Bump { start: 0.25, end: 0.75, peak: 0.5 };
        assert_eq!(b.value(0.1), 0.0);
        assert!((b.value(0.5) - 0.5).abs() < 1e-15);
    }
}
