//! Site layouts, local operator terms and product operators on a chain.
//!
//! Basis states are ordered with site 0 most significant, matching `kron`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{cr, fro_norm, hermiticity_residual, identity, unitarity_residual, CMat, C64, ONE};
use crate::sparse::SparseMatrix;
use crate::spin;

use super::ChainError;

/// Default bound on the Hilbert-space dimension of a layout.
pub const DEFAULT_DIM_CAP: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSite {
    Half,
    One,
}

impl SpinSite {
    pub fn dim(self) -> usize {
        match self {
            SpinSite::Half => 2,
            SpinSite::One => 3,
        }
    }

    /// `[Sˣ, Sʸ, Sᶻ]` for this site.
    pub fn spin_operators(self) -> [CMat; 3] {
        match self {
            SpinSite::Half => spin::spin_half(),
            SpinSite::One => spin::spin1(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLayout {
    sites: Vec<SpinSite>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl ChainLayout {
    pub fn new(sites: Vec<SpinSite>, cap: usize) -> Result<Self, ChainError> {
        if sites.is_empty() {
            return Err(ChainError::BadChainLength(0));
        }
        let dims: Vec<usize> = sites.iter().map(|s| s.dim()).collect();
        let mut total: usize = 1;
        for &d in &dims {
            total = total.checked_mul(d).filter(|&t| t <= cap).ok_or(ChainError::DimensionCap { cap })?;
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Ok(ChainLayout { sites, dims, strides, total_dim: total })
    }

    pub fn sites(&self) -> &[SpinSite] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn site_dim(&self, s: usize) -> usize {
        self.dims[s]
    }

    #[inline]
    fn digit(&self, index: usize, s: usize) -> usize {
        (index / self.strides[s]) % self.dims[s]
    }

    /// Embed a local matrix acting on `support` (in the given order) into the
    /// full space.
    pub fn embed(&self, support: &[usize], m: &CMat) -> SparseMatrix {
        let local_dims: Vec<usize> = support.iter().map(|&s| self.dims[s]).collect();
        let local_dim: usize = local_dims.iter().product();
        debug_assert_eq!(m.nrows(), local_dim);
        // Nonzero columns of each local row.
        let rows: Vec<Vec<(usize, C64)>> =
            (0..local_dim).map(|r| (0..local_dim).filter(|&c| m[(r, c)] != C64::new(0.0, 0.0)).map(|c| (c, m[(r, c)])).collect()).collect();
        let mut triplets = Vec::new();
        for full in 0..self.total_dim {
            let mut local = 0;
            let mut base = full;
            for &s in support {
                let d = self.digit(full, s);
                local = local * self.dims[s] + d;
                base -= d * self.strides[s];
            }
            for &(c, v) in &rows[local] {
                let mut col = base;
                let mut rem = c;
                for (k, &s) in support.iter().enumerate().rev() {
                    col += (rem % local_dims[k]) * self.strides[s];
                    rem /= local_dims[k];
                }
                triplets.push((full, col, v));
            }
        }
        SparseMatrix::from_triplets(self.total_dim, triplets)
    }

    /// Apply a single-site matrix to every column of `x`.
    pub fn apply_site(&self, site: usize, m: &CMat, x: &CMat) -> CMat {
        let d = self.dims[site];
        let stride = self.strides[site];
        let mut y = CMat::zeros(x.nrows(), x.ncols());
        for col in 0..x.ncols() {
            for full in 0..self.total_dim {
                let digit = self.digit(full, site);
                if digit != 0 {
                    continue;
                }
                for r in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..d {
                        acc += m[(r, c)] * x[(full + c * stride, col)];
                    }
                    y[(full + r * stride, col)] = acc;
                }
            }
        }
        y
    }
}

/// A Hermitian matrix on an ordered list of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub support: Vec<usize>,
    pub matrix: CMat,
    pub label: String,
}

impl OperatorTerm {
    pub fn new(support: Vec<usize>, matrix: CMat, label: impl Into<String>) -> Result<Self, ChainError> {
        let label = label.into();
        let r = hermiticity_residual(&matrix);
        if r > 1e-12 * fro_norm(&matrix).max(1.0) {
            return Err(ChainError::NotHermitian { label, residual: r });
        }
        for (k, s) in support.iter().enumerate() {
            if support[..k].contains(s) {
                return Err(ChainError::BadSupport(label));
            }
        }
        Ok(OperatorTerm { support, matrix, label })
    }

    pub fn validate(&self, layout: &ChainLayout) -> Result<(), ChainError> {
        if self.support.iter().any(|&s| s >= layout.len()) {
            return Err(ChainError::BadSupport(self.label.clone()));
        }
        let d: usize = self.support.iter().map(|&s| layout.site_dim(s)).product();
        if self.matrix.nrows() != d {
            return Err(ChainError::BadSupport(self.label.clone()));
        }
        Ok(())
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.matrix *= cr(c);
        self
    }
}

/// A phase times a tensor product of single-site unitaries (identity on the
/// remaining sites).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOperator {
    pub phase: C64,
    pub factors: Vec<(usize, CMat)>,
    pub label: String,
}

impl ProductOperator {
    pub fn new(phase: C64, factors: Vec<(usize, CMat)>, label: impl Into<String>) -> Self {
        ProductOperator { phase, factors, label: label.into() }
    }

    pub fn identity() -> Self {
        ProductOperator { phase: ONE, factors: Vec::new(), label: String::from("I") }
    }

    /// `self · other` (sites in `other` act first).
    pub fn compose(&self, other: &ProductOperator) -> ProductOperator {
        let mut factors = self.factors.clone();
        for (s, m) in &other.factors {
            match factors.iter_mut().find(|(t, _)| t == s) {
                Some((_, f)) => *f = &*f * m,
                None => factors.push((*s, m.clone())),
            }
        }
        ProductOperator { phase: self.phase * other.phase, factors, label: alloc::format!("{}·{}", self.label, other.label) }
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.phase *= c;
        self
    }

    pub fn unitarity_residual(&self) -> f64 {
        let f = self.factors.iter().map(|(_, m)| unitarity_residual(m)).fold(0.0, f64::max);
        f.max((self.phase.norm() - 1.0).abs())
    }

    pub fn apply(&self, layout: &ChainLayout, x: &CMat) -> CMat {
        let mut y = x.clone();
        for (s, m) in &self.factors {
            y = layout.apply_site(*s, m, &y);
        }
        y * self.phase
    }

    /// The local factor on `support` (identity on support sites without a factor).
    fn local(&self, layout: &ChainLayout, support: &[usize]) -> CMat {
        let mut m = identity(1);
        for &s in support {
            let f = self.factors.iter().find(|(t, _)| *t == s).map(|(_, f)| f.clone()).unwrap_or_else(|| identity(layout.site_dim(s)));
            m = crate::linalg::kron(&m, &f);
        }
        m
    }

    /// `‖P T P† − T‖` computed on the term's support.
    pub fn commutator_residual(&self, layout: &ChainLayout, term: &OperatorTerm) -> f64 {
        let p = self.local(layout, &term.support);
        fro_norm(&(&p * &term.matrix * p.adjoint() - &term.matrix))
    }

    /// The restriction `Gᴴ P G` to the column span of an orthonormal frame.
    pub fn restricted(&self, layout: &ChainLayout, frame: &CMat) -> CMat {
        frame.adjoint() * self.apply(layout, frame)
    }
}
