use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// One computed level next to its prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub eps: f64,
    pub index: usize,
    pub computed: f64,
    pub predicted: f64,
    pub abs_err: f64,
    /// Error in the units of the limit problem: `|λ − λ_pred|` for the symmetric
    /// branch, `√ε·|λ − λ_pred|` for the localized one.
    pub scaled_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorScale {
    Symmetric,
    Localized,
}

impl ErrorScale {
    pub fn factor(self, eps: f64) -> f64 {
        match self {
            ErrorScale::Symmetric => 1.0,
            ErrorScale::Localized => eps.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralReport {
    pub rows: Vec<ReportRow>,
    /// Blow-up distances `(ε, i, distance)`, when extracted.
    pub profile_distances: Vec<(f64, usize, f64)>,
}

impl SpectralReport {
    pub fn push_level(&mut self, eps: f64, computed: &[f64], predicted: &[f64], scale: ErrorScale) -> Result<()> {
        if computed.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("computed eigenvalues are not ascending"));
        }
        for (i, (&c, &p)) in computed.iter().zip(predicted).enumerate() {
            let abs_err = (c - p).abs();
            self.rows.push(ReportRow {
                eps,
                index: i,
                computed: c,
                predicted: p,
                abs_err,
                scaled_err: scale.factor(eps) * abs_err,
            });
        }
        Ok(())
    }

    pub fn push_distance(&mut self, eps: f64, index: usize, distance: f64) {
        self.profile_distances.push((eps, index, distance));
    }

    pub fn eps_values(&self) -> Vec<f64> {
        let mut e: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !e.contains(&r.eps) {
                e.push(r.eps);
            }
        }
        e
    }

    /// Scaled errors of level `i` in sweep order.
    pub fn scaled_errors(&self, i: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.index == i).map(|r| r.scaled_err).collect()
    }
}

/// `true` when every entry is below its predecessor.
pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}
