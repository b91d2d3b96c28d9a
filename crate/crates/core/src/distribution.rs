//! Momentum distributions on a uniform grid (single-photon recoils) and the
//! observables read off them.

use std::fmt;
use std::str::FromStr;

use crate::error::{QkrError, Result};

/// Half-width of an order window, in recoils.
pub const ORDER_WINDOW: f64 = 0.5;
/// The central peak must sit within this distance of `p = 0`.
pub const CENTRAL_PEAK_LIMIT: f64 = 1.0;
/// Crossing search range on either side of the maximum.
pub const CROSSING_SEARCH: f64 = 1.0;
/// Gaussian kernels are truncated at this many standard deviations.
pub const KERNEL_TRUNCATION: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Probability density: `Σ density · Δp = 1`.
    Raw,
    /// Relative to the initial density at `p = 0`.
    Wp,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::Wp => "W_p",
        })
    }
}

/// How the height of a diffraction order is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderMetric {
    /// Maximum density inside the order window.
    #[default]
    Height,
    /// Integrated probability inside the order window.
    Integrated,
}

impl FromStr for OrderMetric {
    type Err = QkrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "height" => Ok(OrderMetric::Height),
            "integrated" => Ok(OrderMetric::Integrated),
            other => Err(QkrError::Argument(format!(
                "metric must be 'height' or 'integrated', got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for OrderMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderMetric::Height => "height",
            OrderMetric::Integrated => "integrated",
        })
    }
}

/// Density sampled on a uniform momentum grid, in single-photon recoils.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    grid: Vec<f64>,
    density: Vec<f64>,
    spacing: f64,
    normalization: Normalization,
}

/// Result of a resolution convolution.
#[derive(Debug, Clone)]
pub struct Convolved {
    pub distribution: MomentumDistribution,
    /// Set when `0 < σ_res < Δp/2`: the kernel is narrower than the grid.
    pub kernel_under_resolved: bool,
}

/// Observables of one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    /// Central-peak FWHM in recoils.
    pub fwhm: f64,
    pub p0_fraction: f64,
    /// `(n, h_n)` for every order window inside the grid; order `n` sits at `p = 2n`.
    pub order_heights: Vec<(i64, f64)>,
    pub per_kick: Option<Vec<(usize, f64)>>,
}

impl MomentumDistribution {
    /// Wraps sampled values. The grid must be strictly increasing with uniform spacing.
    pub fn new(grid: Vec<f64>, density: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if grid.len() != density.len() {
            return Err(QkrError::Shape(format!(
                "grid has {} points, density {}",
                grid.len(),
                density.len()
            )));
        }
        if grid.len() < 2 {
            return Err(QkrError::Shape(
                "a distribution needs at least two grid points".into(),
            ));
        }
        let spacing = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(QkrError::Shape("grid must be increasing".into()));
        }
        let uniform = grid
            .windows(2)
            .all(|w| ((w[1] - w[0]) - spacing).abs() <= 1e-9 * spacing.max(1.0));
        if !uniform {
            return Err(QkrError::Shape("grid spacing is not uniform".into()));
        }
        if let Some(bad) = density.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(QkrError::Domain(format!(
                "density must be finite and >= 0, found {bad}"
            )));
        }
        Ok(MomentumDistribution {
            grid,
            density,
            spacing,
            normalization,
        })
    }

    pub(crate) fn from_parts_unchecked(
        grid: Vec<f64>,
        density: Vec<f64>,
        spacing: f64,
        normalization: Normalization,
    ) -> Self {
        MomentumDistribution {
            grid,
            density,
            spacing,
            normalization,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `Σ density · Δp`.
    pub fn total_mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.spacing
    }

    /// Probability carried by each grid point, `density · Δp`.
    pub fn point_masses(&self) -> Vec<f64> {
        self.density.iter().map(|d| d * self.spacing).collect()
    }

    /// Index of the grid point at `p = 0`, if the grid samples it.
    pub fn zero_index(&self) -> Option<usize> {
        let i = (-self.grid[0] / self.spacing).round();
        if i < 0.0 || i as usize >= self.grid.len() {
            return None;
        }
        let i = i as usize;
        (self.grid[i].abs() < 0.5 * self.spacing).then_some(i)
    }

    /// Density at the grid point nearest to `p`.
    pub fn density_near(&self, p: f64) -> Option<f64> {
        let i = ((p - self.grid[0]) / self.spacing).round();
        (i >= 0.0 && (i as usize) < self.len()).then(|| self.density[i as usize])
    }

    /// Multiplies the density by `factor`.
    pub fn scaled(&self, factor: f64) -> MomentumDistribution {
        let mut out = self.clone();
        out.density.iter_mut().for_each(|d| *d *= factor);
        out
    }

    /// Pointwise sum of two distributions on the same grid.
    pub fn add(&self, other: &MomentumDistribution) -> Result<MomentumDistribution> {
        self.check_same_grid(other)?;
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MomentumDistribution {
            density,
            ..self.clone()
        })
    }

    /// Standard deviation of the density, treating it as a mass distribution.
    pub fn std_dev(&self) -> f64 {
        let mass: f64 = self.density.iter().sum();
        let mean = self
            .grid
            .iter()
            .zip(&self.density)
            .map(|(p, d)| p * d)
            .sum::<f64>()
            / mass;
        let var = self
            .grid
            .iter()
            .zip(&self.density)
            .map(|(p, d)| (p - mean) * (p - mean) * d)
            .sum::<f64>()
            / mass;
        var.sqrt()
    }

    fn check_same_grid(&self, other: &MomentumDistribution) -> Result<()> {
        let same = self.len() == other.len()
            && (self.grid[0] - other.grid[0]).abs() <= 1e-12 * self.spacing
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing;
        if same {
            Ok(())
        } else {
            Err(QkrError::Shape(
                "distributions are sampled on different grids".into(),
            ))
        }
    }

    /// `W_p`: this density divided by the initial density at `p = 0`.
    pub fn normalize_w(&self, initial: &MomentumDistribution) -> Result<MomentumDistribution> {
        self.check_same_grid(initial)?;
        let zero = initial
            .zero_index()
            .ok_or_else(|| QkrError::Shape("grid does not sample p = 0".into()))?;
        let reference = initial.density[zero];
        if reference <= 0.0 {
            return Err(QkrError::Domain("initial density at p = 0 is zero".into()));
        }
        let density = self.density.iter().map(|d| d / reference).collect();
        Ok(MomentumDistribution {
            density,
            normalization: Normalization::Wp,
            ..self.clone()
        })
    }

    /// Discrete convolution with a normalized Gaussian of width `σ_res`.
    pub fn convolve_resolution(&self, sigma: f64) -> Result<Convolved> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(QkrError::Domain(format!(
                "resolution must be finite and >= 0, got {sigma}"
            )));
        }
        if sigma == 0.0 {
            return Ok(Convolved {
                distribution: self.clone(),
                kernel_under_resolved: false,
            });
        }
        let under = sigma < 0.5 * self.spacing;
        let half = (KERNEL_TRUNCATION * sigma / self.spacing).ceil() as usize;
        let mut kernel: Vec<f64> = (0..=2 * half)
            .map(|k| {
                let x = (k as f64 - half as f64) * self.spacing;
                (-x * x / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let total: f64 = kernel.iter().sum();
        kernel.iter_mut().for_each(|k| *k /= total);

        let len = self.len();
        let mut out = vec![0.0; len];
        for (i, &d) in self.density.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(len - 1);
            for (j, slot) in out[lo..=hi].iter_mut().enumerate() {
                *slot += d * kernel[lo + j + half - i];
            }
        }
        Ok(Convolved {
            distribution: MomentumDistribution {
                density: out,
                ..self.clone()
            },
            kernel_under_resolved: under,
        })
    }

    /// Full width at half maximum of the central lobe.
    ///
    /// Walks outward from the global maximum to the first sample below half
    /// maximum on each side and interpolates linearly; side-lobes beyond the
    /// first crossing are ignored.
    pub fn fwhm_central_peak(&self) -> Result<f64> {
        let (peak, &max) =
            self.density
                .iter()
                .enumerate()
                .fold((0, &f64::NEG_INFINITY), |best, (i, d)| {
                    if *d > *best.1 {
                        (i, d)
                    } else {
                        best
                    }
                });
        if max.is_nan() || max <= 0.0 {
            return Err(QkrError::Analysis(
                "distribution has no positive maximum".into(),
            ));
        }
        if self.grid[peak].abs() >= CENTRAL_PEAK_LIMIT {
            return Err(QkrError::Analysis(format!(
                "global maximum at p = {} is not a central peak",
                self.grid[peak]
            )));
        }
        let half_max = max / 2.0;
        let reach = (CROSSING_SEARCH / self.spacing).ceil() as usize;

        let right = (peak + 1..self.len().min(peak + reach + 1))
            .find(|&i| self.density[i] < half_max)
            .ok_or_else(|| {
                QkrError::Analysis("no half-maximum crossing right of the peak".into())
            })?;
        let left = (peak.saturating_sub(reach)..peak)
            .rev()
            .find(|&i| self.density[i] < half_max)
            .ok_or_else(|| {
                QkrError::Analysis("no half-maximum crossing left of the peak".into())
            })?;

        let cross = |inside: usize, outside: usize| {
            let (a, b) = (self.density[inside], self.density[outside]);
            let t = (a - half_max) / (a - b);
            self.grid[inside] + t * (self.grid[outside] - self.grid[inside])
        };
        Ok(cross(right - 1, right) - cross(left + 1, left))
    }

    /// Height of every order window `[2n − ½, 2n + ½]` inside the grid.
    pub fn order_heights(&self, metric: OrderMetric) -> Vec<(i64, f64)> {
        let first = ((self.grid[0] - ORDER_WINDOW) / 2.0).ceil() as i64;
        let last = ((self.grid[self.len() - 1] + ORDER_WINDOW) / 2.0).floor() as i64;
        if last < first {
            return Vec::new();
        }
        let mut heights: Vec<(i64, f64)> = (first..=last).map(|n| (n, 0.0)).collect();
        for (&p, &d) in self.grid.iter().zip(&self.density) {
            let n = (p / 2.0).round() as i64;
            if (p - 2.0 * n as f64).abs() > ORDER_WINDOW || n < first || n > last {
                continue;
            }
            let h = &mut heights[(n - first) as usize].1;
            match metric {
                OrderMetric::Height => *h = h.max(d),
                OrderMetric::Integrated => *h += d * self.spacing,
            }
        }
        heights
    }

    /// `P(0)`: zero-order height over the summed heights of all orders.
    pub fn p0_fraction(&self, metric: OrderMetric) -> f64 {
        fraction_of_zero(&self.order_heights(metric))
    }

    /// FWHM, `P(0)` and order heights in one pass.
    pub fn analyze(&self, metric: OrderMetric) -> Result<AnalysisResult> {
        let order_heights = self.order_heights(metric);
        Ok(AnalysisResult {
            fwhm: self.fwhm_central_peak()?,
            p0_fraction: fraction_of_zero(&order_heights),
            order_heights,
            per_kick: None,
        })
    }
}

fn fraction_of_zero(heights: &[(i64, f64)]) -> f64 {
    let total: f64 = heights.iter().map(|(_, h)| h).sum();
    let zero = heights
        .iter()
        .find(|(n, _)| *n == 0)
        .map_or(0.0, |(_, h)| *h);
    if total > 0.0 {
        zero / total
    } else {
        0.0
    }
}
