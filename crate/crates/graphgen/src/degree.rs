use std::collections::BTreeMap;

use crate::error::GenError;
use crate::rmat::EdgeList;

/// Total-degree distribution of a graph plus its fitted power-law exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    /// degree -> number of vertices with that total degree; zero-degree
    /// vertices are excluded.
    pub histogram: BTreeMap<u64, u64>,
    /// Least-squares slope of `log(count)` against `log(degree)`.
    pub fitted_slope: f64,
}

impl DegreeStats {
    pub fn max_degree(&self) -> u64 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Median total degree over vertices with degree >= 1.
    pub fn median_degree(&self) -> u64 {
        let total: u64 = self.histogram.values().sum();
        if total == 0 {
            return 0;
        }
        let mut seen = 0;
        for (&d, &count) in &self.histogram {
            seen += count;
            if seen * 2 >= total {
                return d;
            }
        }
        unreachable!("median is within the histogram");
    }
}

/// Histogram of total degree (in + out; a self edge contributes 2) and its
/// fitted log-log slope.
pub fn degree_distribution(e: &EdgeList) -> Result<DegreeStats, GenError> {
    let mut degree = vec![0u64; e.n_vertices as usize];
    for &(s, t) in &e.edges {
        degree[s as usize] += 1;
        degree[t as usize] += 1;
    }
    let mut histogram = BTreeMap::new();
    for d in degree {
        if d > 0 {
            *histogram.entry(d).or_insert(0) += 1;
        }
    }
    let fitted_slope = power_law_slope(&histogram)?;
    Ok(DegreeStats {
        histogram,
        fitted_slope,
    })
}

/// Least-squares slope of `ln(count)` vs `ln(degree)` over every histogram
/// point. Needs at least two distinct degrees.
pub fn power_law_slope(histogram: &BTreeMap<u64, u64>) -> Result<f64, GenError> {
    let points: Vec<(f64, f64)> = histogram
        .iter()
        .filter(|&(_, &count)| count >= 1)
        .map(|(&d, &count)| ((d as f64).ln(), (count as f64).ln()))
        .collect();
    if points.len() < 2 {
        return Err(GenError::DegreeFitUndefined);
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    Ok(sxy / sxx)
}
