use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// Uniform mesh `x_j = j·h`, `j = 0..=n_cells`, on `[0, l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    length: f64,
    n_cells: usize,
    spacing: f64,
    nodes: Arc<[f64]>,
}

impl Grid1D {
    pub fn new(length: f64, n_cells: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return domain(format!("domain length must be positive, got {length}"));
        }
        if n_cells < 2 {
            return domain(format!("grid needs at least 2 cells, got {n_cells}"));
        }
        let spacing = length / n_cells as f64;
        let nodes: Arc<[f64]> = (0..=n_cells)
            .map(|j| if j == n_cells { length } else { j as f64 * spacing })
            .collect();
        Ok(Self {
            length,
            n_cells,
            spacing,
            nodes,
        })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Index of the node at `x`, if `x` sits on the grid (to 1e-9 cells).
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let r = x / self.spacing;
        let j = r.round();
        if j >= 0.0 && (r - j).abs() <= 1e-9 && (j as usize) <= self.n_cells {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(self.clone(), self.nodes.iter().map(|&x| f(x)).collect())
    }
}

/// Grid function: one finite value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: grid.n_nodes(),
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        let values = vec![0.0; grid.n_nodes()];
        Self { grid, values }
    }

    pub fn constant(grid: Grid1D, c: f64) -> Result<Self> {
        let values = vec![c; grid.n_nodes()];
        Self::new(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Piecewise-linear interpolation at `x ∈ [0, l]`.
    pub fn interpolate(&self, x: f64) -> f64 {
        let h = self.grid.spacing();
        let n = self.grid.n_cells();
        let s = (x / h).clamp(0.0, n as f64);
        let j = (s.floor() as usize).min(n - 1);
        let theta = s - j as f64;
        self.values[j] * (1.0 - theta) + self.values[j + 1] * theta
    }
}

impl std::ops::Index<usize> for Field {
    type Output = f64;

    fn index(&self, j: usize) -> &f64 {
        &self.values[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_uniform_and_pinned() {
        let g = Grid1D::new(1.7, 37).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(37), 1.7);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!((g.spacing() * 37.0 - 1.7).abs() / 1.7 < 1e-14);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(1.0, 1).is_err());
        assert!(Grid1D::new(0.0, 8).is_err());
        assert!(Grid1D::new(f64::INFINITY, 8).is_err());
    }

    #[test]
    fn field_rejects_nonfinite_and_bad_length() {
        let g = Grid1D::new(1.0, 4).unwrap();
        assert!(matches!(
            Field::new(g.clone(), vec![0.0, 1.0, f64::NAN, 0.0, 0.0]),
            Err(Error::NonFinite { index: 2, .. })
        ));
        assert!(matches!(
            Field::new(g, vec![0.0; 3]),
            Err(Error::LengthMismatch { expected: 5, got: 3 })
        ));
    }

    #[test]
    fn node_lookup() {
        let g = Grid1D::new(1.0, 8).unwrap();
        assert_eq!(g.node_index(0.375), Some(3));
        assert_eq!(g.node_index(1.0), Some(8));
        assert_eq!(g.node_index(0.3), None);
    }

    #[test]
    fn interpolation_is_exact_for_affine() {
        let g = Grid1D::new(2.0, 10).unwrap();
        let f = g.sample(|x| 3.0 * x - 1.0).unwrap();
        for x in [0.0, 0.13, 1.0, 1.99, 2.0] {
            assert!((f.interpolate(x) - (3.0 * x - 1.0)).abs() < 1e-14);
        }
    }
}
