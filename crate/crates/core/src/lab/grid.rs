//! Square-lattice grids with Dirichlet boundaries on a disk or a box.

use crate::error::{CoreError, Result};
use crate::geometry::Vector2;
use serde::{Deserialize, Serialize};

/// Minimum number of grid spacings across the smallest half-extent.
pub const RESOLUTION_GUARD: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridShape {
    /// Hard-wall disk; nodes strictly inside the circle are interior.
    Disk { center: Vector2, radius: f64 },
    /// Hard-wall box spanning center +- (half_w, half_h).
    Rect {
        center: Vector2,
        half_w: f64,
        half_h: f64,
    },
}

impl GridShape {
    fn center(&self) -> Vector2 {
        match *self {
            GridShape::Disk { center, .. } => center,
            GridShape::Rect { center, .. } => center,
        }
    }

    fn min_half_extent(&self) -> f64 {
        match *self {
            GridShape::Disk { radius, .. } => radius,
            GridShape::Rect { half_w, half_h, .. } => half_w.min(half_h),
        }
    }

    fn contains(&self, p: Vector2) -> bool {
        match *self {
            GridShape::Disk { center, radius } => (p - center).norm() < radius,
            GridShape::Rect {
                center,
                half_w,
                half_h,
            } => (p.x1 - center.x1).abs() <= half_w && (p.x2 - center.x2).abs() <= half_h,
        }
    }
}

/// A uniform grid over the interior of a shape, with a dense lattice-to-node
/// index map. Node order is row-major (x2 outer, x1 inner), which fixes the
/// matrix ordering bit-for-bit.
#[derive(Debug, Clone)]
pub struct Grid2D {
    h: f64,
    shape: GridShape,
    nodes: Vec<Vector2>,
    index: Vec<Option<u32>>,
    cols: usize,
    rows: usize,
}

impl Grid2D {
    pub fn disk(center: Vector2, radius: f64, h: f64) -> Result<Self> {
        Self::build(GridShape::Disk { center, radius }, h)
    }

    pub fn rect(center: Vector2, half_w: f64, half_h: f64, h: f64) -> Result<Self> {
        Self::build(
            GridShape::Rect {
                center,
                half_w,
                half_h,
            },
            h,
        )
    }

    fn build(shape: GridShape, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "grid spacing must be positive, got {h}"
            )));
        }
        let extent = shape.min_half_extent();
        if extent / h < RESOLUTION_GUARD {
            return Err(CoreError::InvalidInput(format!(
                "resolution guard violated: half-extent {extent} / spacing {h} = {} < {}",
                extent / h,
                RESOLUTION_GUARD
            )));
        }
        let (n1, n2) = match shape {
            GridShape::Disk { radius, .. } => {
                let n = (radius / h).floor() as i64;
                (n, n)
            }
            GridShape::Rect { half_w, half_h, .. } => {
                ((half_w / h).floor() as i64, (half_h / h).floor() as i64)
            }
        };
        let cols = (2 * n1 + 1) as usize;
        let rows = (2 * n2 + 1) as usize;
        let center = shape.center();
        let mut nodes = Vec::new();
        let mut index = vec![None; cols * rows];
        for j in -n2..=n2 {
            for i in -n1..=n1 {
                let p = center + Vector2::new(i as f64 * h, j as f64 * h);
                if shape.contains(p) {
                    let slot = ((j + n2) as usize) * cols + (i + n1) as usize;
                    index[slot] = Some(nodes.len() as u32);
                    nodes.push(p);
                }
            }
        }
        if nodes.is_empty() {
            return Err(CoreError::InvalidInput("grid has no interior nodes".into()));
        }
        Ok(Grid2D {
            h,
            shape,
            nodes,
            index,
            cols,
            rows,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vector2] {
        &self.nodes
    }

    /// Iterates links (node, right/up neighbor) in deterministic order.
    pub fn links(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(2 * self.nodes.len());
        for j in 0..self.rows {
            for i in 0..self.cols {
                let Some(r) = self.index[j * self.cols + i] else {
                    continue;
                };
                if i + 1 < self.cols {
                    if let Some(r2) = self.index[j * self.cols + i + 1] {
                        out.push((r, r2));
                    }
                }
                if j + 1 < self.rows {
                    if let Some(r2) = self.index[(j + 1) * self.cols + i] {
                        out.push((r, r2));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_grid_counts() {
        let g = Grid2D::disk(Vector2::ZERO, 1.0, 1.0 / 32.0).unwrap();
        // interior node count close to pi (radius/h)^2
        let expect = std::f64::consts::PI * 32.0 * 32.0;
        assert!((g.dim() as f64 - expect).abs() / expect < 0.05);
        for p in g.nodes() {
            assert!(p.norm() < 1.0);
        }
    }

    #[test]
    fn resolution_guard_enforced() {
        assert!(Grid2D::disk(Vector2::ZERO, 1.0, 0.1).is_err());
        assert!(Grid2D::rect(Vector2::ZERO, 0.5, 2.0, 0.1).is_err());
    }

    #[test]
    fn links_connect_neighbors() {
        let g = Grid2D::disk(Vector2::ZERO, 1.0, 1.0 / 16.0).unwrap();
        for (a, b) in g.links() {
            let d = g.nodes()[b as usize] - g.nodes()[a as usize];
            assert!((d.norm() - g.h()).abs() < 1e-12);
        }
    }
}
