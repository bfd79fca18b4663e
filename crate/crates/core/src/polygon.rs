use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::CurveError;

/// Ambient dimension of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn as_usize(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Option<Dim> {
        match d {
            2 => Some(Dim::Two),
            3 => Some(Dim::Three),
            _ => None,
        }
    }
}

/// An ordered vertex sequence in the plane or in space.
///
/// Planar polygons store `z = 0`. Indexing through [`Polygon::vertex`]
/// wraps modulo the vertex count for closed polygons.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    dim: Dim,
    vertices: Vec<Vector3<f64>>,
    closed: bool,
}

impl Polygon {
    pub fn new(dim: Dim, vertices: Vec<Vector3<f64>>, closed: bool) -> Result<Self, CurveError> {
        let required = if closed { 3 } else { 4 };
        if vertices.len() < required {
            return Err(CurveError::TooFewVertices { required, actual: vertices.len() });
        }
        for (index, v) in vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(CurveError::NonFinite { index });
            }
            if dim == Dim::Two && v.z != 0.0 {
                return Err(CurveError::NotPlanarCoordinates { index });
            }
        }
        Ok(Self { dim, vertices, closed })
    }

    /// Closed planar polygon from `(x, y)` pairs.
    pub fn planar(points: &[[f64; 2]]) -> Result<Self, CurveError> {
        Self::new(Dim::Two, points.iter().map(|p| Vector3::new(p[0], p[1], 0.0)).collect(), true)
    }

    /// Closed space polygon from `(x, y, z)` triples.
    pub fn spatial(points: &[[f64; 3]]) -> Result<Self, CurveError> {
        Self::new(Dim::Three, points.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect(), true)
    }

    /// Build from flat coordinate rows, each of length `dim`.
    pub fn from_rows(dim: Dim, rows: &[Vec<f64>], closed: bool) -> Result<Self, CurveError> {
        let d = dim.as_usize();
        let mut verts = Vec::with_capacity(rows.len());
        for (index, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(CurveError::WrongDimension { expected: d, found: row.len() });
            }
            let z = if d == 3 { row[2] } else { 0.0 };
            if !row.iter().all(|c| c.is_finite()) {
                return Err(CurveError::NonFinite { index });
            }
            verts.push(Vector3::new(row[0], row[1], z));
        }
        Self::new(dim, verts, closed)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    /// Vertex `k`, wrapping modulo the vertex count. For open polygons
    /// `k` must lie in range.
    pub fn vertex(&self, k: isize) -> Vector3<f64> {
        let n = self.vertices.len() as isize;
        if self.closed {
            self.vertices[k.rem_euclid(n) as usize]
        } else {
            self.vertices[usize::try_from(k).expect("open polygon index out of range")]
        }
    }

    /// Edge tangent `r_{k+1} - r_k`.
    pub fn edge(&self, k: isize) -> Vector3<f64> {
        self.vertex(k + 1) - self.vertex(k)
    }

    /// Coordinates as rows of length `dim`.
    pub fn coords(&self) -> Vec<Vec<f64>> {
        let d = self.dim.as_usize();
        self.vertices.iter().map(|v| v.as_slice()[..d].to_vec()).collect()
    }

    /// Largest absolute coordinate (at least a tiny positive value).
    pub fn scale(&self) -> f64 {
        self.vertices.iter().flat_map(|v| v.iter().copied()).fold(0.0_f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE)
    }

    /// Threshold below which a denominator determinant counts as zero.
    pub fn degeneracy_tolerance(&self, relative: f64) -> f64 {
        relative * self.scale().powi(self.dim.as_usize() as i32)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max((a - b).norm());
            }
        }
        best
    }

    /// Relabel so that new vertex `i` is old vertex `i + k`.
    pub fn rotated(&self, k: isize) -> Self {
        let n = self.len() as isize;
        let vertices = (0..n).map(|i| self.vertices[(i + k).rem_euclid(n) as usize]).collect();
        Self { vertices, ..self.clone() }
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices, ..self.clone() }
    }

    /// Embed a planar polygon in space at height `z`.
    pub fn lifted(&self, z: f64) -> Self {
        let vertices = self.vertices.iter().map(|v| Vector3::new(v.x, v.y, z)).collect();
        Self { dim: Dim::Three, vertices, closed: self.closed }
    }

    /// Drop the `z` coordinate.
    pub fn flattened(&self) -> Self {
        let vertices = self.vertices.iter().map(|v| Vector3::new(v.x, v.y, 0.0)).collect();
        Self { dim: Dim::Two, vertices, closed: self.closed }
    }

    pub fn translated(&self, b: &Vector3<f64>) -> Self {
        let b = self.project(b);
        self.map_vertices(|v| v + b)
    }

    /// `x -> A x` for a space polygon.
    pub fn linear_map3(&self, a: &Matrix3<f64>) -> Self {
        self.map_vertices(|v| a * v)
    }

    /// `x -> A x + b` for a planar polygon.
    pub fn affine_map2(&self, a: &Matrix2<f64>, b: &Vector2<f64>) -> Self {
        self.map_vertices(|v| {
            let w = a * Vector2::new(v.x, v.y) + b;
            Vector3::new(w.x, w.y, 0.0)
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_vertices(|v| v * s)
    }

    /// Apply `f` to every vertex, keeping dimension and closure.
    pub fn map_vertices(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        let vertices = self.vertices.iter().map(|v| self.project(&f(v))).collect();
        Self { vertices, ..self.clone() }
    }

    pub(crate) fn with_vertices(&self, vertices: Vec<Vector3<f64>>) -> Self {
        let vertices = vertices.iter().map(|v| self.project(v)).collect();
        Self { vertices, ..self.clone() }
    }

    fn project(&self, v: &Vector3<f64>) -> Vector3<f64> {
        match self.dim {
            Dim::Two => Vector3::new(v.x, v.y, 0.0),
            Dim::Three => *v,
        }
    }

    pub fn centroid(&self) -> Vector3<f64> {
        self.vertices.iter().sum::<Vector3<f64>>() / self.len() as f64
    }
}

/// `[a, b]` for planar vectors (the `z` parts are ignored).
pub fn det2(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// `[a, b, c]`, the determinant with the three vectors as columns.
pub fn det3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}
