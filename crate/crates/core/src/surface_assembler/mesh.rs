//! Triangle meshes of surfaces of revolution.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AssembledSurface;

pub const DEFAULT_SEGMENTS: usize = 96;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

/// Edge statistics of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCount {
    pub edges: usize,
    /// Edges used by one face.
    pub boundary: usize,
    /// Edges used by more than two faces.
    pub non_manifold: usize,
}

impl TriangleMesh {
    pub fn edge_count(&self) -> EdgeCount {
        let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                *uses.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        EdgeCount {
            edges: uses.len(),
            boundary: uses.values().filter(|&&n| n == 1).count(),
            non_manifold: uses.values().filter(|&&n| n > 2).count(),
        }
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count().edges as i64 + self.faces.len() as i64
    }

    pub fn is_closed(&self) -> bool {
        let e = self.edge_count();
        e.boundary == 0 && e.non_manifold == 0
    }

    /// `Σ n·(x, y, 0)` over faces, with `n` the area vector at the centroid.
    /// Equals twice the enclosed volume for a closed, outward mesh.
    pub fn radial_flux(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| self.vertices[i]);
                let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                let n = [
                    e1[1] * e2[2] - e1[2] * e2[1],
                    e1[2] * e2[0] - e1[0] * e2[2],
                ];
                let cx = (a[0] + b[0] + c[0]) / 3.0;
                let cy = (a[1] + b[1] + c[1]) / 3.0;
                0.5 * (n[0] * cx + n[1] * cy)
            })
            .sum()
    }

    fn flip(&mut self) {
        for f in &mut self.faces {
            f.swap(1, 2);
        }
    }
}

/// Revolves the polyline `(α, u)` about the `x₃` axis. Points with `α = 0`
/// become a single pole vertex. A closed profile is joined back to its
/// first point without repeating it.
pub fn revolve(profile: &[(f64, f64)], closed: bool, segments: usize) -> TriangleMesh {
    let segments = segments.max(3);
    let mut vertices = Vec::new();
    // Ring `i` is either a pole or `segments` consecutive vertices.
    let mut rings: Vec<(usize, bool)> = Vec::with_capacity(profile.len());
    for &(a, u) in profile {
        let start = vertices.len();
        if a == 0.0 {
            vertices.push([0.0, 0.0, u]);
            rings.push((start, true));
        } else {
            for j in 0..segments {
                let v = std::f64::consts::TAU * j as f64 / segments as f64;
                vertices.push([a * v.cos(), a * v.sin(), u]);
            }
            rings.push((start, false));
        }
    }
    let mut faces = Vec::new();
    let n = rings.len();
    let links = if closed && n > 2 { n } else { n.saturating_sub(1) };
    for i in 0..links {
        let (p, p_pole) = rings[i];
        let (q, q_pole) = rings[(i + 1) % n];
        for j in 0..segments {
            let k = (j + 1) % segments;
            match (p_pole, q_pole) {
                (true, true) => {}
                (true, false) => faces.push([p, q + k, q + j]),
                (false, true) => faces.push([p + j, p + k, q]),
                (false, false) => {
                    faces.push([p + j, p + k, q + k]);
                    faces.push([p + j, q + k, q + j]);
                }
            }
        }
    }
    let mut mesh = TriangleMesh { vertices, faces };
    if mesh.radial_flux() < 0.0 {
        mesh.flip();
    }
    mesh
}

impl AssembledSurface {
    pub fn mesh(&self, segments: usize) -> TriangleMesh {
        revolve(&self.profile(), self.is_closed_loop(), segments)
    }
}
