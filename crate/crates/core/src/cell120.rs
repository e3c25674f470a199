//! The spherical 120-cell: Voronoi cells about the points of `D*`.
//!
//! Cells are indexed by group-element ids. Faces, edges and vertices are the
//! 2-, 3- and 4-cliques of the adjacency graph on cell centers (centers at
//! distance `π/5`); a vertex sits at the radial projection of the Euclidean
//! centroid of its four cell centers.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::dodeca::BinaryDodecGroup;
use crate::quat::{dist_s3, stereographic, Quaternion, UnitQuaternion, EPS_ALG};

pub const CELL_COUNT: usize = 120;
pub const FACE_COUNT: usize = 720;
pub const EDGE_COUNT: usize = 1200;
pub const VERTEX_COUNT: usize = 600;

/// Spacing between adjacent cell centers.
pub const CELL_SPACING: f64 = PI / 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("120-cell is inconsistent: {0}")]
    ComplexInconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VertexRecord {
    pub cells: [usize; 4],
    pub position: UnitQuaternion,
}

/// Cells, faces, edges and vertices of the spherical 120-cell.
#[derive(Clone, Debug)]
pub struct Complex120 {
    group: BinaryDodecGroup,
    adjacency: Vec<[usize; 12]>,
    faces: Vec<[usize; 2]>,
    edges: Vec<[usize; 3]>,
    vertices: Vec<VertexRecord>,
    edge_endpoints: Vec<[usize; 2]>,
    cell_vertices: Vec<Vec<usize>>,
    face_index: HashMap<[usize; 2], usize>,
    edge_index: HashMap<[usize; 3], usize>,
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn sorted3(mut x: [usize; 3]) -> [usize; 3] {
    x.sort_unstable();
    x
}

pub fn build_complex(group: BinaryDodecGroup) -> Result<Complex120, ComplexError> {
    build_complex_with(group, EPS_ALG)
}

/// Builds the complex, accepting neighbors whose spacing is within `tol` of
/// `π/5`.
pub fn build_complex_with(group: BinaryDodecGroup, tol: f64) -> Result<Complex120, ComplexError> {
    let n = group.len();
    let bad = |msg: String| Err(ComplexError::ComplexInconsistent(msg));
    if n != CELL_COUNT {
        return bad(format!("{n} cells"));
    }
    let mut adjacency = Vec::with_capacity(n);
    for a in 0..n {
        let nbrs: Vec<usize> = (0..n)
            .filter(|&b| {
                b != a && (dist_s3(group.element(a), group.element(b)) - CELL_SPACING).abs() <= tol
            })
            .collect();
        match <[usize; 12]>::try_from(nbrs.as_slice()) {
            Ok(arr) => adjacency.push(arr),
            Err(_) => return bad(format!("cell {a} has {} neighbors", nbrs.len())),
        }
    }
    let adjacent = |a: usize, b: usize| adjacency[a].binary_search(&b).is_ok();

    let mut faces = Vec::new();
    let mut edges = Vec::new();
    let mut quads = Vec::new();
    for a in 0..n {
        for &b in adjacency[a].iter().filter(|&&b| b > a) {
            faces.push([a, b]);
            for &c in adjacency[a].iter().filter(|&&c| c > b && adjacent(b, c)) {
                edges.push([a, b, c]);
                for &d in adjacency[a]
                    .iter()
                    .filter(|&&d| d > c && adjacent(b, d) && adjacent(c, d))
                {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    if (faces.len(), edges.len(), quads.len()) != (FACE_COUNT, EDGE_COUNT, VERTEX_COUNT) {
        return bad(format!(
            "counts (faces, edges, vertices) = ({}, {}, {})",
            faces.len(),
            edges.len(),
            quads.len()
        ));
    }

    let vertices: Vec<VertexRecord> = quads
        .iter()
        .map(|&cells| {
            let sum = cells
                .iter()
                .fold(Quaternion::ZERO, |acc, &c| acc + group.element(c).quaternion());
            VertexRecord {
                cells,
                position: sum.normalize().expect("vertex centroid is nonzero"),
            }
        })
        .collect();

    let face_index: HashMap<[usize; 2], usize> =
        faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let edge_index: HashMap<[usize; 3], usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let mut endpoints: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    let mut cell_vertices: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (vid, v) in vertices.iter().enumerate() {
        let [a, b, c, d] = v.cells;
        for tri in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
            endpoints[edge_index[&tri]].push(vid);
        }
        for cell in v.cells {
            cell_vertices[cell].push(vid);
        }
    }
    let mut edge_endpoints = Vec::with_capacity(edges.len());
    for (eid, ends) in endpoints.iter().enumerate() {
        match ends.as_slice() {
            &[u, w] => edge_endpoints.push(sorted2(u, w)),
            _ => return bad(format!("edge {eid} has {} endpoints", ends.len())),
        }
    }
    if let Some(c) = cell_vertices.iter().position(|vs| vs.len() != 20) {
        return bad(format!("cell {c} has {} vertices", cell_vertices[c].len()));
    }

    Ok(Complex120 {
        group,
        adjacency,
        faces,
        edges,
        vertices,
        edge_endpoints,
        cell_vertices,
        face_index,
        edge_index,
    })
}

impl Complex120 {
    pub fn new() -> Result<Self, Box<dyn std::error::Error + Send + Sync>> {
        Ok(build_complex(BinaryDodecGroup::new()?)?)
    }

    pub fn group(&self) -> &BinaryDodecGroup {
        &self.group
    }

    pub fn cell_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn center(&self, cell: usize) -> UnitQuaternion {
        self.group.element(cell)
    }

    pub fn neighbors(&self, cell: usize) -> &[usize; 12] {
        &self.adjacency[cell]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn faces(&self) -> &[[usize; 2]] {
        &self.faces
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &VertexRecord {
        &self.vertices[id]
    }

    /// The two vertex ids bounding edge `id`.
    pub fn edge_endpoints(&self, id: usize) -> [usize; 2] {
        self.edge_endpoints[id]
    }

    pub fn cell_vertex_ids(&self, cell: usize) -> &[usize] {
        &self.cell_vertices[cell]
    }

    pub fn face_id(&self, a: usize, b: usize) -> Option<usize> {
        self.face_index.get(&sorted2(a, b)).copied()
    }

    pub fn edge_id(&self, cells: [usize; 3]) -> Option<usize> {
        self.edge_index.get(&sorted3(cells)).copied()
    }

    /// `V - E + F - C`.
    pub fn euler_sum(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
            - self.cell_count() as i64
    }

    /// Center of the face between adjacent cells `a` and `b`: the midpoint of
    /// the geodesic joining their centers.
    pub fn face_center(&self, a: usize, b: usize) -> UnitQuaternion {
        let [lo, hi] = sorted2(a, b);
        (self.center(lo).quaternion() + self.center(hi).quaternion())
            .normalize()
            .expect("adjacent centers are not antipodal")
    }

    /// Midpoint of the 1-skeleton edge between vertices `u` and `w`.
    pub fn edge_center(&self, u: usize, w: usize) -> UnitQuaternion {
        let [lo, hi] = sorted2(u, w);
        (self.vertices[lo].position.quaternion() + self.vertices[hi].position.quaternion())
            .normalize()
            .expect("edge endpoints are not antipodal")
    }

    /// All edges of the given cells, as vertex-id pairs, deduplicated.
    pub fn skeleton_edges(&self, cells: &[usize]) -> Vec<[usize; 2]> {
        let mut keep = vec![false; self.cell_count()];
        for &c in cells {
            keep[c] = true;
        }
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.iter().any(|&c| keep[c]))
            .map(|(i, _)| self.edge_endpoints[i])
            .collect()
    }

    /// Stereographic images of the listed skeleton edges, each subdivided
    /// along its geodesic into `segments` pieces.
    pub fn projected_skeleton(&self, cells: &[usize], segments: usize) -> Vec<Vec<Vector3<f64>>> {
        let segments = segments.max(1);
        self.skeleton_edges(cells)
            .iter()
            .filter_map(|&[u, w]| {
                let a = self.vertices[u].position.quaternion();
                let b = self.vertices[w].position.quaternion();
                (0..=segments)
                    .map(|k| {
                        let t = k as f64 / segments as f64;
                        let p = (a.scale(1.0 - t) + b.scale(t)).normalize()?;
                        stereographic(p).ok()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Generalized cross product in `R⁴`: `det[a, b, c, x] = ⟨cross4(a, b, c), x⟩`.
pub fn cross4(a: Quaternion, b: Quaternion, c: Quaternion) -> Quaternion {
    let m = |skip: usize| {
        let rows: Vec<[f64; 3]> = [a, b, c]
            .iter()
            .map(|v| {
                let x = v.to_array();
                let mut r = [0.0; 3];
                let mut k = 0;
                for (i, xi) in x.iter().enumerate() {
                    if i != skip {
                        r[k] = *xi;
                        k += 1;
                    }
                }
                r
            })
            .collect();
        Matrix3::from_row_slice(&rows.concat()).determinant()
    };
    // cofactor expansion along the last row
    Quaternion::new(-m(0), m(1), -m(2), m(3))
}

pub fn det4(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> f64 {
    let cols = [a, b, c, d].map(|q| Vector4::from(q.to_array()));
    Matrix4::from_columns(&cols).determinant()
}

/// Component of `x` orthogonal to the unit vector `base`.
fn tangent(base: Quaternion, x: Quaternion) -> Quaternion {
    x - base.scale(base.dot(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceRecord {
    pub neighbor: usize,
    pub center: UnitQuaternion,
    /// Vertex ids in cyclic order.
    pub vertex_ids: [usize; 5],
    pub vertices: [UnitQuaternion; 5],
}

/// One dodecahedral cell with its faces and vertices placed on S³.
#[derive(Clone, Debug, Serialize)]
pub struct CellGeometry {
    pub cell: usize,
    pub center: UnitQuaternion,
    pub faces: Vec<FaceRecord>,
    pub vertex_ids: Vec<usize>,
    pub vertices: Vec<UnitQuaternion>,
}

pub fn cell_geometry(complex: &Complex120, cell: usize) -> CellGeometry {
    let center = complex.center(cell);
    let c = center.quaternion();
    let vertex_ids = complex.cell_vertex_ids(cell).to_vec();
    let faces = complex
        .neighbors(cell)
        .iter()
        .map(|&nbr| {
            let fc = complex.face_center(cell, nbr);
            let f = fc.quaternion();
            let mut ids: Vec<usize> = vertex_ids
                .iter()
                .copied()
                .filter(|&v| complex.vertex(v).cells.contains(&nbr))
                .collect();
            assert_eq!(ids.len(), 5, "pentagonal face");
            // Sort by angle in the tangent plane of the face, with the
            // orientation fixed by the outward direction toward the neighbor.
            let outward = tangent(f, complex.center(nbr).quaternion() - c);
            let w0 = tangent(f, complex.vertex(ids[0]).position.quaternion());
            let e1 = w0.scale(1.0 / w0.norm());
            let e2 = cross4(f, outward, e1);
            let e2 = e2.scale(1.0 / e2.norm());
            let angle = |v: usize| {
                let w = tangent(f, complex.vertex(v).position.quaternion());
                w.dot(e2).atan2(w.dot(e1)).rem_euclid(2.0 * PI)
            };
            ids.sort_by(|&x, &y| angle(x).total_cmp(&angle(y)));
            let vertex_ids: [usize; 5] = ids.try_into().expect("five vertices");
            FaceRecord {
                neighbor: nbr,
                center: fc,
                vertex_ids,
                vertices: vertex_ids.map(|v| complex.vertex(v).position),
            }
        })
        .collect();
    CellGeometry {
        cell,
        center,
        faces,
        vertices: vertex_ids.iter().map(|&v| complex.vertex(v).position).collect(),
        vertex_ids,
    }
}

impl CellGeometry {
    /// Interior dihedral angle at every edge of the cell, measured between
    /// the in-face directions perpendicular to the edge at its midpoint.
    pub fn dihedral_angles(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, fa) in self.faces.iter().enumerate() {
            for fb in &self.faces[i + 1..] {
                let shared: Vec<usize> = (0..5)
                    .filter(|&k| fb.vertex_ids.contains(&fa.vertex_ids[k]))
                    .collect();
                if shared.len() != 2 {
                    continue;
                }
                let v1 = fa.vertices[shared[0]].quaternion();
                let v2 = fa.vertices[shared[1]].quaternion();
                let m = (v1 + v2).scale(1.0 / (v1 + v2).norm());
                let along = tangent(m, v2 - v1);
                let along = along.scale(1.0 / along.norm());
                let inward = |face_center: Quaternion| {
                    let t = tangent(m, face_center);
                    let t = t - along.scale(along.dot(t));
                    t.scale(1.0 / t.norm())
                };
                let da = inward(fa.center.quaternion());
                let db = inward(fb.center.quaternion());
                out.push(da.dot(db).clamp(-1.0, 1.0).acos());
            }
        }
        out
    }

    /// Spherical distances from the center to each of the 20 vertices.
    pub fn circumradii(&self) -> Vec<f64> {
        self.vertices.iter().map(|&v| dist_s3(self.center, v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Handedness {
    Right,
    Left,
}

/// Cell center, face center, edge center and vertex of one flag.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FlagPolytope {
    pub cell: usize,
    /// Neighbor across the flag's face.
    pub neighbor: usize,
    /// Vertex ids of the flag's edge, sorted.
    pub edge: [usize; 2],
    pub vertex: usize,
    pub cell_center: UnitQuaternion,
    pub face_center: UnitQuaternion,
    pub edge_center: UnitQuaternion,
    pub vertex_position: UnitQuaternion,
    pub handedness: Handedness,
}

impl FlagPolytope {
    pub fn orientation_det(&self) -> f64 {
        det4(
            self.cell_center.quaternion(),
            self.face_center.quaternion(),
            self.edge_center.quaternion(),
            self.vertex_position.quaternion(),
        )
    }
}

/// The 120 flags of one cell: 12 faces × 5 edges × 2 endpoints.
pub fn flag_polytopes(complex: &Complex120, geom: &CellGeometry) -> Vec<FlagPolytope> {
    let mut out = Vec::with_capacity(120);
    for face in &geom.faces {
        for k in 0..5 {
            let (u, w) = (face.vertex_ids[k], face.vertex_ids[(k + 1) % 5]);
            let edge = sorted2(u, w);
            let edge_center = complex.edge_center(u, w);
            for vertex in edge {
                let mut flag = FlagPolytope {
                    cell: geom.cell,
                    neighbor: face.neighbor,
                    edge,
                    vertex,
                    cell_center: geom.center,
                    face_center: face.center,
                    edge_center,
                    vertex_position: complex.vertex(vertex).position,
                    handedness: Handedness::Right,
                };
                if flag.orientation_det() < 0.0 {
                    flag.handedness = Handedness::Left;
                }
                out.push(flag);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryKind {
    Rotation,
    Reflection,
}

/// A symmetry of the 120-cell fixing the south-pole cell: a twisted action
/// `h ↦ g h g⁻¹`, optionally followed by quaternion conjugation.
#[derive(Clone, Debug, Serialize)]
pub struct PoleSymmetry {
    pub kind: SymmetryKind,
    /// Id of the group element `g` inducing the map.
    pub element: usize,
    pub cell_permutation: Vec<usize>,
    /// Action on the projected picture in `I ≅ R³`.
    pub point_map: Matrix3<f64>,
}

impl PoleSymmetry {
    pub fn apply(&self, cell: usize) -> usize {
        self.cell_permutation[cell]
    }

    /// Applies the map to a point of S³.
    pub fn apply_point(&self, x: UnitQuaternion) -> UnitQuaternion {
        let im = self.point_map * x.quaternion().imag();
        UnitQuaternion::new(Quaternion::new(x.real(), im.x, im.y, im.z))
            .expect("isometries preserve the norm")
    }
}

/// The 60 rotations `ψ_g`, followed by their 60 compositions with quaternion
/// conjugation when `include_reflections` is set. Index 0 is the identity.
pub fn pole_symmetries(complex: &Complex120, include_reflections: bool) -> Vec<PoleSymmetry> {
    let g = complex.group();
    let reps: Vec<usize> = (0..g.len()).filter(|&a| a < g.neg(a)).collect();
    let mut out: Vec<PoleSymmetry> = reps
        .iter()
        .map(|&a| PoleSymmetry {
            kind: SymmetryKind::Rotation,
            element: a,
            cell_permutation: (0..g.len()).map(|h| g.conjugate_by(a, h)).collect(),
            point_map: g.element(a).rotation_matrix(),
        })
        .collect();
    if include_reflections {
        let reflections: Vec<PoleSymmetry> = out
            .iter()
            .map(|rot| PoleSymmetry {
                kind: SymmetryKind::Reflection,
                element: rot.element,
                cell_permutation: rot.cell_permutation.iter().map(|&h| g.conj(h)).collect(),
                point_map: -rot.point_map,
            })
            .collect();
        out.extend(reflections);
    }
    out
}
