//! Printable rib meshes built as open polyhedral frames.
//!
//! Each cell is hollowed into a frame of struts along its pentagon edges.
//! The design lives in one flag triangle (face center `F`, edge center `E`,
//! vertex `V`) and is copied to all 120 flags of the cell. Faces shared by
//! two cells of the rib are left open; all other faces carry a thin
//! membrane so the cavity stays sealed. Geometry is built on S³ and
//! projected stereographically at the very end.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::Serialize;
use thiserror::Error;

use crate::cell120::{cell_geometry, det4, flag_polytopes, Complex120, FlagPolytope};
use crate::quat::{dist_s3, stereographic, QuatError, Quaternion, UnitQuaternion};
use crate::strata::{Layer, Rib};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("degenerate design: {0}")]
    DegenerateDesign(String),
    #[error("mesh is not a closed oriented manifold: {0}")]
    NonManifoldOutput(String),
    #[error(transparent)]
    Projection(#[from] QuatError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("bad OBJ input at line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("unknown design parameter {0:?}")]
    UnknownParameter(String),
    #[error("bad value {value:?} for {key}")]
    BadValue { key: String, value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignParams {
    /// Strut width as a fraction of the face inradius.
    pub frame_width: f64,
    /// Membrane thickness as a fraction of the strut thickness.
    pub membrane_thickness: f64,
    /// Strut depth toward the cell center, in radians of S³.
    pub base_thickness: f64,
    pub thickness_grade: BTreeMap<Layer, f64>,
    /// Subdivisions per flag edge.
    pub tessellation_level: usize,
    /// Millimetres per unit of projected length.
    pub scale_mm: f64,
}

impl Default for DesignParams {
    fn default() -> Self {
        use Layer::*;
        let grades = [
            (SouthPole, 1.25),
            (Antarctic, 1.15),
            (SouthTemperate, 1.05),
            (Capricorn, 1.0),
            (Equatorial, 0.9),
            (Cancer, 1.0),
            (NorthTemperate, 1.05),
            (Arctic, 1.15),
            (NorthPole, 1.25),
        ];
        DesignParams {
            frame_width: 0.25,
            membrane_thickness: 0.3,
            base_thickness: 0.03,
            thickness_grade: grades.into_iter().collect(),
            tessellation_level: 3,
            scale_mm: 30.0,
        }
    }
}

impl DesignParams {
    pub fn grade(&self, layer: Layer) -> f64 {
        self.thickness_grade.get(&layer).copied().unwrap_or(1.0)
    }

    pub fn thickness(&self, layer: Layer) -> f64 {
        self.base_thickness * self.grade(layer)
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        let bad = |m: String| Err(MeshError::DegenerateDesign(m));
        if !(self.frame_width > 0.0 && self.frame_width < 0.5) {
            return bad(format!("frame_width {} outside (0, 0.5)", self.frame_width));
        }
        if !(self.membrane_thickness > 0.0 && self.membrane_thickness < 1.0) {
            return bad(format!("membrane_thickness {} outside (0, 1)", self.membrane_thickness));
        }
        if self.tessellation_level == 0 {
            return bad("tessellation_level must be at least 1".into());
        }
        if !(self.scale_mm > 0.0 && self.scale_mm.is_finite()) {
            return bad(format!("scale_mm {} must be positive", self.scale_mm));
        }
        // struts from opposite faces would meet inside the cell
        let limit = std::f64::consts::PI / 20.0;
        for (layer, g) in &self.thickness_grade {
            let t = self.base_thickness * g;
            if !(t > 0.0 && t < limit) {
                return bad(format!("thickness {t} on {layer} outside (0, {limit})"));
            }
        }
        if !(self.base_thickness > 0.0 && self.base_thickness < limit) {
            return bad(format!("base_thickness {} outside (0, {limit})", self.base_thickness));
        }
        Ok(())
    }

    /// Sets one parameter from its textual form. Grades use keys like
    /// `grade.antarctic`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), MeshError> {
        let bad = || MeshError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        let num = || value.trim().parse::<f64>().map_err(|_| bad());
        match key {
            "frame_width" => self.frame_width = num()?,
            "membrane_thickness" => self.membrane_thickness = num()?,
            "base_thickness" => self.base_thickness = num()?,
            "scale_mm" => self.scale_mm = num()?,
            "tessellation_level" | "tess" => {
                self.tessellation_level = value.trim().parse().map_err(|_| bad())?
            }
            _ => {
                let layer = key
                    .strip_prefix("grade.")
                    .and_then(Layer::from_slug)
                    .ok_or_else(|| MeshError::UnknownParameter(key.to_string()))?;
                self.thickness_grade.insert(layer, num()?);
            }
        }
        Ok(())
    }

    pub fn is_key(key: &str) -> bool {
        matches!(
            key,
            "frame_width" | "membrane_thickness" | "base_thickness" | "scale_mm" | "tessellation_level" | "tess"
        ) || key
            .strip_prefix("grade.")
            .and_then(Layer::from_slug)
            .is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FaceKind {
    /// Shared with another cell of the rib: open window.
    Internal,
    /// On the rib's surface: window closed by a membrane.
    External,
}

/// Oriented triangles on S³ for one flag.
#[derive(Clone, Debug, Default)]
pub struct Patch {
    pub triangles: Vec<[UnitQuaternion; 3]>,
    /// Triangles of the face skin and the membrane underside.
    pub membrane_sheet: usize,
}

/// Moves `x` along the geodesic toward `c` by `d`.
pub fn offset(x: UnitQuaternion, c: UnitQuaternion, d: f64) -> UnitQuaternion {
    if d == 0.0 {
        return x;
    }
    let xq = x.quaternion();
    let u = c.quaternion() - xq.scale(xq.dot(c.quaternion()));
    let u = u.scale(1.0 / u.norm());
    (xq.scale(d.cos()) + u.scale(d.sin()))
        .normalize()
        .expect("offset stays on the sphere")
}

/// Point of the flag triangle with weight `s` on the face center and
/// parameter `r` from the edge center to the vertex.
fn flag_point(f: &FlagPolytope, s: f64, r: f64) -> UnitQuaternion {
    let sum = f.face_center.quaternion().scale(s)
        + f.edge_center.quaternion().scale((1.0 - s) * (1.0 - r))
        + f.vertex_position.quaternion().scale((1.0 - s) * r);
    sum.normalize().expect("flag points are not antipodal")
}

fn centroid(t: &[UnitQuaternion; 3]) -> Quaternion {
    t[0].quaternion() + t[1].quaternion() + t[2].quaternion()
}

struct PatchBuilder {
    tris: Vec<[UnitQuaternion; 3]>,
}

impl PatchBuilder {
    /// Adds a triangle wound so that `solid` lies on its negative side.
    fn push(&mut self, t: [UnitQuaternion; 3], solid: UnitQuaternion) {
        let d = det4(t[0].quaternion(), t[1].quaternion(), t[2].quaternion(), solid.quaternion());
        if d > 0.0 {
            self.tris.push([t[0], t[2], t[1]]);
        } else {
            self.tris.push(t);
        }
    }

    /// Quad grid `pts[i][j]`, split into triangles.
    fn grid(&mut self, pts: &[Vec<UnitQuaternion>], solid: impl Fn(Quaternion) -> UnitQuaternion) {
        for i in 0..pts.len() - 1 {
            for j in 0..pts[i].len() - 1 {
                let (a, b, c, d) = (pts[i][j], pts[i][j + 1], pts[i + 1][j], pts[i + 1][j + 1]);
                for t in [[a, b, d], [a, d, c]] {
                    let s = solid(centroid(&t));
                    self.push(t, s);
                }
            }
        }
    }

    /// Triangular grid whose row `k` has `n - k + 1` points.
    fn fan(&mut self, rows: &[Vec<UnitQuaternion>], solid: impl Fn(Quaternion) -> UnitQuaternion) {
        for k in 0..rows.len() - 1 {
            let (a, b) = (&rows[k], &rows[k + 1]);
            for j in 0..a.len() - 1 {
                let t = [a[j], a[j + 1], b[j.min(b.len() - 1)]];
                let s = solid(centroid(&t));
                self.push(t, s);
                if j + 1 < b.len() {
                    let t = [a[j + 1], b[j + 1], b[j]];
                    let s = solid(centroid(&t));
                    self.push(t, s);
                }
            }
        }
    }
}

/// Flag design in S³ coordinates: a strut along the pentagon edge, plus a
/// membrane across the window for external faces.
pub fn flag_design(flag: &FlagPolytope, kind: FaceKind, params: &DesignParams) -> Result<Patch, MeshError> {
    params.validate()?;
    let layer = Layer::of(flag.cell_center)
        .ok_or_else(|| MeshError::DegenerateDesign("flag cell lies on no layer".into()))?;
    let n = params.tessellation_level;
    let w = params.frame_width;
    let t = params.thickness(layer);
    let tm = t * params.membrane_thickness;
    let c = flag.cell_center;

    let ratio = |k: usize, m: usize| if k == m { 1.0 } else { k as f64 / m as f64 };
    let band_s = |i: usize| if i == n { w } else { w * ratio(i, n) };
    let window_s = |k: usize| if k == 0 { w } else { w + (1.0 - w) * ratio(k, n) };
    let depth = |lo: f64, hi: f64, i: usize| if i == 0 { lo } else if i == n { hi } else { lo + (hi - lo) * ratio(i, n) };

    // face-level points
    let band: Vec<Vec<UnitQuaternion>> = (0..=n)
        .map(|i| (0..=n).map(|j| flag_point(flag, band_s(i), ratio(j, n))).collect())
        .collect();
    let window: Vec<Vec<UnitQuaternion>> = (0..=n)
        .map(|k| {
            let m = n - k;
            (0..=m)
                .map(|j| flag_point(flag, window_s(k), if m == 0 { 0.0 } else { ratio(j, m) }))
                .collect()
        })
        .collect();
    let at_depth = |rows: &[Vec<UnitQuaternion>], d: f64| -> Vec<Vec<UnitQuaternion>> {
        rows.iter()
            .map(|row| row.iter().map(|&x| offset(x, c, d)).collect())
            .collect()
    };
    // a point inside the solid next to a surface point: push it to the
    // given depth, measured from the face through the nearest face point
    let solid_at = |q: Quaternion, d: f64| {
        let x = q.normalize().expect("centroid is nonzero");
        let face_pt = project_to_face(flag, x);
        offset(face_pt, c, d)
    };

    let mut b = PatchBuilder { tris: Vec::new() };
    let mut sheet = 0;

    if kind == FaceKind::External {
        b.grid(&band, |q| solid_at(q, 0.5 * t));
        b.fan(&window, |q| solid_at(q, 0.5 * tm));
        b.fan(&at_depth(&window, tm), |q| solid_at(q, 0.5 * tm));
        sheet = b.tris.len();
    }

    // window wall at s = w, solid toward the edge
    let top = if kind == FaceKind::External { tm } else { 0.0 };
    let wall: Vec<Vec<UnitQuaternion>> = (0..=n)
        .map(|i| {
            let d = depth(top, t, i);
            (0..=n).map(|j| offset(band[n][j], c, d)).collect()
        })
        .collect();
    b.grid(&wall, |q| {
        let x = q.normalize().expect("centroid is nonzero");
        let face_pt = project_to_face(flag, x);
        let d = dist_s3(face_pt, x);
        // step back toward the pentagon edge, into the strut
        let (s, r) = face_coords(flag, face_pt);
        offset(flag_point(flag, 0.5 * s, r), c, d)
    });

    b.grid(&at_depth(&band, t), |q| solid_at(q, 0.5 * t));

    Ok(Patch {
        triangles: b.tris,
        membrane_sheet: sheet,
    })
}

/// Nearest point of the face's great sphere to `x`, along the geodesic
/// through the cell center.
fn project_to_face(flag: &FlagPolytope, x: UnitQuaternion) -> UnitQuaternion {
    // face sphere: the bisector of the cell center and the neighbor center,
    // i.e. the points whose component along (c - f·(c·f)) vanishes
    let c = flag.cell_center.quaternion();
    let f = flag.face_center.quaternion();
    let nrm = c - f.scale(c.dot(f));
    let nrm = nrm.scale(1.0 / nrm.norm());
    let xq = x.quaternion();
    (xq - nrm.scale(xq.dot(nrm)))
        .normalize()
        .expect("points near the face project onto it")
}

/// Approximate `(s, r)` of a face point in the flag's barycentric chart.
fn face_coords(flag: &FlagPolytope, x: UnitQuaternion) -> (f64, f64) {
    // solve x ≈ a F + b E + c V in the least-squares sense on the face
    let cols = [flag.face_center, flag.edge_center, flag.vertex_position].map(|p| p.quaternion().to_array());
    let m = nalgebra::Matrix4x3::from_fn(|i, j| cols[j][i]);
    let rhs = nalgebra::Vector4::from(x.quaternion().to_array());
    let sol = (m.transpose() * m)
        .try_inverse()
        .map(|inv| inv * m.transpose() * rhs)
        .unwrap_or_else(nalgebra::Vector3::zeros);
    let total = sol.sum();
    let (a, bb, cc) = (sol[0] / total, sol[1] / total, sol[2] / total);
    let r = if bb + cc > 0.0 { cc / (bb + cc) } else { 0.0 };
    (a.clamp(0.0, 1.0), r.clamp(0.0, 1.0))
}

/// Projected triangle mesh in millimetres, outward-wound.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Mesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| self.vertices[a].dot(&self.vertices[b].cross(&self.vertices[c])) / 6.0)
            .sum()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (p, q, r) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * (q - p).cross(&(r - p)).norm()
    }

    pub fn bounding_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Merges points of S³ closer than `tol` and returns the index of each input.
struct Welder {
    tol: f64,
    cell: f64,
    buckets: HashMap<[i64; 4], Vec<usize>>,
    points: Vec<UnitQuaternion>,
}

impl Welder {
    fn new(tol: f64) -> Self {
        Welder {
            tol,
            cell: tol * 100.0,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: UnitQuaternion) -> [i64; 4] {
        p.to_array().map(|x| (x / self.cell).floor() as i64)
    }

    fn index(&mut self, p: UnitQuaternion) -> usize {
        let k = self.key(p);
        // a match can only sit in a neighboring bucket along axes where
        // `p` is within `tol` of the bucket boundary
        let coords = p.to_array();
        let mut steps = [[0i64; 2]; 4];
        let mut lens = [1usize; 4];
        for axis in 0..4 {
            let frac = coords[axis] / self.cell - k[axis] as f64;
            if frac * self.cell <= self.tol {
                steps[axis][lens[axis]] = -1;
                lens[axis] += 1;
            } else if (1.0 - frac) * self.cell <= self.tol {
                steps[axis][lens[axis]] = 1;
                lens[axis] += 1;
            }
        }
        for code in 0..lens.iter().product::<usize>() {
            let mut kk = k;
            let mut rest = code;
            for axis in 0..4 {
                kk[axis] += steps[axis][rest % lens[axis]];
                rest /= lens[axis];
            }
            if let Some(ids) = self.buckets.get(&kk) {
                for &id in ids {
                    if (self.points[id].quaternion() - p.quaternion()).norm() <= self.tol {
                        return id;
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry(k).or_default().push(id);
        id
    }
}

/// Faces of the rib's cells, with their kind.
pub fn face_kinds(complex: &Complex120, rib: &Rib) -> Vec<(usize, usize, FaceKind)> {
    let mut out = Vec::new();
    for &cell in &rib.cells {
        for &nbr in complex.neighbors(cell) {
            let kind = if rib.cells.contains(&nbr) {
                FaceKind::Internal
            } else {
                FaceKind::External
            };
            out.push((cell, nbr, kind));
        }
    }
    out
}

/// Welds patches and projects them; no manifold check.
pub fn assemble(patches: &[Patch], scale_mm: f64) -> Result<Mesh, MeshError> {
    let mut welder = Welder::new(1e-9);
    let mut tris = Vec::new();
    for p in patches {
        for t in &p.triangles {
            let ids = t.map(|q| welder.index(q));
            if ids[0] != ids[1] && ids[1] != ids[2] && ids[0] != ids[2] {
                tris.push(ids);
            }
        }
    }
    let vertices = welder
        .points
        .iter()
        .map(|&q| stereographic(q).map(|v| v * scale_mm))
        .collect::<Result<Vec<_>, _>>()?;
    let mut mesh = Mesh {
        vertices,
        triangles: tris,
    };
    if mesh.signed_volume() < 0.0 {
        for t in &mut mesh.triangles {
            t.swap(1, 2);
        }
    }
    Ok(mesh)
}

/// Patches of one cell; faces toward other rib cells are left open.
pub fn cell_patches(complex: &Complex120, rib_cells: &[usize], cell: usize, params: &DesignParams) -> Result<Vec<Patch>, MeshError> {
    let geom = cell_geometry(complex, cell);
    flag_polytopes(complex, &geom)
        .iter()
        .map(|flag| {
            let kind = if rib_cells.contains(&flag.neighbor) {
                FaceKind::Internal
            } else {
                FaceKind::External
            };
            flag_design(flag, kind, params)
        })
        .collect()
}

/// The rib's patches: ten flags per face, internal faces left open.
pub fn rib_patches(complex: &Complex120, rib: &Rib, params: &DesignParams) -> Result<Vec<Patch>, MeshError> {
    params.validate()?;
    let mut patches = Vec::new();
    for &cell in &rib.cells {
        patches.extend(cell_patches(complex, &rib.cells, cell, params)?);
    }
    Ok(patches)
}

pub fn rib_mesh(complex: &Complex120, rib: &Rib, params: &DesignParams) -> Result<Mesh, MeshError> {
    let mesh = assemble(&rib_patches(complex, rib, params)?, params.scale_mm)?;
    let report = check_mesh(&mesh);
    if !report.is_printable() {
        return Err(MeshError::NonManifoldOutput(report.summary()));
    }
    Ok(mesh)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshReport {
    pub vertices: usize,
    pub triangles: usize,
    /// Every undirected edge borders exactly two triangles.
    pub manifold: bool,
    /// Every edge is traversed once in each direction.
    pub oriented: bool,
    pub min_area: f64,
    pub degenerate: usize,
    /// Edge-connected components.
    pub shells: usize,
    /// Shells enclosing positive volume.
    pub bodies: usize,
    pub volume: f64,
}

impl MeshReport {
    pub fn is_printable(&self) -> bool {
        self.manifold && self.oriented && self.degenerate == 0 && self.bodies == 1 && self.volume > 0.0
    }

    pub fn summary(&self) -> String {
        format!(
            "manifold={} oriented={} degenerate={} shells={} bodies={} volume={:.6}",
            self.manifold, self.oriented, self.degenerate, self.shells, self.bodies, self.volume
        )
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn check_mesh(mesh: &Mesh) -> MeshReport {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut undirected: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *directed.entry((u, v)).or_insert(0) += 1;
            undirected.entry((u.min(v), u.max(v))).or_default().push(ti);
        }
    }
    let manifold = undirected.values().all(|ts| ts.len() == 2);
    let oriented = directed.iter().all(|(&(u, v), &k)| k == 1 && directed.get(&(v, u)) == Some(&1));

    let mut parent: Vec<usize> = (0..mesh.triangles.len()).collect();
    for ts in undirected.values() {
        for w in ts.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut shell_volume: BTreeMap<usize, f64> = BTreeMap::new();
    for (ti, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let root = find(&mut parent, ti);
        let v = mesh.vertices[a].dot(&mesh.vertices[b].cross(&mesh.vertices[c])) / 6.0;
        *shell_volume.entry(root).or_insert(0.0) += v;
    }
    let areas: Vec<f64> = (0..mesh.triangles.len()).map(|t| mesh.triangle_area(t)).collect();
    MeshReport {
        vertices: mesh.vertices.len(),
        triangles: mesh.triangles.len(),
        manifold,
        oriented,
        min_area: areas.iter().copied().fold(f64::INFINITY, f64::min),
        degenerate: areas.iter().filter(|&&a| a <= 1e-9).count(),
        shells: shell_volume.len(),
        bodies: shell_volume.values().filter(|&&v| v > 0.0).count(),
        volume: mesh.signed_volume(),
    }
}

/// Distance from the projected cell center to its farthest projected vertex.
pub fn projected_circumradius(complex: &Complex120, cell: usize, scale_mm: f64) -> Result<f64, MeshError> {
    let center = stereographic(complex.center(cell))?;
    let geom = cell_geometry(complex, cell);
    let mut r: f64 = 0.0;
    for &v in &geom.vertices {
        r = r.max((stereographic(v)? - center).norm());
    }
    Ok(r * scale_mm)
}

/// Largest gap, in millimetres, between a chord of the rib's outer edge
/// polylines and the projected geodesic it approximates.
pub fn max_chord_deviation(complex: &Complex120, rib: &Rib, params: &DesignParams) -> Result<f64, MeshError> {
    let n = params.tessellation_level.max(1);
    let mut worst: f64 = 0.0;
    for &cell in &rib.cells {
        let geom = cell_geometry(complex, cell);
        for flag in flag_polytopes(complex, &geom) {
            for j in 0..n {
                let (r0, r1) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
                let a = stereographic(flag_point(&flag, 0.0, r0))?;
                let b = stereographic(flag_point(&flag, 0.0, r1))?;
                let mid = stereographic(flag_point(&flag, 0.0, 0.5 * (r0 + r1)))?;
                worst = worst.max((mid - 0.5 * (a + b)).norm());
            }
        }
    }
    Ok(worst * params.scale_mm)
}

pub fn write_stl(mesh: &Mesh, out: &mut impl io::Write) -> io::Result<()> {
    let mut header = [0u8; 80];
    let tag = b"quintessence rib";
    header[..tag.len()].copy_from_slice(tag);
    out.write_all(&header)?;
    out.write_all(&(mesh.triangles.len() as u32).to_le_bytes())?;
    for &[a, b, c] in &mesh.triangles {
        let (p, q, r) = (mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
        let n = (q - p).cross(&(r - p));
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        for v in [n, p, q, r] {
            for x in v.iter() {
                out.write_all(&(*x as f32).to_le_bytes())?;
            }
        }
        out.write_all(&[0, 0])?;
    }
    Ok(())
}

fn write_vertex(out: &mut impl io::Write, v: &Vector3<f64>) -> io::Result<()> {
    // round first so tiny negatives print as 0, not -0
    let r = |x: f64| (x * 1e9).round() / 1e9 + 0.0;
    writeln!(out, "v {:.9} {:.9} {:.9}", r(v.x), r(v.y), r(v.z))
}

pub fn write_obj(mesh: &Mesh, out: &mut impl io::Write) -> io::Result<()> {
    for v in &mesh.vertices {
        write_vertex(out, v)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

fn export(path: &Path, f: impl FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>) -> Result<(), MeshError> {
    let io_err = |source| MeshError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = io::BufWriter::new(file);
    f(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn export_stl(mesh: &Mesh, path: &Path) -> Result<(), MeshError> {
    export(path, |w| write_stl(mesh, w))
}

pub fn export_obj(mesh: &Mesh, path: &Path) -> Result<(), MeshError> {
    export(path, |w| write_obj(mesh, w))
}

/// Reads the `v` and triangular `f` records of an OBJ file.
pub fn parse_obj(text: &str) -> Result<Mesh, MeshError> {
    let mut mesh = Mesh::default();
    for (i, line) in text.lines().enumerate() {
        let bad = |detail: &str| MeshError::Parse {
            line: i + 1,
            detail: detail.to_string(),
        };
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let xs: Vec<f64> = parts
                    .map(|p| p.parse::<f64>().map_err(|_| bad("bad coordinate")))
                    .collect::<Result<_, _>>()?;
                if xs.len() < 3 {
                    return Err(bad("vertex needs three coordinates"));
                }
                mesh.vertices.push(Vector3::new(xs[0], xs[1], xs[2]));
            }
            Some("f") => {
                let ids: Vec<usize> = parts
                    .map(|p| {
                        p.split('/')
                            .next()
                            .and_then(|x| x.parse::<usize>().ok())
                            .filter(|&x| x >= 1)
                            .map(|x| x - 1)
                            .ok_or_else(|| bad("bad face index"))
                    })
                    .collect::<Result<_, _>>()?;
                if ids.len() != 3 {
                    return Err(bad("only triangles are supported"));
                }
                mesh.triangles.push([ids[0], ids[1], ids[2]]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// OBJ polylines (`l` records) of the projected 1-skeleton of some cells.
pub fn write_skeleton_obj(
    complex: &Complex120,
    cells: &[usize],
    segments: usize,
    scale_mm: f64,
    out: &mut impl io::Write,
) -> io::Result<()> {
    let mut next = 1;
    for line in complex.projected_skeleton(cells, segments) {
        for p in &line {
            write_vertex(out, &(p * scale_mm))?;
        }
        let ids: Vec<String> = (next..next + line.len()).map(|i| i.to_string()).collect();
        writeln!(out, "l {}", ids.join(" "))?;
        next += line.len();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::{rib_cells, rings, RibType};
    use std::sync::OnceLock;

    fn complex() -> &'static Complex120 {
        static C: OnceLock<Complex120> = OnceLock::new();
        C.get_or_init(|| Complex120::new().unwrap())
    }

    fn rib(t: RibType) -> Rib {
        let c = complex();
        rib_cells(c, &rings(c).unwrap(), t)
    }

    fn light() -> DesignParams {
        DesignParams {
            tessellation_level: 1,
            ..DesignParams::default()
        }
    }

    #[test]
    fn params_validation() {
        assert!(DesignParams::default().validate().is_ok());
        for w in [0.0, 0.5, 0.7, -0.1] {
            let p = DesignParams {
                frame_width: w,
                ..DesignParams::default()
            };
            assert!(matches!(p.validate(), Err(MeshError::DegenerateDesign(_))));
        }
        let p = DesignParams {
            base_thickness: 0.2,
            ..DesignParams::default()
        };
        assert!(p.validate().is_err());
        let mut p = DesignParams::default();
        p.set("grade.antarctic", "1.3").unwrap();
        assert_eq!(p.grade(Layer::Antarctic), 1.3);
        assert!(p.set("grade.moon", "1").is_err());
        assert!(p.set("frame_width", "wide").is_err());
        assert!(p.set("colour", "red").is_err());
    }

    #[test]
    fn offset_moves_by_distance() {
        let c = complex();
        let a = c.center(0);
        let v = c.vertex(c.cell_vertex_ids(0)[0]).position;
        let moved = offset(v, a, 0.05);
        assert!((dist_s3(moved, v) - 0.05).abs() < 1e-12);
        assert!((dist_s3(moved, a) - (dist_s3(v, a) - 0.05)).abs() < 1e-12);
        assert_eq!(offset(v, a, 0.0), v);
    }

    #[test]
    fn patch_counts() {
        let c = complex();
        let flags = flag_polytopes(c, &cell_geometry(c, 0));
        for n in 1..=4 {
            let p = DesignParams {
                tessellation_level: n,
                ..DesignParams::default()
            };
            let ext = flag_design(&flags[0], FaceKind::External, &p).unwrap();
            let int = flag_design(&flags[0], FaceKind::Internal, &p).unwrap();
            assert_eq!(ext.triangles.len(), 8 * n * n);
            assert_eq!(int.triangles.len(), 4 * n * n);
            assert_eq!(int.triangles.len(), ext.triangles.len() - ext.membrane_sheet);
        }
    }

    #[test]
    fn wall_points_shared_bitwise() {
        let c = complex();
        let flags = flag_polytopes(c, &cell_geometry(c, 0));
        // flags sharing the face-edge wall
        let (a, b) = flags
            .iter()
            .enumerate()
            .flat_map(|(i, f)| flags[i + 1..].iter().map(move |g| (f, g)))
            .find(|(f, g)| f.neighbor == g.neighbor && f.edge == g.edge)
            .unwrap();
        for k in 0..=4 {
            let s = k as f64 / 4.0;
            assert_eq!(flag_point(a, s, 0.0), flag_point(b, s, 0.0));
        }
    }

    #[test]
    fn one_face_frame_is_a_pentagon_ring() {
        // twenty external patches on the two sides of one face glue into a
        // closed slab with a window membrane
        let c = complex();
        let g = cell_geometry(c, 0);
        let flags = flag_polytopes(c, &g);
        let nbr = g.faces[0].neighbor;
        let patches: Vec<Patch> = flags
            .iter()
            .filter(|f| f.neighbor == nbr)
            .map(|f| flag_design(f, FaceKind::External, &light()).unwrap())
            .collect();
        assert_eq!(patches.len(), 10);
        let mesh = assemble(&patches, 30.0).unwrap();
        // open along the pentagon rim and edge ribbons only
        let rep = check_mesh(&mesh);
        assert!(!rep.manifold);
        assert_eq!(rep.degenerate, 0);
    }

    #[test]
    fn single_cell_is_closed() {
        let c = complex();
        let r = Rib {
            rib_type: RibType::Spine,
            cells: vec![0],
            ring: crate::strata::RingName::Spine,
        };
        let mesh = rib_mesh(c, &r, &light()).unwrap();
        let rep = check_mesh(&mesh);
        assert!(rep.is_printable(), "{}", rep.summary());
        assert_eq!(rep.shells, 2);
    }

    #[test]
    fn inner6_internal_faces() {
        let c = complex();
        let r = rib(RibType::Inner6);
        let internal = face_kinds(c, &r)
            .iter()
            .filter(|k| k.2 == FaceKind::Internal)
            .count();
        assert_eq!(internal, 10);
        let mesh = rib_mesh(c, &r, &light()).unwrap();
        let rep = check_mesh(&mesh);
        assert!(rep.is_printable(), "{}", rep.summary());
    }

    #[test]
    fn stl_and_obj_io() {
        let dir = tempfile::tempdir().unwrap();
        let empty = Mesh::default();
        let p = dir.path().join("empty.stl");
        export_stl(&empty, &p).unwrap();
        assert_eq!(fs::metadata(&p).unwrap().len(), 84);

        let c = complex();
        let r = Rib {
            rib_type: RibType::Spine,
            cells: vec![0],
            ring: crate::strata::RingName::Spine,
        };
        let mesh = rib_mesh(c, &r, &light()).unwrap();
        let p = dir.path().join("cell.stl");
        export_stl(&mesh, &p).unwrap();
        let bytes = fs::read(&p).unwrap();
        let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        assert_eq!(count, mesh.triangles.len());
        assert_eq!(bytes.len(), 84 + 50 * count);

        let p = dir.path().join("cell.obj");
        export_obj(&mesh, &p).unwrap();
        let back = parse_obj(&fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(back.triangles, mesh.triangles);
        for (a, b) in back.vertices.iter().zip(&mesh.vertices) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn export_error_names_path() {
        let err = export_stl(&Mesh::default(), Path::new("/nonexistent/dir/x.stl")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.stl"));
    }

    #[test]
    fn obj_parser_rejects_garbage() {
        assert!(parse_obj("v 1 2\n").is_err());
        assert!(parse_obj("f 1 2 3 4\n").is_err());
        assert!(parse_obj("f 0 1 2\n").is_err());
    }
}
