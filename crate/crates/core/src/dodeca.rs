//! The positioned dodecahedral tiling of `S²_I`, its trigonometric
//! constants, and the binary dodecahedral group `D* ⊂ S³`.
//!
//! The tiling is placed with a vertex at `v = (i + j + k)/√3` and a face
//! center `f = x i + y j` in the `ij`-plane. The group is generated from
//! the lift `p` of the vertex rotation about `v` and the lift `q` of the
//! face rotation about `f`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::Serialize;
use thiserror::Error;

use crate::check::{Check, Report};
use crate::quat::{
    dist_s3, exp_imag, log_unit, twisted_action, ImaginaryUnit, UnitQuaternion, EPS_ALG, EPS_MATCH,
};

/// Number of elements of `D*`.
pub const GROUP_ORDER: usize = 120;

/// Generation gives up after this many breadth-first rounds.
const MAX_ROUNDS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group closure failed: {0}")]
    GroupClosureFailure(String),
}

/// Sines, cosines and cotangents of `π/5` and `2π/5`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrigConstants {
    pub cos_pi5: f64,
    pub sin_pi5: f64,
    pub cot_pi5: f64,
    pub cos_2pi5: f64,
    pub sin_2pi5: f64,
    pub cot_2pi5: f64,
}

impl TrigConstants {
    pub fn new() -> Self {
        let (sin_pi5, cos_pi5) = (PI / 5.0).sin_cos();
        let (sin_2pi5, cos_2pi5) = (2.0 * PI / 5.0).sin_cos();
        TrigConstants {
            cos_pi5,
            sin_pi5,
            cot_pi5: cos_pi5 / sin_pi5,
            cos_2pi5,
            sin_2pi5,
            cot_2pi5: cos_2pi5 / sin_2pi5,
        }
    }
}

impl Default for TrigConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Vertex direction, the three face centers around it, and the in-plane
/// coordinates `(x, y)` of the first face center.
#[derive(Clone, Copy, Debug)]
pub struct BaseFrame {
    pub v: ImaginaryUnit,
    pub f: ImaginaryUnit,
    pub f_prime: ImaginaryUnit,
    pub f_dprime: ImaginaryUnit,
    pub x: f64,
    pub y: f64,
}

pub fn base_frame() -> BaseFrame {
    let t = TrigConstants::new();
    // x + y = cot π/5 and x² + y² = 1; take the root with x > y.
    let x = 0.5 * (t.cot_pi5 + t.cot_2pi5);
    let y = 0.5 * (t.cot_pi5 - t.cot_2pi5);
    let s = 1.0 / 3f64.sqrt();
    let unit = |b, c, d| ImaginaryUnit::from_vector(Vector3::new(b, c, d)).expect("nonzero");
    BaseFrame {
        v: unit(s, s, s),
        f: unit(x, y, 0.0),
        f_prime: unit(0.0, x, y),
        f_dprime: unit(y, 0.0, x),
        x,
        y,
    }
}

/// The explicit lifts used to generate `D*`.
#[derive(Clone, Copy, Debug)]
pub struct Generators {
    /// Lift of the vertex rotation about `v` by `2π/3`.
    pub p: UnitQuaternion,
    /// Lift of the face rotation about `f` by `2π/5`.
    pub q: UnitQuaternion,
    pub q_prime: UnitQuaternion,
    pub q_dprime: UnitQuaternion,
}

pub fn generators() -> Generators {
    let frame = base_frame();
    Generators {
        p: exp_imag(frame.v, PI / 3.0),
        q: exp_imag(frame.f, PI / 5.0),
        q_prime: exp_imag(frame.f_prime, PI / 5.0),
        q_dprime: exp_imag(frame.f_dprime, PI / 5.0),
    }
}

/// Ids of the named generators inside a [`BinaryDodecGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorIds {
    pub p: usize,
    pub q: usize,
    pub q_prime: usize,
    pub q_dprime: usize,
}

/// The 120 unit quaternions of `D*` with stable ids and Cayley tables.
#[derive(Clone, Debug)]
pub struct BinaryDodecGroup {
    elements: Vec<UnitQuaternion>,
    mul_table: Vec<u8>,
    inv_table: Vec<u8>,
    neg_table: Vec<u8>,
    conj_table: Vec<u8>,
    generators: GeneratorIds,
    eps_match: f64,
}

fn sort_key(q: &UnitQuaternion) -> [i64; 4] {
    q.to_array().map(|x| (x * 1e6).round() as i64)
}

fn find(elements: &[UnitQuaternion], q: UnitQuaternion, eps: f64) -> Option<usize> {
    elements.iter().position(|&e| dist_s3(e, q) < eps)
}

/// Closure of `{p, q}` under multiplication, breadth first from the identity.
pub fn generate_group(p: UnitQuaternion, q: UnitQuaternion) -> Result<BinaryDodecGroup, GroupError> {
    generate_group_with(p, q, EPS_MATCH)
}

pub fn generate_group_with(
    p: UnitQuaternion,
    q: UnitQuaternion,
    eps_match: f64,
) -> Result<BinaryDodecGroup, GroupError> {
    let gens = [p, q];
    let mut elements = vec![UnitQuaternion::ONE];
    let mut frontier = vec![UnitQuaternion::ONE];
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(GroupError::GroupClosureFailure(format!(
                "no closure after {MAX_ROUNDS} rounds"
            )));
        }
        let mut fresh: Vec<UnitQuaternion> = Vec::new();
        for &g in &frontier {
            for &s in &gens {
                let h = g * s;
                if find(&elements, h, eps_match).is_none() && find(&fresh, h, eps_match).is_none() {
                    fresh.push(h);
                }
            }
        }
        fresh.sort_by_key(sort_key);
        elements.extend(fresh.iter().copied());
        if elements.len() > GROUP_ORDER {
            return Err(GroupError::GroupClosureFailure(format!(
                "more than {GROUP_ORDER} distinct elements"
            )));
        }
        frontier = fresh;
    }
    if elements.len() != GROUP_ORDER {
        return Err(GroupError::GroupClosureFailure(format!(
            "closure has {} elements",
            elements.len()
        )));
    }

    let n = elements.len();
    let lookup = |q: UnitQuaternion, what: &str| {
        find(&elements, q, eps_match)
            .map(|i| i as u8)
            .ok_or_else(|| GroupError::GroupClosureFailure(format!("{what} leaves the group")))
    };
    let mut mul_table = Vec::with_capacity(n * n);
    for &a in &elements {
        for &b in &elements {
            mul_table.push(lookup(a * b, "product")?);
        }
    }
    let mut inv_table = Vec::with_capacity(n);
    let mut neg_table = Vec::with_capacity(n);
    let mut conj_table = Vec::with_capacity(n);
    for &a in &elements {
        inv_table.push(lookup(a.inverse(), "inverse")?);
        neg_table.push(lookup(-a, "negation")?);
        conj_table.push(lookup(a.conj(), "conjugate")?);
    }
    let named = generators();
    let id = |q: UnitQuaternion| {
        find(&elements, q, eps_match)
            .ok_or_else(|| GroupError::GroupClosureFailure("generator missing".into()))
    };
    let generator_ids = GeneratorIds {
        p: id(named.p)?,
        q: id(named.q)?,
        q_prime: id(named.q_prime)?,
        q_dprime: id(named.q_dprime)?,
    };
    Ok(BinaryDodecGroup {
        elements,
        mul_table,
        inv_table,
        neg_table,
        conj_table,
        generators: generator_ids,
        eps_match,
    })
}

impl BinaryDodecGroup {
    /// Builds `D*` from the standard generators.
    pub fn new() -> Result<Self, GroupError> {
        let g = generators();
        generate_group(g.p, g.q)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[UnitQuaternion] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> UnitQuaternion {
        self.elements[id]
    }

    pub fn generator_ids(&self) -> GeneratorIds {
        self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.len() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv_table[a] as usize
    }

    /// Id of `-g`.
    pub fn neg(&self, a: usize) -> usize {
        self.neg_table[a] as usize
    }

    /// Id of the quaternion conjugate (which equals the inverse on S³).
    pub fn conj(&self, a: usize) -> usize {
        self.conj_table[a] as usize
    }

    /// Id of `g h g⁻¹`.
    pub fn conjugate_by(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, n: i32) -> usize {
        let base = if n < 0 { self.inv(a) } else { a };
        (0..n.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    /// Id of the element matching `q`, if any.
    pub fn id_of(&self, q: UnitQuaternion) -> Option<usize> {
        find(&self.elements, q, self.eps_match)
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Histogram of real parts, clustered at `EPS_ALG` and sorted by
    /// decreasing real part.
    pub fn real_part_census(&self) -> Vec<(f64, usize)> {
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        for e in &self.elements {
            let re = e.real();
            match clusters.iter_mut().find(|(c, _)| (c - re).abs() < EPS_ALG) {
                Some(entry) => entry.1 += 1,
                None => clusters.push((re, 1)),
            }
        }
        clusters.sort_by(|a, b| b.0.total_cmp(&a.0));
        clusters
    }

    /// Counts rotations of `ψ(D*)` by rotation angle expressed in degrees
    /// (rounded), pairing `±g`.
    pub fn rotation_census(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (id, &g) in self.elements.iter().enumerate() {
            let neg = self.neg(id);
            // one representative of each pair: Re > 0, or Re = 0 and the smaller id
            let re = g.real();
            let keep = re > EPS_ALG || (re.abs() <= EPS_ALG && id < neg);
            if !keep {
                continue;
            }
            let angle = 2.0 * log_unit(g).alpha;
            *out.entry(angle.to_degrees().round() as u32).or_insert(0) += 1;
        }
        out
    }
}

/// Checks the closed forms for the pentagon of the dodecahedral tiling.
pub fn verify_dodeca_trig() -> Report {
    const TOL: f64 = 1e-12;
    let t = TrigConstants::new();
    let frame = base_frame();
    let gens = generators();
    let s5 = 5f64.sqrt();
    let mut r = Report::default();

    r.push(Check::approx(
        "trig1_cot_sq_sum",
        t.cot_pi5.powi(2) + t.cot_2pi5.powi(2),
        2.0,
        TOL,
    ));
    r.push(Check::approx(
        "trig2_cos_quadratic",
        4.0 * t.cos_pi5.powi(2) - 2.0 * t.cos_pi5 - 1.0,
        0.0,
        TOL,
    ));
    r.push(Check::approx("cos_pi5_closed_form", t.cos_pi5, (1.0 + s5) / 4.0, TOL));
    r.push(Check::approx("cos_2pi5_closed_form", t.cos_2pi5, (s5 - 1.0) / 4.0, TOL));
    r.push(Check::approx(
        "sin_pi5_closed_form",
        t.sin_pi5,
        (10.0 - 2.0 * s5).sqrt() / 4.0,
        TOL,
    ));
    r.push(Check::approx(
        "cot_pi5_closed_form",
        t.cot_pi5,
        (1.0 + 2.0 / s5).sqrt(),
        TOL,
    ));
    r.push(Check::approx(
        "cot_2pi5_closed_form",
        t.cot_2pi5,
        (1.0 - 2.0 / s5).sqrt(),
        TOL,
    ));
    r.push(Check::approx("frame_x_sq_plus_y_sq", frame.x.powi(2) + frame.y.powi(2), 1.0, TOL));
    r.push(Check::approx("frame_x_plus_y", frame.x + frame.y, t.cot_pi5, TOL));

    let v = frame.v.unit();
    let f = frame.f.unit();
    r.push(Check::approx(
        "pentagon_center_to_vertex",
        dist_s3(v, f),
        (t.cot_pi5 / 3f64.sqrt()).acos(),
        TOL,
    ));
    r.push(Check::approx(
        "pentagon_center_to_vertex_chord_sq",
        (v.quaternion() - f.quaternion()).norm_sq(),
        2.0 - 2.0 / 3f64.sqrt() * t.cot_pi5,
        TOL,
    ));

    // Flag triangle (f, m, v) where m is the midpoint of the pentagon edge
    // from v to its image under the rotation about f.
    let v_next = twisted_action(gens.q, v.quaternion());
    let m = (v.quaternion() + v_next).normalize().expect("nonzero");
    let (fv, mv, vv) = (f.quaternion().imag(), m.quaternion().imag(), frame.v.vector());
    let angle_f = sphere_angle(fv, mv, vv);
    let angle_m = sphere_angle(mv, fv, vv);
    let angle_v = sphere_angle(vv, fv, mv);
    r.push(Check::approx("flag_angle_at_face_center", angle_f, PI / 5.0, TOL));
    r.push(Check::approx("flag_angle_at_edge_center", angle_m, PI / 2.0, TOL));
    r.push(Check::approx("flag_angle_at_vertex", angle_v, PI / 3.0, TOL));
    r.push(Check::approx(
        "flag_area",
        angle_f + angle_m + angle_v - PI,
        PI / 30.0,
        TOL,
    ));
    r
}

/// Angle at `a` of the spherical triangle `(a, b, c)` on the unit 2-sphere.
fn sphere_angle(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>) -> f64 {
    let tb = b - a * a.dot(&b);
    let tc = c - a * a.dot(&c);
    tb.cross(&tc).norm().atan2(tb.dot(&tc))
}
