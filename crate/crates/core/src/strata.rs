//! Layers, rings and ribs.
//!
//! A layer collects the cells at one spherical distance from the south-pole
//! cell. Rings are the twelve right cosets of `R = ⟨q⟩`; ribs are their
//! southern truncations.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell120::{Complex120, CELL_SPACING};
use crate::check::{Check, Report};
use crate::quat::{dist_s3, UnitQuaternion, EPS_ALG};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrataError {
    #[error("ring partition failed: {0}")]
    RingPartitionFailure(String),
    #[error("cell {0} lies on no layer")]
    NoLayer(usize),
    #[error("unknown rib type {0:?}")]
    UnknownRibType(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Layer {
    SouthPole,
    Antarctic,
    SouthTemperate,
    Capricorn,
    Equatorial,
    Cancer,
    NorthTemperate,
    Arctic,
    NorthPole,
}

impl Layer {
    pub const ALL: [Layer; 9] = [
        Layer::SouthPole,
        Layer::Antarctic,
        Layer::SouthTemperate,
        Layer::Capricorn,
        Layer::Equatorial,
        Layer::Cancer,
        Layer::NorthTemperate,
        Layer::Arctic,
        Layer::NorthPole,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn nominal_angle(self) -> f64 {
        const ANGLES: [f64; 9] = [
            0.0,
            PI / 5.0,
            PI / 3.0,
            2.0 * PI / 5.0,
            PI / 2.0,
            3.0 * PI / 5.0,
            2.0 * PI / 3.0,
            4.0 * PI / 5.0,
            PI,
        ];
        ANGLES[self.index()]
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::SouthPole => "south pole",
            Layer::Antarctic => "antarctic sphere",
            Layer::SouthTemperate => "southern temperate",
            Layer::Capricorn => "tropic of Capricorn",
            Layer::Equatorial => "equatorial sphere",
            Layer::Cancer => "tropic of Cancer",
            Layer::NorthTemperate => "northern temperate",
            Layer::Arctic => "arctic sphere",
            Layer::NorthPole => "north pole",
        }
    }

    /// Identifier form of the name, e.g. `south_temperate`.
    pub fn slug(self) -> &'static str {
        match self {
            Layer::SouthPole => "south_pole",
            Layer::Antarctic => "antarctic",
            Layer::SouthTemperate => "south_temperate",
            Layer::Capricorn => "capricorn",
            Layer::Equatorial => "equatorial",
            Layer::Cancer => "cancer",
            Layer::NorthTemperate => "north_temperate",
            Layer::Arctic => "arctic",
            Layer::NorthPole => "north_pole",
        }
    }

    pub fn from_slug(s: &str) -> Option<Layer> {
        Layer::ALL.into_iter().find(|l| l.slug() == s)
    }

    /// Layer of a point whose real part is within `tol` of a nominal cosine.
    pub fn of_with(q: UnitQuaternion, tol: f64) -> Option<Layer> {
        let re = q.real();
        let mut hits = Layer::ALL
            .into_iter()
            .filter(|l| (l.nominal_angle().cos() - re).abs() <= tol);
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }

    pub fn of(q: UnitQuaternion) -> Option<Layer> {
        Layer::of_with(q, EPS_ALG)
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Layer of every cell, indexed by cell id.
pub fn cell_layers(complex: &Complex120) -> Result<Vec<Layer>, StrataError> {
    (0..complex.cell_count())
        .map(|c| Layer::of(complex.center(c)).ok_or(StrataError::NoLayer(c)))
        .collect()
}

/// Number of cells in each layer.
pub fn layer_census(complex: &Complex120) -> Result<[usize; 9], StrataError> {
    let mut out = [0; 9];
    for l in cell_layers(complex)? {
        out[l.index()] += 1;
    }
    Ok(out)
}

/// Cells with `Re ≥ 0`.
pub fn southern_cells(complex: &Complex120) -> Vec<usize> {
    (0..complex.cell_count())
        .filter(|&c| complex.center(c).real() >= -EPS_ALG)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RingName {
    Spine,
    Equator,
    Inner(u8),
    Outer(u8),
}

impl fmt::Display for RingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingName::Spine => write!(f, "spine"),
            RingName::Equator => write!(f, "equator"),
            RingName::Inner(i) => write!(f, "inner{i}"),
            RingName::Outer(i) => write!(f, "outer{i}"),
        }
    }
}

/// A right coset `R·g`, listed as the cycle `m, q·m, q²·m, …` from its
/// smallest cell id `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ring {
    pub name: RingName,
    pub cells: Vec<usize>,
}

impl Ring {
    pub fn contains(&self, cell: usize) -> bool {
        self.cells.contains(&cell)
    }

    fn sorted_cells(&self) -> Vec<usize> {
        let mut s = self.cells.clone();
        s.sort_unstable();
        s
    }
}

/// The twelve rings in the order spine, equator, inner 0..4, outer 0..4.
#[derive(Clone, Debug, Serialize)]
pub struct Rings {
    rings: Vec<Ring>,
}

impl Rings {
    pub fn all(&self) -> &[Ring] {
        &self.rings
    }

    pub fn get(&self, name: RingName) -> &Ring {
        self.rings
            .iter()
            .find(|r| r.name == name)
            .expect("every ring name is present")
    }

    pub fn spine(&self) -> &Ring {
        &self.rings[0]
    }

    pub fn equator(&self) -> &Ring {
        &self.rings[1]
    }

    pub fn inner(&self, i: usize) -> &Ring {
        &self.rings[2 + i]
    }

    pub fn outer(&self, i: usize) -> &Ring {
        &self.rings[7 + i]
    }

    pub fn ring_of(&self, cell: usize) -> RingName {
        self.rings
            .iter()
            .find(|r| r.contains(cell))
            .map(|r| r.name)
            .expect("rings partition the cells")
    }
}

fn coset_cycle(complex: &Complex120, member: usize) -> Vec<usize> {
    let g = complex.group();
    let q = g.generator_ids().q;
    // walk once to find the minimum, then again to list the cycle from it
    let mut cur = member;
    let mut min = member;
    for _ in 0..10 {
        cur = g.mul(q, cur);
        min = min.min(cur);
    }
    let mut cells = Vec::with_capacity(10);
    let mut x = min;
    for _ in 0..10 {
        cells.push(x);
        x = g.mul(q, x);
    }
    cells
}

pub fn rings(complex: &Complex120) -> Result<Rings, StrataError> {
    let g = complex.group();
    let n = g.len();
    let fail = |msg: String| Err(StrataError::RingPartitionFailure(msg));
    let gens = g.generator_ids();
    let q = gens.q;

    let mut cosets: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for c in 0..n {
        if seen[c] {
            continue;
        }
        let cyc = coset_cycle(complex, c);
        for &x in &cyc {
            if seen[x] {
                return fail(format!("cell {x} lies in two cosets"));
            }
            seen[x] = true;
        }
        cosets.push(cyc);
    }
    if cosets.len() != 12 || cosets.iter().any(|c| c.len() != 10) {
        return fail(format!("{} cosets", cosets.len()));
    }
    let coset_of = |cell: usize| cosets.iter().position(|c| c.contains(&cell)).unwrap();

    let spine = coset_of(g.identity());
    let closed = |k: usize| {
        let union: Vec<usize> = cosets[spine].iter().chain(&cosets[k]).copied().collect();
        union
            .iter()
            .all(|&a| union.iter().all(|&b| union.contains(&g.mul(a, b))))
    };
    let eq_candidates: Vec<usize> = (0..12).filter(|&k| k != spine && closed(k)).collect();
    let equator = match eq_candidates.as_slice() {
        &[k] => k,
        other => return fail(format!("{} equator candidates", other.len())),
    };

    let mut named: Vec<(RingName, usize)> = vec![(RingName::Spine, spine), (RingName::Equator, equator)];
    for i in 0..5 {
        let rep = g.mul(gens.q_prime, g.pow(q, -i));
        named.push((RingName::Inner(i as u8), coset_of(rep)));
    }
    let taken: Vec<usize> = named.iter().map(|&(_, k)| k).collect();
    let outer0 = (0..n)
        .map(coset_of)
        .find(|k| !taken.contains(k))
        .expect("five cosets remain");
    let mut rep = cosets[outer0][0];
    for i in 0..5 {
        named.push((RingName::Outer(i as u8), coset_of(rep)));
        rep = g.conjugate_by(q, rep);
    }
    let mut ks: Vec<usize> = named.iter().map(|&(_, k)| k).collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.len() != 12 {
        return fail("named rings are not distinct".into());
    }
    Ok(Rings {
        rings: named
            .into_iter()
            .map(|(name, k)| Ring { name, cells: cosets[k].clone() })
            .collect(),
    })
}

/// Columns spine, equator, remaining, inner, outer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingLayerTable {
    pub layer_counts: [usize; 9],
    pub rows: [[usize; 5]; 9],
    /// The five inner rings meet every layer in the same number of cells.
    pub inner_uniform: bool,
    pub outer_uniform: bool,
}

impl RingLayerTable {
    pub const COLUMNS: [&'static str; 5] = ["spine", "equator", "remaining", "inner", "outer"];

    pub fn row(&self, layer: Layer) -> [usize; 5] {
        self.rows[layer.index()]
    }

    /// Plain-text rendering in the column order layer, cells, spine,
    /// equator, remaining, inner, outer.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<20} {:>5} {:>5} {:>7} {:>9} {:>5} {:>5}\n",
            "layer", "cells", "spine", "equator", "remaining", "inner", "outer"
        );
        for l in Layer::ALL {
            let r = self.row(l);
            s.push_str(&format!(
                "{:<20} {:>5} {:>5} {:>7} {:>9} {:>5} {:>5}\n",
                l.name(),
                self.layer_counts[l.index()],
                r[0],
                r[1],
                r[2],
                r[3],
                r[4]
            ));
        }
        s
    }
}

fn ring_histogram(ring: &Ring, layers: &[Layer]) -> [usize; 9] {
    let mut h = [0; 9];
    for &c in &ring.cells {
        h[layers[c].index()] += 1;
    }
    h
}

pub fn ring_layer_table(complex: &Complex120, rings: &Rings) -> Result<RingLayerTable, StrataError> {
    let layers = cell_layers(complex)?;
    let census = layer_census(complex)?;
    let spine = ring_histogram(rings.spine(), &layers);
    let equator = ring_histogram(rings.equator(), &layers);
    let inner: Vec<[usize; 9]> = (0..5).map(|i| ring_histogram(rings.inner(i), &layers)).collect();
    let outer: Vec<[usize; 9]> = (0..5).map(|i| ring_histogram(rings.outer(i), &layers)).collect();
    let mut rows = [[0; 5]; 9];
    for l in 0..9 {
        rows[l] = [
            spine[l],
            equator[l],
            census[l] - spine[l] - equator[l],
            inner[0][l],
            outer[0][l],
        ];
    }
    Ok(RingLayerTable {
        layer_counts: census,
        rows,
        inner_uniform: inner.iter().all(|h| *h == inner[0]),
        outer_uniform: outer.iter().all(|h| *h == outer[0]),
    })
}

/// Every ring's centers span a plane and sit `π/5` apart in cycle order.
pub fn hopf_check(complex: &Complex120, rings: &Rings) -> Report {
    let mut report = Report::default();
    for ring in rings.all() {
        let data: Vec<f64> = ring
            .cells
            .iter()
            .flat_map(|&c| complex.center(c).to_array())
            .collect();
        let m = DMatrix::from_row_slice(ring.cells.len(), 4, &data);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let ratio = sv[2] / sv[0];
        let rank = sv.iter().filter(|&&s| s / sv[0] >= 1e-9).count();
        report.push(Check {
            name: format!("{}_sigma3_over_sigma1", ring.name),
            measured: ratio,
            expected: 0.0,
            tolerance: 1e-9,
            pass: ratio < 1e-9,
        });
        report.push(Check::exact(format!("{}_rank", ring.name), rank, 2));
        let k = ring.cells.len();
        let worst = (0..k)
            .map(|i| {
                let d = dist_s3(complex.center(ring.cells[i]), complex.center(ring.cells[(i + 1) % k]));
                (d - CELL_SPACING).abs()
            })
            .fold(0.0, f64::max);
        report.push(Check::approx(format!("{}_spacing", ring.name), CELL_SPACING + worst, CELL_SPACING, EPS_ALG));
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RibType {
    Spine,
    Inner6,
    Inner4,
    Outer6,
    Outer4,
    Equator5,
}

impl RibType {
    pub const ALL: [RibType; 6] = [
        RibType::Spine,
        RibType::Inner6,
        RibType::Inner4,
        RibType::Outer6,
        RibType::Outer4,
        RibType::Equator5,
    ];

    pub fn cell_count(self) -> usize {
        match self {
            RibType::Spine | RibType::Equator5 => 5,
            RibType::Inner6 | RibType::Outer6 => 6,
            RibType::Inner4 | RibType::Outer4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RibType::Spine => "spine",
            RibType::Inner6 => "inner6",
            RibType::Inner4 => "inner4",
            RibType::Outer6 => "outer6",
            RibType::Outer4 => "outer4",
            RibType::Equator5 => "equator",
        }
    }

    pub fn is_inner(self) -> bool {
        matches!(self, RibType::Inner6 | RibType::Inner4)
    }

    pub fn is_outer(self) -> bool {
        matches!(self, RibType::Outer6 | RibType::Outer4)
    }

    fn source(self) -> RingName {
        match self {
            RibType::Spine => RingName::Spine,
            RibType::Inner6 | RibType::Inner4 => RingName::Inner(0),
            RibType::Outer6 | RibType::Outer4 => RingName::Outer(0),
            RibType::Equator5 => RingName::Equator,
        }
    }
}

impl fmt::Display for RibType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RibType {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "spine" => RibType::Spine,
            "inner6" => RibType::Inner6,
            "inner4" => RibType::Inner4,
            "outer6" => RibType::Outer6,
            "outer4" => RibType::Outer4,
            "equator" | "equator5" => RibType::Equator5,
            _ => return Err(StrataError::UnknownRibType(s.to_string())),
        })
    }
}

/// A rib: consecutive cells of one ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rib {
    pub rib_type: RibType,
    pub cells: Vec<usize>,
    pub ring: RingName,
}

impl Rib {
    pub fn layer_histogram(&self, complex: &Complex120) -> BTreeMap<Layer, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.cells {
            let l = Layer::of(complex.center(c)).expect("cells lie on layers");
            *h.entry(l).or_insert(0) += 1;
        }
        h
    }
}

/// Canonical rib of the given type.
pub fn rib_cells(complex: &Complex120, rings: &Rings, rib_type: RibType) -> Rib {
    let ring = rings.get(rib_type.source());
    let cyc = &ring.cells;
    let k = cyc.len();
    let south = |c: usize| complex.center(c).real() >= -EPS_ALG;
    let cells: Vec<usize> = if rib_type == RibType::Equator5 {
        cyc[..5].to_vec()
    } else {
        // the kept cells form one arc; list it from the end following a
        // dropped cell
        let start = (0..k)
            .find(|&i| south(cyc[i]) && !south(cyc[(i + k - 1) % k]))
            .unwrap_or(0);
        let arc: Vec<usize> = (0..k)
            .map(|j| cyc[(start + j) % k])
            .take_while(|&c| south(c))
            .collect();
        if matches!(rib_type, RibType::Inner4 | RibType::Outer4) {
            arc.into_iter()
                .filter(|&c| complex.center(c).real().abs() > EPS_ALG)
                .collect()
        } else {
            arc
        }
    };
    Rib {
        rib_type,
        cells,
        ring: ring.name,
    }
}

pub fn all_ribs(complex: &Complex120, rings: &Rings) -> Vec<Rib> {
    RibType::ALL
        .iter()
        .map(|&t| rib_cells(complex, rings, t))
        .collect()
}

/// Rings as sets of sorted cell ids, in ring order.
pub fn ring_cell_sets(rings: &Rings) -> Vec<Vec<usize>> {
    rings.all().iter().map(Ring::sorted_cells).collect()
}
