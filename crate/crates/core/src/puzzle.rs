//! Rib placements, the rib-count limits, an assembly search and the catalog.
//!
//! A placement is the image of a canonical rib under a symmetry fixing the
//! south-pole cell. An assembly is a family of pairwise disjoint placements
//! realizing a rib multiset.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell120::{pole_symmetries, Complex120, PoleSymmetry, SymmetryKind};
use crate::strata::{cell_layers, layer_census, rib_cells, rings, Layer, Rib, RibType, Rings, StrataError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PuzzleError {
    #[error("no assembly exists for {0}")]
    Infeasible(String),
    #[error("unknown puzzle {0:?}")]
    UnknownPuzzle(String),
    #[error("puzzle {name}: {detail}")]
    BadSpec { name: String, detail: String },
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// Everything the search needs, computed once.
#[derive(Clone, Debug)]
pub struct PuzzleContext {
    complex: Complex120,
    rings: Rings,
    layers: Vec<Layer>,
    capacity: [usize; 9],
    symmetries: Vec<PoleSymmetry>,
    ribs: Vec<Rib>,
}

impl PuzzleContext {
    pub fn new(complex: Complex120) -> Result<Self, PuzzleError> {
        let rings = rings(&complex)?;
        let layers = cell_layers(&complex)?;
        let capacity = layer_census(&complex)?;
        let symmetries = pole_symmetries(&complex, true);
        let ribs = RibType::ALL
            .iter()
            .map(|&t| rib_cells(&complex, &rings, t))
            .collect();
        Ok(PuzzleContext {
            complex,
            rings,
            layers,
            capacity,
            symmetries,
            ribs,
        })
    }

    pub fn complex(&self) -> &Complex120 {
        &self.complex
    }

    pub fn rings(&self) -> &Rings {
        &self.rings
    }

    pub fn layer(&self, cell: usize) -> Layer {
        self.layers[cell]
    }

    pub fn layer_capacity(&self) -> [usize; 9] {
        self.capacity
    }

    /// Pole symmetries: 60 rotations followed by 60 reflections.
    pub fn symmetries(&self) -> &[PoleSymmetry] {
        &self.symmetries
    }

    pub fn rotations(&self) -> &[PoleSymmetry] {
        &self.symmetries[..60]
    }

    pub fn canonical_rib(&self, rib_type: RibType) -> &Rib {
        &self.ribs[RibType::ALL.iter().position(|&t| t == rib_type).unwrap()]
    }

    fn group_for(&self, allow_mirror: bool) -> &[PoleSymmetry] {
        if allow_mirror {
            &self.symmetries
        } else {
            self.rotations()
        }
    }

    /// Per-layer cell counts of a cell set.
    pub fn layer_usage(&self, cells: &[usize]) -> [usize; 9] {
        let mut h = [0; 9];
        for &c in cells {
            h[self.layers[c].index()] += 1;
        }
        h
    }
}

pub fn mask_of(cells: &[usize]) -> u128 {
    cells.iter().fold(0u128, |m, &c| m | (1u128 << c))
}

fn image(sym: &PoleSymmetry, cells: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = cells.iter().map(|&c| sym.apply(c)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub rib_type: RibType,
    /// Index into [`PuzzleContext::symmetries`] of the first symmetry
    /// producing this cell set.
    pub symmetry: usize,
    pub cells: Vec<usize>,
    /// Reachable only through a reflection.
    pub mirror: bool,
    #[serde(skip)]
    pub mask: u128,
}

/// Rib types whose two copies in a set are mirror images of each other.
///
/// The equatorial ring splits into two 5-cell halves that no rotation
/// fixing the south pole exchanges, so a set holding both halves holds a
/// left and a right piece.
pub fn ships_as_mirror_pair(rib_type: RibType) -> bool {
    rib_type == RibType::Equator5
}

/// Distinct images of the canonical rib, sorted by cell set. Mirror pairs
/// always use both hands.
pub fn placements(ctx: &PuzzleContext, rib_type: RibType, allow_mirror: bool) -> Vec<Placement> {
    let base = &ctx.canonical_rib(rib_type).cells;
    let mut by_cells: BTreeMap<Vec<usize>, Placement> = BTreeMap::new();
    let group = ctx.group_for(allow_mirror || ships_as_mirror_pair(rib_type));
    for (idx, sym) in group.iter().enumerate() {
        let cells = image(sym, base);
        by_cells.entry(cells.clone()).or_insert_with(|| Placement {
            rib_type,
            symmetry: idx,
            mask: mask_of(&cells),
            cells,
            mirror: sym.kind == SymmetryKind::Reflection,
        });
    }
    by_cells.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variant {
    pub name: String,
    pub ribs: BTreeMap<RibType, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleSpec {
    pub name: String,
    pub ribs: BTreeMap<RibType, usize>,
    /// Stated cell total.
    pub cells: usize,
    #[serde(default)]
    pub note: String,
    #[serde(default)]
    pub variants: Vec<Variant>,
    /// Order of the rotation group fixing the intended assemblies, for
    /// entries that share a rib multiset.
    #[serde(default)]
    pub symmetry: Option<usize>,
}

fn multiset(items: &[(RibType, usize)]) -> BTreeMap<RibType, usize> {
    let mut m = BTreeMap::new();
    for &(t, k) in items {
        if k > 0 {
            *m.entry(t).or_insert(0) += k;
        }
    }
    m
}

pub fn cell_total(ribs: &BTreeMap<RibType, usize>) -> usize {
    ribs.iter().map(|(t, k)| t.cell_count() * k).sum()
}

/// The numeral in a `DcN` name.
pub fn dc_numeral(name: &str) -> Option<usize> {
    let rest = name.trim().strip_prefix("Dc")?;
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

fn name_key(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

impl PuzzleSpec {
    pub fn new(name: impl Into<String>, ribs: &[(RibType, usize)]) -> Self {
        let ribs = multiset(ribs);
        PuzzleSpec {
            name: name.into(),
            cells: cell_total(&ribs),
            ribs,
            note: String::new(),
            variants: Vec::new(),
            symmetry: None,
        }
    }

    pub fn with_symmetry(mut self, order: usize) -> Self {
        self.symmetry = Some(order);
        self
    }

    pub fn count(&self, t: RibType) -> usize {
        self.ribs.get(&t).copied().unwrap_or(0)
    }

    pub fn rib_count(&self) -> usize {
        self.ribs.values().sum()
    }

    /// Checks the stated total against the multiset and, for `DcN` names,
    /// against `N`.
    pub fn validate(&self) -> Result<(), PuzzleError> {
        let bad = |detail: String| {
            Err(PuzzleError::BadSpec {
                name: self.name.clone(),
                detail,
            })
        };
        let sum = cell_total(&self.ribs);
        if sum != self.cells {
            return bad(format!("ribs hold {sum} cells, stated {}", self.cells));
        }
        if let Some(n) = dc_numeral(&self.name) {
            if n != sum {
                return bad(format!("name says {n} cells, ribs hold {sum}"));
            }
        }
        Ok(())
    }

    pub fn variant_specs(&self) -> Vec<PuzzleSpec> {
        self.variants
            .iter()
            .map(|v| PuzzleSpec {
                name: v.name.clone(),
                cells: cell_total(&v.ribs),
                ribs: v.ribs.clone(),
                note: String::new(),
                variants: Vec::new(),
                symmetry: None,
            })
            .collect()
    }
}

impl fmt::Display for PuzzleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (", self.name)?;
        for (i, (t, k)) in self.ribs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{k}x{t}")?;
        }
        write!(f, ")")
    }
}

/// One bound on rib counts and the layer that enforces it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitCheck {
    pub bound: &'static str,
    pub used: usize,
    pub limit: usize,
    pub layer: Layer,
    pub layer_capacity: usize,
    pub cells_per_rib: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub checks: Vec<LimitCheck>,
}

impl LimitReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &LimitCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

pub fn check_rib_limits(spec: &PuzzleSpec) -> LimitReport {
    let inner = spec.count(RibType::Inner6) + spec.count(RibType::Inner4);
    let outer = spec.count(RibType::Outer6) + spec.count(RibType::Outer4);
    let mk = |bound, used, layer, capacity: usize| LimitCheck {
        bound,
        used,
        limit: capacity / 2,
        layer,
        layer_capacity: capacity,
        cells_per_rib: 2,
        ok: used <= capacity / 2,
    };
    LimitReport {
        checks: vec![
            mk("inner", inner, Layer::Antarctic, 12),
            mk("outer", outer, Layer::Capricorn, 12),
            mk("inner+outer", inner + outer, Layer::SouthTemperate, 20),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub allow_mirror: bool,
    pub max_solutions: Option<usize>,
    /// Reject partial assemblies whose remaining ribs cannot fit into the
    /// free cells of some layer.
    pub layer_pruning: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            allow_mirror: false,
            max_solutions: Some(1),
            layer_pruning: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assembly {
    pub placements: Vec<Placement>,
}

impl Assembly {
    pub fn cells(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.placements.iter().flat_map(|p| p.cells.clone()).collect();
        all.sort_unstable();
        all
    }

    pub fn is_disjoint(&self) -> bool {
        let mut mask = 0u128;
        for p in &self.placements {
            if mask & p.mask != 0 {
                return false;
            }
            mask |= p.mask;
        }
        true
    }

    /// Sorted `(type, cells)` pairs; equal keys mean equal assemblies.
    pub fn key(&self) -> Vec<(RibType, Vec<usize>)> {
        let mut k: Vec<(RibType, Vec<usize>)> = self
            .placements
            .iter()
            .map(|p| (p.rib_type, p.cells.clone()))
            .collect();
        k.sort();
        k
    }
}

struct Search<'a> {
    slots: Vec<(usize, usize)>,
    pools: Vec<Vec<Placement>>,
    usage: Vec<[usize; 9]>,
    capacity: [usize; 9],
    layer_mask: [u128; 9],
    opts: SolveOptions,
    chosen: Vec<(usize, usize)>,
    found: Vec<Assembly>,
    symmetry: Option<(&'a [PoleSymmetry], usize)>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.opts.max_solutions.is_some_and(|m| self.found.len() >= m)
    }

    fn feasible(&self, depth: usize, mask: u128) -> bool {
        let mut need = [0usize; 9];
        let mut per_pool = vec![0usize; self.pools.len()];
        for &(pool, _) in &self.slots[depth..] {
            per_pool[pool] += 1;
            for l in 0..9 {
                need[l] += self.usage[pool][l];
            }
        }
        if self.opts.layer_pruning {
            for l in 0..9 {
                let free = self.capacity[l] - (mask & self.layer_mask[l]).count_ones() as usize;
                if need[l] > free {
                    return false;
                }
            }
        }
        // forward check: each remaining type still has enough disjoint
        // candidates beyond the current position
        for (pool, &k) in per_pool.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let from = match self.slots[depth] {
                (p, _) if p == pool => self.min_index(depth),
                _ => 0,
            };
            let avail = self.pools[pool][from..]
                .iter()
                .filter(|p| p.mask & mask == 0)
                .count();
            if avail < k {
                return false;
            }
        }
        true
    }

    fn min_index(&self, depth: usize) -> usize {
        let (pool, _) = self.slots[depth];
        match self.chosen.last() {
            Some(&(p, i)) if p == pool => i + 1,
            _ => 0,
        }
    }

    fn run(&mut self, depth: usize, mask: u128) {
        if self.done() {
            return;
        }
        if depth == self.slots.len() {
            let mut placements: Vec<Placement> = self
                .chosen
                .iter()
                .map(|&(p, i)| self.pools[p][i].clone())
                .collect();
            placements.sort_by(|a, b| (a.rib_type, &a.cells).cmp(&(b.rib_type, &b.cells)));
            let a = Assembly { placements };
            if let Some((group, order)) = self.symmetry {
                if assembly_stabilizer(group, &a.key()) != order {
                    return;
                }
            }
            self.found.push(a);
            return;
        }
        if !self.feasible(depth, mask) {
            return;
        }
        let (pool, _) = self.slots[depth];
        for i in self.min_index(depth)..self.pools[pool].len() {
            let m = self.pools[pool][i].mask;
            if m & mask != 0 {
                continue;
            }
            self.chosen.push((pool, i));
            self.run(depth + 1, mask | m);
            self.chosen.pop();
            if self.done() {
                return;
            }
        }
    }
}

/// Backtracking search for assemblies, trying rib types with the fewest
/// placements first and placements in cell-set order.
pub fn solve(ctx: &PuzzleContext, spec: &PuzzleSpec, opts: SolveOptions) -> Result<Vec<Assembly>, PuzzleError> {
    let mut types: Vec<(usize, RibType, usize)> = spec
        .ribs
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&t, &k)| (placements(ctx, t, opts.allow_mirror).len(), t, k))
        .collect();
    types.sort();
    let pools: Vec<Vec<Placement>> = types
        .iter()
        .map(|&(_, t, _)| placements(ctx, t, opts.allow_mirror))
        .collect();
    let usage = types
        .iter()
        .map(|&(_, t, _)| ctx.layer_usage(&ctx.canonical_rib(t).cells))
        .collect();
    let slots = types
        .iter()
        .enumerate()
        .flat_map(|(p, &(_, _, k))| (0..k).map(move |j| (p, j)))
        .collect();
    let mut layer_mask = [0u128; 9];
    for c in 0..ctx.complex.cell_count() {
        layer_mask[ctx.layer(c).index()] |= 1u128 << c;
    }
    let mut search = Search {
        slots,
        pools,
        usage,
        capacity: ctx.capacity,
        layer_mask,
        opts,
        chosen: Vec::new(),
        found: Vec::new(),
        symmetry: spec.symmetry.map(|k| (ctx.rotations(), k)),
    };
    search.run(0, 0);
    if search.found.is_empty() {
        Err(PuzzleError::Infeasible(spec.name.clone()))
    } else {
        Ok(search.found)
    }
}

pub fn is_feasible(ctx: &PuzzleContext, spec: &PuzzleSpec, allow_mirror: bool) -> bool {
    let opts = SolveOptions {
        allow_mirror,
        ..SolveOptions::default()
    };
    solve(ctx, spec, opts).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equivalence {
    Raw,
    UpToRotation,
    UpToFullSymmetry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionCounts {
    pub raw: usize,
    pub up_to_rotation: usize,
    pub up_to_full_symmetry: usize,
}

impl SolutionCounts {
    pub fn get(&self, e: Equivalence) -> usize {
        match e {
            Equivalence::Raw => self.raw,
            Equivalence::UpToRotation => self.up_to_rotation,
            Equivalence::UpToFullSymmetry => self.up_to_full_symmetry,
        }
    }
}

/// Smallest image of an assembly key under a symmetry group.
pub fn canonical_key(
    key: &[(RibType, Vec<usize>)],
    group: &[PoleSymmetry],
) -> Vec<(RibType, Vec<usize>)> {
    group
        .iter()
        .map(|s| {
            let mut k: Vec<(RibType, Vec<usize>)> =
                key.iter().map(|(t, cells)| (*t, image(s, cells))).collect();
            k.sort();
            k
        })
        .min()
        .expect("the group is nonempty")
}

/// Every assembly, grouped into orbits.
pub fn count_solutions(ctx: &PuzzleContext, spec: &PuzzleSpec, allow_mirror: bool) -> SolutionCounts {
    let opts = SolveOptions {
        allow_mirror,
        max_solutions: None,
        layer_pruning: true,
    };
    let all = solve(ctx, spec, opts).unwrap_or_default();
    let orbits = |group: &[PoleSymmetry]| {
        all.iter()
            .map(|a| canonical_key(&a.key(), group))
            .collect::<HashSet<_>>()
            .len()
    };
    SolutionCounts {
        raw: all.len(),
        up_to_rotation: orbits(ctx.rotations()),
        up_to_full_symmetry: orbits(ctx.symmetries()),
    }
}

/// One rotation orbit of assemblies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClass {
    pub representative: Vec<(RibType, Vec<usize>)>,
    /// Assemblies of this orbit among all solutions.
    pub orbit_size: usize,
    /// Rotations fixing the assembly, placement by placement.
    pub rotation_stabilizer: usize,
    /// Rotations and reflections fixing the assembly.
    pub full_stabilizer: usize,
}

pub fn orbit_classes(ctx: &PuzzleContext, spec: &PuzzleSpec, allow_mirror: bool) -> Vec<OrbitClass> {
    let opts = SolveOptions {
        allow_mirror,
        max_solutions: None,
        layer_pruning: true,
    };
    let all = solve(ctx, spec, opts).unwrap_or_default();
    let mut classes: BTreeMap<Vec<(RibType, Vec<usize>)>, usize> = BTreeMap::new();
    for a in &all {
        *classes.entry(canonical_key(&a.key(), ctx.rotations())).or_insert(0) += 1;
    }
    classes
        .into_iter()
        .map(|(rep, orbit_size)| OrbitClass {
            rotation_stabilizer: assembly_stabilizer(ctx.rotations(), &rep),
            full_stabilizer: assembly_stabilizer(ctx.symmetries(), &rep),
            representative: rep,
            orbit_size,
        })
        .collect()
}

/// Number of symmetries mapping an assembly key onto itself.
pub fn assembly_stabilizer(group: &[PoleSymmetry], key: &[(RibType, Vec<usize>)]) -> usize {
    let mut sorted = key.to_vec();
    sorted.sort();
    group
        .iter()
        .filter(|s| {
            let mut k: Vec<(RibType, Vec<usize>)> =
                sorted.iter().map(|(t, c)| (*t, image(s, c))).collect();
            k.sort();
            k == sorted
        })
        .count()
}

/// Largest number of `from` ribs in an assembly that can be swapped at once
/// for a `to` rib containing them, keeping the assembly disjoint.
pub fn max_substitutions(
    ctx: &PuzzleContext,
    key: &[(RibType, Vec<usize>)],
    from: RibType,
    to: RibType,
) -> usize {
    let used = key.iter().fold(0u128, |m, (_, c)| m | mask_of(c));
    let bigger = placements(ctx, to, false);
    // extra cells each swappable rib would claim, one option per candidate
    let options: Vec<Vec<u128>> = key
        .iter()
        .filter(|(t, _)| *t == from)
        .map(|(_, cells)| {
            let m = mask_of(cells);
            bigger
                .iter()
                .filter(|p| p.mask & m == m)
                .map(|p| p.mask & !m)
                .filter(|extra| extra & used == 0)
                .collect()
        })
        .collect();
    fn best(options: &[Vec<u128>], taken: u128) -> usize {
        let Some((first, rest)) = options.split_first() else {
            return 0;
        };
        let skip = best(rest, taken);
        first
            .iter()
            .filter(|&&e| e & taken == 0)
            .map(|&e| 1 + best(rest, taken | e))
            .fold(skip, usize::max)
    }
    best(&options, 0)
}

/// Number of symmetries mapping a cell set onto itself.
pub fn stabilizer_order(group: &[PoleSymmetry], cells: &[usize]) -> usize {
    let mut sorted = cells.to_vec();
    sorted.sort_unstable();
    group.iter().filter(|s| image(s, &sorted) == sorted).count()
}

/// Whether some reflected placement of `a` equals a rotated placement of `b`.
pub fn mirror_meets(ctx: &PuzzleContext, a: RibType, b: RibType) -> bool {
    let rotated: BTreeSet<Vec<usize>> = placements(ctx, b, false).into_iter().map(|p| p.cells).collect();
    let base = &ctx.canonical_rib(a).cells;
    ctx.symmetries()[60..]
        .iter()
        .any(|s| rotated.contains(&image(s, base)))
}

fn v(name: &str, ribs: &[(RibType, usize)]) -> Variant {
    Variant {
        name: name.to_string(),
        ribs: multiset(ribs),
    }
}

fn entry(name: &str, ribs: &[(RibType, usize)], note: &str, variants: Vec<Variant>) -> PuzzleSpec {
    let mut s = PuzzleSpec::new(name, ribs);
    s.note = note.to_string();
    s.variants = variants;
    s
}

/// The twelve catalog puzzles, with their printed notes and the concrete
/// multisets those notes describe.
pub fn catalog() -> Vec<PuzzleSpec> {
    use RibType::*;
    vec![
        // Star and Pulsar share a multiset; the Star is the tetrahedral
        // arrangement, the Pulsar the trigonal one.
        entry(
            "Dc24 Star",
            &[(Inner4, 6)],
            "Up to three ribs can be replaced by inner 6s.",
            (1..=3)
                .map(|k| v(&format!("Dc24 Star, {k}x inner 6"), &[(Inner4, 6 - k), (Inner6, k)]))
                .collect(),
        )
        .with_symmetry(12),
        entry(
            "Dc24 Pulsar",
            &[(Inner4, 6)],
            "Any number of ribs can be replaced by inner 6s.",
            (1..=6)
                .map(|k| v(&format!("Dc24 Pulsar, {k}x inner 6"), &[(Inner4, 6 - k), (Inner6, k)]))
                .collect(),
        )
        .with_symmetry(6),
        entry(
            "Dc29 Space Invader",
            &[(Inner6, 2), (Outer6, 2), (Spine, 1)],
            "Can add 2x equator.",
            vec![v(
                "Dc29 Space Invader + 2x equator",
                &[(Inner6, 2), (Outer6, 2), (Spine, 1), (Equator5, 2)],
            )],
        ),
        entry("Dc30 Star", &[(Outer4, 3), (Outer6, 3)], "", vec![]),
        entry(
            "Dc30 Ring",
            &[(Outer6, 5)],
            "Replace all ribs with inner 6s to get the Inner Ring.",
            vec![v("Dc30 Inner Ring", &[(Inner6, 5)])],
        ),
        entry(
            "Dc30 Comet",
            &[(Outer6, 5)],
            "Add a spine and one inner 4 to make the Comet more rigid.",
            vec![v("Dc30 Comet + spine + inner 4", &[(Outer6, 5), (Spine, 1), (Inner4, 1)])],
        ),
        entry(
            "Dc36 Alien",
            &[(Inner6, 3), (Outer6, 3)],
            "Either set of 6s can be replaced by 4s.",
            vec![
                v("Dc36 Alien, inner 4s", &[(Inner4, 3), (Outer6, 3)]),
                v("Dc36 Alien, outer 4s", &[(Inner6, 3), (Outer4, 3)]),
            ],
        ),
        entry(
            "Dc36 Pulsar",
            &[(Outer6, 6)],
            "Up to three ribs can be replaced by outer 4s.",
            (1..=3)
                .map(|k| v(&format!("Dc36 Pulsar, {k}x outer 4"), &[(Outer6, 6 - k), (Outer4, k)]))
                .collect(),
        ),
        entry("Dc42 Alien", &[(Outer4, 6), (Inner6, 3)], "", vec![]),
        entry(
            "Dc45 Meteor",
            &[(Inner4, 5), (Outer4, 5), (Spine, 1)],
            "There are six ways to build this.",
            vec![],
        ),
        entry("Dc50 Galaxy", &[(Inner4, 5), (Outer4, 5), (Equator5, 2)], "", vec![]),
        entry(
            "Dc75 Meteor",
            &[(Inner6, 5), (Outer6, 5), (Spine, 1), (Equator5, 2)],
            "",
            vec![],
        ),
    ]
}

/// Catalog lookup ignoring case, spaces and punctuation; variants are
/// matched after the main entries.
pub fn find_puzzle(name: &str) -> Result<PuzzleSpec, PuzzleError> {
    let key = name_key(name);
    let cat = catalog();
    if let Some(s) = cat.iter().find(|s| name_key(&s.name) == key) {
        return Ok(s.clone());
    }
    cat.iter()
        .flat_map(|s| s.variant_specs())
        .find(|s| name_key(&s.name) == key)
        .ok_or_else(|| PuzzleError::UnknownPuzzle(name.to_string()))
}
