//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use quintessence::cell120::{cell_geometry, Complex120, CELL_SPACING};
use quintessence::dodeca::{generate_group, generators, verify_dodeca_trig, BinaryDodecGroup};
use quintessence::meshgen::{check_mesh, rib_mesh, DesignParams};
use quintessence::puzzle::{
    catalog, count_solutions, find_puzzle, is_feasible, solve, PuzzleContext, PuzzleSpec, SolveOptions,
};
use quintessence::quat::{dist_s3, stereo_derivative, stereographic, UnitQuaternion};
use quintessence::strata::{
    hopf_check, rib_cells, ring_layer_table, rings, southern_cells, Layer, RibType,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(
        elapsed.as_secs_f64() < limit_s,
        format!("{what} took {:.2}s (limit {limit_s}s)", elapsed.as_secs_f64()),
    )
}

fn group_order() -> Outcome {
    let g = generators();
    let start = Instant::now();
    let group = generate_group(g.p, g.q).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, 1.0, "group generation")?;
    ensure(group.len() == 120, format!("{} elements", group.len()))?;
    let near = |x: UnitQuaternion| group.elements().iter().any(|&e| dist_s3(e, x) < 1e-9);
    for &a in group.elements() {
        ensure(near(a.inverse()) && near(a.conj()), "not closed under inverse/conjugate")?;
        for &b in group.elements() {
            ensure(near(a * b), "not closed under product")?;
        }
    }
    Ok(format!("120 elements, closed, {:.3}s", elapsed.as_secs_f64()))
}

fn layer_census_check(group: &BinaryDodecGroup) -> Outcome {
    let nominal = [0.0, PI / 5.0, PI / 3.0, 2.0 * PI / 5.0, PI / 2.0, 3.0 * PI / 5.0, 2.0 * PI / 3.0, 4.0 * PI / 5.0, PI];
    let mut hist = [0usize; 9];
    for &e in group.elements() {
        let k = nominal
            .iter()
            .position(|a| (e.real() - a.cos()).abs() <= 1e-9)
            .ok_or_else(|| format!("Re {} matches no layer", e.real()))?;
        hist[k] += 1;
    }
    ensure(hist == [1, 12, 20, 12, 30, 12, 20, 12, 1], format!("histogram {hist:?}"))?;
    Ok(format!("{hist:?}"))
}

fn complex_counts() -> Result<(Complex120, String), String> {
    let start = Instant::now();
    let c = Complex120::new().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, 5.0, "complex construction")?;
    let counts = (c.cell_count(), c.faces().len(), c.edges().len(), c.vertices().len());
    ensure(counts == (120, 720, 1200, 600), format!("counts {counts:?}"))?;
    for cell in 0..120 {
        let at_spacing = (0..120)
            .filter(|&o| o != cell && (dist_s3(c.center(cell), c.center(o)) - CELL_SPACING).abs() <= 1e-9)
            .count();
        ensure(at_spacing == 12 && c.neighbors(cell).len() == 12, format!("cell {cell} has {at_spacing} neighbors"))?;
    }
    ensure(c.euler_sum() == 0, format!("alternating sum {}", c.euler_sum()))?;
    let msg = format!("{counts:?}, alternating sum 0, {:.3}s", elapsed.as_secs_f64());
    Ok((c, msg))
}

fn voronoi(c: &Complex120) -> Outcome {
    let g = c.group();
    let ids = g.generator_ids();
    let qq = g.element(ids.q).inverse() * g.element(ids.q_prime);
    let want = (PI / 5.0).cos();
    ensure((qq.real() - want).abs() <= 1e-9, format!("Re(q⁻¹q′) = {}", qq.real()))?;
    let t_want = 0.5 * (1.0 + 3.0 * (PI / 5.0).cos()).sqrt();
    let mut worst: f64 = 0.0;
    for &v in c.cell_vertex_ids(0) {
        let re = c.vertex(v).position.real();
        worst = worst.max((re - t_want).abs());
    }
    ensure(worst <= 1e-9, format!("vertex Re off by {worst}"))?;
    ensure(t_want > (PI / 6.0).cos(), "Re(t) does not exceed cos(π/6)")?;
    Ok(format!("Re(t) = {t_want:.9}, max error {worst:.1e}"))
}

fn dihedral(c: &Complex120) -> Outcome {
    let angles = cell_geometry(c, 0).dihedral_angles();
    let worst = angles.iter().map(|a| (a - 2.0 * PI / 3.0).abs()).fold(0.0, f64::max);
    ensure(!angles.is_empty() && worst <= 1e-9, format!("max error {worst}"))?;
    Ok(format!("{} face pairs at 2π/3, max error {worst:.1e}", angles.len()))
}

fn ring_table(c: &Complex120) -> Outcome {
    let r = rings(c).map_err(|e| e.to_string())?;
    let t = ring_layer_table(c, &r).map_err(|e| e.to_string())?;
    let expected: [[usize; 5]; 9] = [
        [1, 0, 0, 0, 0],
        [2, 0, 10, 2, 0],
        [0, 0, 20, 2, 2],
        [2, 0, 10, 0, 2],
        [0, 10, 20, 2, 2],
        [2, 0, 10, 0, 2],
        [0, 0, 20, 2, 2],
        [2, 0, 10, 2, 0],
        [1, 0, 0, 0, 0],
    ];
    ensure(t.rows == expected, format!("rows {:?}", t.rows))?;
    let hopf = hopf_check(c, &r);
    if let Some(f) = hopf.first_failure() {
        return Err(format!("{} measured {}", f.name, f.measured));
    }
    Ok(format!("table matches; {} Hopf checks pass", hopf.checks.len()))
}

fn rib_census(c: &Complex120) -> Outcome {
    use Layer::*;
    let r = rings(c).map_err(|e| e.to_string())?;
    let want: [(RibType, usize, &[(Layer, usize)]); 6] = [
        (RibType::Spine, 5, &[(SouthPole, 1), (Antarctic, 2), (Capricorn, 2)]),
        (RibType::Inner6, 6, &[(Antarctic, 2), (SouthTemperate, 2), (Equatorial, 2)]),
        (RibType::Inner4, 4, &[(Antarctic, 2), (SouthTemperate, 2)]),
        (RibType::Outer6, 6, &[(SouthTemperate, 2), (Capricorn, 2), (Equatorial, 2)]),
        (RibType::Outer4, 4, &[(SouthTemperate, 2), (Capricorn, 2)]),
        (RibType::Equator5, 5, &[(Equatorial, 5)]),
    ];
    for (t, n, hist) in want {
        let rib = rib_cells(c, &r, t);
        ensure(rib.cells.len() == n, format!("{t} has {} cells", rib.cells.len()))?;
        let got: Vec<(Layer, usize)> = rib.layer_histogram(c).into_iter().collect();
        ensure(got == hist, format!("{t} histogram {got:?}"))?;
    }
    let south = southern_cells(c).len();
    ensure(south == 75, format!("southern hemisphere {south}"))?;
    Ok("(5, 6, 4, 6, 4, 5), southern hemisphere 75".into())
}

fn timed_search(ctx: &PuzzleContext, spec: &PuzzleSpec) -> Result<(bool, f64), String> {
    let start = Instant::now();
    let found = is_feasible(ctx, spec, false);
    let s = start.elapsed().as_secs_f64();
    ensure(s < 60.0, format!("{} search took {s:.1}s", spec.name))?;
    Ok((found, s))
}

fn sharpness(ctx: &PuzzleContext) -> Outcome {
    let mut slowest: f64 = 0.0;
    for name in ["Dc24 Star", "Dc36 Pulsar", "Dc75 Meteor"] {
        let spec = find_puzzle(name).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let sols = solve(ctx, &spec, SolveOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let s = start.elapsed().as_secs_f64();
        ensure(s < 60.0, format!("{name} took {s:.1}s"))?;
        ensure(sols.iter().all(|a| a.is_disjoint()), format!("{name}: overlapping assembly"))?;
        slowest = slowest.max(s);
    }
    for t in [RibType::Inner4, RibType::Outer4] {
        let spec = PuzzleSpec::new(format!("7x {t}"), &[(t, 7)]);
        let (found, s) = timed_search(ctx, &spec)?;
        ensure(!found, format!("7x {t} assembled"))?;
        slowest = slowest.max(s);
    }
    let kinds = [RibType::Inner6, RibType::Inner4, RibType::Outer6, RibType::Outer4];
    let mut multisets = 0;
    for a in 0..=11 {
        for b in 0..=11 - a {
            for d in 0..=11 - a - b {
                let e = 11 - a - b - d;
                let counts = [a, b, d, e];
                let ribs: Vec<(RibType, usize)> = kinds.iter().copied().zip(counts).filter(|x| x.1 > 0).collect();
                let spec = PuzzleSpec::new(format!("{counts:?}"), &ribs);
                let (found, s) = timed_search(ctx, &spec)?;
                ensure(!found, format!("11-rib multiset {counts:?} assembled"))?;
                slowest = slowest.max(s);
                multisets += 1;
            }
        }
    }
    Ok(format!(
        "Dc24/Dc36 Pulsar/Dc75 solve; 7x inner4, 7x outer4 and all {multisets} 11-rib multisets infeasible; slowest {slowest:.2}s"
    ))
}

fn catalog_check(ctx: &PuzzleContext) -> Outcome {
    let entries = catalog();
    ensure(entries.len() == 12, format!("{} entries", entries.len()))?;
    let mut variants = 0;
    for spec in &entries {
        spec.validate().map_err(|e| e.to_string())?;
        ensure(is_feasible(ctx, spec, false), format!("{} has no assembly", spec.name))?;
        for v in spec.variant_specs() {
            ensure(is_feasible(ctx, &v, false), format!("variant {} has no assembly", v.name))?;
            variants += 1;
        }
    }
    Ok(format!("12 entries and {variants} variants assemble"))
}

fn meteor_count(ctx: &PuzzleContext) -> Outcome {
    let spec = find_puzzle("Dc45 Meteor").map_err(|e| e.to_string())?;
    let n = count_solutions(ctx, &spec, false);
    let summary = format!(
        "raw {}, up to rotation {}, up to full symmetry {}",
        n.raw, n.up_to_rotation, n.up_to_full_symmetry
    );
    ensure(n.raw >= n.up_to_rotation && n.up_to_rotation >= n.up_to_full_symmetry, summary.clone())?;
    ensure(n.up_to_rotation == 6, summary.clone())?;
    Ok(summary)
}

fn mesh_quality(c: &Complex120) -> Outcome {
    let r = rings(c).map_err(|e| e.to_string())?;
    let params = DesignParams::default();
    let mut slowest: f64 = 0.0;
    for t in RibType::ALL {
        let start = Instant::now();
        let mesh = rib_mesh(c, &rib_cells(c, &r, t), &params).map_err(|e| format!("{t}: {e}"))?;
        let s = start.elapsed().as_secs_f64();
        ensure(s < 10.0, format!("{t} mesh took {s:.1}s"))?;
        slowest = slowest.max(s);
        let rep = check_mesh(&mesh);
        ensure(
            rep.manifold && rep.oriented && rep.degenerate == 0 && rep.bodies == 1,
            format!("{t}: {}", rep.summary()),
        )?;
        if t == RibType::Spine {
            let g = c.group();
            let rot = g.element(g.generator_ids().q).rotation_matrix();
            let worst = max_image_gap(&mesh.vertices, &rot);
            ensure(worst <= 1e-6, format!("spine not invariant: {worst} mm"))?;
        }
    }
    Ok(format!("six ribs closed, oriented, one body each; slowest {slowest:.2}s"))
}

/// Largest distance from a rotated vertex to the nearest original vertex,
/// searched in 0.01 mm buckets.
fn max_image_gap(vs: &[nalgebra::Vector3<f64>], rot: &nalgebra::Matrix3<f64>) -> f64 {
    let h = 1e-2;
    let key = |v: &nalgebra::Vector3<f64>| v.map(|x| (x / h).floor() as i64);
    let mut grid: HashMap<nalgebra::Vector3<i64>, Vec<usize>> = HashMap::new();
    for (i, v) in vs.iter().enumerate() {
        grid.entry(key(v)).or_default().push(i);
    }
    vs.iter()
        .map(|v| {
            let w = rot * v;
            let k = key(&w);
            let mut best = f64::INFINITY;
            for code in 0..27i64 {
                let kk = k + nalgebra::Vector3::new(code % 3 - 1, (code / 3) % 3 - 1, code / 9 - 1);
                for &i in grid.get(&kk).into_iter().flatten() {
                    best = best.min((vs[i] - w).norm());
                }
            }
            best
        })
        .fold(0.0, f64::max)
}

fn projection(group: &BinaryDodecGroup) -> Outcome {
    let zero = stereographic(UnitQuaternion::ONE).map_err(|e| e.to_string())?;
    ensure(zero.norm() == 0.0, "ρ(1) ≠ 0")?;
    for (u, axis) in [(UnitQuaternion::I, 0), (UnitQuaternion::J, 1), (UnitQuaternion::K, 2)] {
        let p = stereographic(u).map_err(|e| e.to_string())?;
        let mut e = nalgebra::Vector3::zeros();
        e[axis] = 1.0;
        ensure(p == e, format!("ρ moves a unit axis to {p:?}"))?;
    }
    let d0 = stereo_derivative(0.0).map_err(|e| e.to_string())?;
    let d1 = stereo_derivative(PI / 2.0).map_err(|e| e.to_string())?;
    ensure(d0 == 0.5 && d1 == 1.0, format!("dρ/dα = {d0}, {d1}"))?;
    let kernel: Vec<usize> = (0..group.len())
        .filter(|&i| (group.element(i).rotation_matrix() - nalgebra::Matrix3::identity()).norm() < 1e-9)
        .collect();
    let id = group.identity();
    let mut want = vec![id, group.neg(id)];
    want.sort();
    ensure(kernel == want, format!("kernel {kernel:?}"))?;
    Ok("ρ(1) = 0, ρ fixes i, j, k, dρ/dα = 0.5 and 1.0, kernel {±1}".into())
}

fn trig() -> Outcome {
    let r = verify_dodeca_trig();
    if let Some(f) = r.first_failure() {
        return Err(format!("{}: measured {} expected {}", f.name, f.measured, f.expected));
    }
    Ok(format!("{} identities hold to 1e-12", r.checks.len()))
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((1, "group order", group_order()));
    let group = BinaryDodecGroup::new().expect("group");
    results.push((2, "layer census", layer_census_check(&group)));
    let complex = match complex_counts() {
        Ok((c, msg)) => {
            results.push((3, "complex counts", Ok(msg)));
            c
        }
        Err(e) => {
            results.push((3, "complex counts", Err(e)));
            Complex120::new().expect("complex")
        }
    };
    results.push((4, "voronoi cross-checks", voronoi(&complex)));
    results.push((5, "dihedral angle", dihedral(&complex)));
    results.push((6, "ring table", ring_table(&complex)));
    results.push((7, "rib census", rib_census(&complex)));
    let ctx = PuzzleContext::new(complex.clone()).expect("puzzle context");
    results.push((8, "rib limits are sharp", sharpness(&ctx)));
    results.push((9, "catalog validation", catalog_check(&ctx)));
    results.push((10, "Dc45 Meteor multiplicity", meteor_count(&ctx)));
    results.push((11, "mesh quality", mesh_quality(&complex)));
    results.push((12, "projection properties", projection(&group)));
    results.push((13, "trig identities", trig()));

    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
