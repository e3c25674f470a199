//! Frozen results of exhaustive searches over the pole-fixing rotations.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use quintessence::cell120::Complex120;
use quintessence::puzzle::*;
use quintessence::strata::{Layer, RibType};

fn ctx() -> &'static PuzzleContext {
    static C: OnceLock<PuzzleContext> = OnceLock::new();
    C.get_or_init(|| PuzzleContext::new(Complex120::new().unwrap()).unwrap())
}

fn counts(name: &str) -> (usize, usize, usize) {
    let n = count_solutions(ctx(), &find_puzzle(name).unwrap(), false);
    (n.raw, n.up_to_rotation, n.up_to_full_symmetry)
}

#[test]
fn placement_counts() {
    let want = [
        (RibType::Spine, 6, 6),
        (RibType::Inner6, 30, 30),
        (RibType::Inner4, 30, 30),
        (RibType::Outer6, 30, 30),
        (RibType::Outer4, 30, 30),
        (RibType::Equator5, 60, 60),
    ];
    for (t, rot, full) in want {
        assert_eq!(placements(ctx(), t, false).len(), rot, "{t}");
        assert_eq!(placements(ctx(), t, true).len(), full, "{t}");
    }
}

#[test]
fn placements_preserve_layers() {
    let c = ctx();
    for t in RibType::ALL {
        let want = c.layer_usage(&c.canonical_rib(t).cells);
        for p in placements(c, t, true) {
            assert_eq!(c.layer_usage(&p.cells), want, "{t}");
            assert_eq!(p.cells.len(), t.cell_count());
        }
    }
    for p in placements(c, RibType::Inner6, false) {
        assert_eq!(p.cells.iter().filter(|&&x| c.layer(x) == Layer::Antarctic).count(), 2);
    }
    assert!(placements(c, RibType::Spine, false).iter().all(|p| p.cells.contains(&0)));
}

#[test]
fn mirrored_ribs_never_coincide_with_rotated_ones() {
    for a in [RibType::Inner6, RibType::Inner4] {
        for b in [RibType::Outer6, RibType::Outer4] {
            assert!(!mirror_meets(ctx(), a, b));
            assert!(!mirror_meets(ctx(), b, a));
        }
    }
}

#[test]
fn frozen_counts() {
    assert_eq!(counts("Dc30 Ring"), (192, 6, 3));
    assert_eq!(counts("Dc30 Star"), (440, 10, 5));
    assert_eq!(counts("Dc30 Comet"), (192, 6, 3));
    assert_eq!(counts("Dc36 Pulsar"), (20, 2, 1));
    assert_eq!(counts("Dc42 Alien"), (20, 2, 1));
    assert_eq!(counts("Dc45 Meteor"), (84, 6, 3));
    assert_eq!(counts("Dc75 Meteor"), (420, 10, 5));
    assert_eq!(counts("Dc24 Star"), (5, 1, 1));
}

#[test]
fn orbit_counting_is_monotone() {
    for spec in catalog().iter().filter(|s| s.cells <= 45) {
        let n = count_solutions(ctx(), spec, false);
        assert!(n.raw >= n.up_to_rotation && n.up_to_rotation >= n.up_to_full_symmetry, "{}", spec.name);
        assert!(n.up_to_rotation >= 1, "{}", spec.name);
    }
}

#[test]
fn meteor_orbits() {
    let classes = orbit_classes(ctx(), &find_puzzle("Dc45 Meteor").unwrap(), false);
    let sizes: Vec<(usize, usize)> = classes.iter().map(|c| (c.orbit_size, c.rotation_stabilizer)).collect();
    assert_eq!(sizes, vec![(6, 10), (6, 10), (30, 2), (6, 10), (6, 10), (30, 2)]);
    for c in &classes {
        assert_eq!(c.orbit_size * c.rotation_stabilizer, 60);
    }
}

type Key = Vec<(RibType, Vec<usize>)>;

fn key(sets: &[[usize; 4]]) -> Key {
    sets.iter().map(|s| (RibType::Inner4, s.to_vec())).collect()
}

#[test]
fn star_and_pulsar_are_told_apart_by_symmetry() {
    let star = key(&[
        [1, 2, 46, 63],
        [35, 47, 59, 76],
        [48, 49, 54, 56],
        [52, 58, 61, 79],
        [53, 60, 65, 80],
        [62, 64, 74, 78],
    ]);
    let pulsars = [
        key(&[[1, 2, 46, 63], [35, 48, 61, 77], [47, 49, 52, 57], [53, 60, 65, 80], [54, 58, 59, 75], [62, 64, 74, 78]]),
        key(&[[1, 2, 46, 63], [35, 49, 65, 81], [47, 48, 53, 55], [52, 58, 61, 79], [56, 59, 60, 73], [62, 64, 74, 78]]),
    ];
    let c = ctx();
    let spec = PuzzleSpec::new("6x inner4", &[(RibType::Inner4, 6)]);
    let classes = orbit_classes(c, &spec, false);
    let reps: Vec<&Key> = classes.iter().map(|k| &k.representative).collect();
    assert_eq!(classes.len(), 3);
    assert!(reps.contains(&&star));
    for p in &pulsars {
        assert!(reps.contains(&p));
    }
    assert_eq!(assembly_stabilizer(c.rotations(), &star), 12);
    assert_eq!(max_substitutions(c, &star, RibType::Inner4, RibType::Inner6), 3);
    for p in &pulsars {
        assert_eq!(assembly_stabilizer(c.rotations(), p), 6);
        assert_eq!(canonical_key(p, c.rotations()), *p);
    }
    // the two trigonal classes are mirror images
    assert_eq!(canonical_key(&pulsars[0], c.symmetries()), canonical_key(&pulsars[1], c.symmetries()));
}

#[test]
fn solutions_are_sound() {
    let c = ctx();
    for name in ["Dc29 Space Invader", "Dc45 Meteor", "Dc50 Galaxy", "Dc75 Meteor"] {
        let spec = find_puzzle(name).unwrap();
        let opts = SolveOptions {
            max_solutions: Some(5),
            ..SolveOptions::default()
        };
        let cap = c.layer_capacity();
        for a in solve(c, &spec, opts).unwrap() {
            assert!(a.is_disjoint());
            assert_eq!(a.cells().len(), spec.cells);
            let mut used: BTreeMap<RibType, usize> = BTreeMap::new();
            for p in &a.placements {
                *used.entry(p.rib_type).or_insert(0) += 1;
                let allowed = placements(c, p.rib_type, false);
                assert!(allowed.iter().any(|q| q.cells == p.cells), "{name}");
            }
            assert_eq!(used, spec.ribs);
            let usage = c.layer_usage(&a.cells());
            assert!(usage.iter().zip(cap).all(|(u, k)| *u <= k));
        }
    }
    let meteor = solve(c, &find_puzzle("Dc45 Meteor").unwrap(), SolveOptions::default()).unwrap();
    assert!(meteor[0].cells().contains(&0));
}

#[test]
fn solving_is_deterministic() {
    let spec = find_puzzle("Dc30 Star").unwrap();
    let opts = SolveOptions {
        max_solutions: None,
        ..SolveOptions::default()
    };
    let a = solve(ctx(), &spec, opts).unwrap();
    let b = solve(ctx(), &spec, opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn limits_and_search_agree() {
    let c = ctx();
    for (t, k) in [(RibType::Inner4, 7), (RibType::Outer4, 7), (RibType::Inner6, 7)] {
        let spec = PuzzleSpec::new("over", &[(t, k)]);
        assert!(!check_rib_limits(&spec).ok());
        assert!(matches!(solve(c, &spec, SolveOptions::default()), Err(PuzzleError::Infeasible(_))));
    }
    let spec = PuzzleSpec::new("mixed", &[(RibType::Inner6, 5), (RibType::Outer6, 5)]);
    assert!(check_rib_limits(&spec).ok());
    assert!(is_feasible(c, &spec, false));
}

#[test]
fn spec_round_trips_through_json() {
    for spec in catalog() {
        let text = serde_json::to_string(&spec).unwrap();
        let back: PuzzleSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
