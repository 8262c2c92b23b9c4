//! Test and demo inputs: classical polytopes and seeded random 3-connected maps.
//!
//! Random maps are grown from a seed polytope with three moves that keep a
//! planar map 3-connected: stacking a vertex into a face, splitting a vertex of
//! degree at least four, and adding a diagonal inside a face of size at least
//! four. Restricting the moves lets the generator keep the smallest face size
//! fixed, which is how maps without triangles (or without quadrilaterals) are
//! produced.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::planar_map::{cyclic_pairs, RawMap};

pub fn tetrahedron() -> RawMap {
    RawMap::new(4, vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![2, 3, 0]])
}

pub fn cube() -> RawMap {
    prism(4)
}

/// Prism over a `k`-gon: bottom `0..k`, top `k..2k`.
pub fn prism(k: usize) -> RawMap {
    assert!(k >= 3);
    let mut faces = vec![bottom_cycle(0, k), (k..2 * k).collect()];
    for i in 0..k {
        let j = (i + 1) % k;
        faces.push(vec![i, j, k + j, k + i]);
    }
    RawMap::new(2 * k, faces)
}

/// Antiprism over a `k`-gon.
pub fn antiprism(k: usize) -> RawMap {
    assert!(k >= 3);
    let mut faces = vec![bottom_cycle(0, k), (k..2 * k).collect()];
    for i in 0..k {
        let j = (i + 1) % k;
        faces.push(vec![i, j, k + i]);
        faces.push(vec![j, k + j, k + i]);
    }
    RawMap::new(2 * k, faces)
}

/// Two `k`-gons joined by a band of `2k` pentagons; `barrel(5)` is the dodecahedron.
pub fn barrel(k: usize) -> RawMap {
    assert!(k >= 3);
    let a = |i: usize| i % k;
    let b = |i: usize| k + i % k;
    let c = |i: usize| 2 * k + i % k;
    let d = |i: usize| 3 * k + i % k;
    let mut faces = vec![(0..k).collect::<Vec<_>>()];
    for i in 0..k {
        faces.push(vec![a(i + 1), a(i), b(i), c(i), b(i + 1)]);
        faces.push(vec![b(i + 1), c(i), d(i), d(i + 1), c(i + 1)]);
    }
    faces.push(bottom_cycle(3 * k, k));
    RawMap::new(4 * k, faces)
}

pub fn dodecahedron() -> RawMap {
    barrel(5)
}

/// Trapezohedron over a `k`-gon (the dual of the antiprism): all faces are quadrilaterals.
pub fn trapezohedron(k: usize) -> RawMap {
    dual(&antiprism(k))
}

/// Index of the outer triangle `{1, 2, 3}` in [`seven_vertex`].
pub const SEVEN_VERTEX_OUTER_FACE: usize = 0;

/// The seven-vertex example graph with outer triangle `{0, 1, 2}` and interior
/// `{3, 4, 5, 6}`.
pub fn seven_vertex() -> RawMap {
    RawMap::new(
        7,
        vec![
            vec![0, 2, 1],
            vec![0, 1, 4],
            vec![0, 4, 3],
            vec![1, 6, 4],
            vec![1, 2, 6],
            vec![2, 5, 6],
            vec![0, 3, 5, 2],
            vec![3, 4, 6, 5],
        ],
    )
}

/// A closed planar map with a separating vertex pair `{0, 1}`.
pub fn two_connected_example() -> RawMap {
    RawMap::new(
        6,
        vec![
            vec![0, 1, 4],
            vec![4, 1, 5],
            vec![0, 4, 5],
            vec![0, 5, 1, 2],
            vec![0, 3, 1],
            vec![1, 3, 2],
            vec![2, 3, 0],
        ],
    )
}

fn bottom_cycle(offset: usize, k: usize) -> Vec<usize> {
    std::iter::once(offset)
        .chain((1..k).rev().map(|i| offset + i))
        .collect()
}

/// Dual map: one vertex per face, one face per vertex.
pub fn dual(raw: &RawMap) -> RawMap {
    use std::collections::HashMap;
    let mut dart_face = HashMap::new();
    let mut next_in_face = HashMap::new();
    for (fi, face) in raw.faces.iter().enumerate() {
        let m = face.len();
        for i in 0..m {
            dart_face.insert((face[i], face[(i + 1) % m]), fi);
            next_in_face.insert((face[(i + m - 1) % m], face[i]), face[(i + 1) % m]);
        }
    }
    let mut faces = Vec::with_capacity(raw.vertices);
    for v in 0..raw.vertices {
        let start = *dart_face
            .keys()
            .filter(|(a, _)| *a == v)
            .map(|(_, b)| b)
            .min()
            .expect("vertex without edges");
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            // The face to the left of v -> cur lies between cur and the next neighbor.
            cycle.push(dart_face[&(v, cur)]);
            cur = next_in_face[&(cur, v)];
            if cur == start {
                break;
            }
        }
        cycle.reverse();
        faces.push(cycle);
    }
    RawMap::new(raw.faces.len(), faces)
}

/// Which growth moves a random generator may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Growth {
    /// Smallest face size the generator must preserve (3, 4 or 5).
    pub min_face: usize,
}

/// Grows `seed` by random 3-connectivity-preserving moves until it has at least
/// `target` vertices (or no move applies). Deterministic in `rng_seed`.
pub fn random_map(seed: &RawMap, target: usize, growth: Growth, rng_seed: u64) -> RawMap {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut map = seed.clone();
    let mut stalled = 0;
    while map.vertices < target && stalled < 64 {
        let grew = match rng.gen_range(0..3) {
            0 if growth.min_face <= 3 => stack(&mut map, &mut rng),
            1 => split_vertex(&mut map, growth.min_face, &mut rng),
            _ => add_diagonal(&mut map, growth.min_face, &mut rng),
        };
        stalled = if grew { 0 } else { stalled + 1 };
    }
    map
}

/// Random maps containing triangles, grown from the tetrahedron.
pub fn random_triangle_map(target: usize, rng_seed: u64) -> RawMap {
    random_map(&tetrahedron(), target, Growth { min_face: 3 }, rng_seed)
}

/// Random maps whose smallest face is a quadrilateral.
pub fn random_quad_map(target: usize, rng_seed: u64) -> RawMap {
    let seed = if rng_seed.is_multiple_of(2) {
        prism(6)
    } else {
        trapezohedron(4 + (rng_seed as usize / 2) % 3)
    };
    random_map(&seed, target, Growth { min_face: 4 }, rng_seed)
}

/// Random maps whose smallest face is a pentagon.
pub fn random_pentagon_map(target: usize, rng_seed: u64) -> RawMap {
    random_map(&barrel(8), target, Growth { min_face: 5 }, rng_seed)
}

fn stack(map: &mut RawMap, rng: &mut impl Rng) -> bool {
    let fi = rng.gen_range(0..map.faces.len());
    let face = map.faces.swap_remove(fi);
    let v = map.vertices;
    map.vertices += 1;
    for (a, b) in cyclic_pairs(&face) {
        map.faces.push(vec![a, b, v]);
    }
    true
}

fn add_diagonal(map: &mut RawMap, min_face: usize, rng: &mut impl Rng) -> bool {
    let candidates: Vec<usize> = (0..map.faces.len())
        .filter(|&f| map.faces[f].len() >= 2 * min_face - 2)
        .collect();
    let Some(&fi) = candidates.choose(rng) else {
        return false;
    };
    let face = map.faces[fi].clone();
    let m = face.len();
    // Both parts of the split face keep at least `min_face` vertices.
    let i = rng.gen_range(0..m);
    let gap = rng.gen_range(min_face - 1..=m - min_face + 1);
    let j = (i + gap) % m;
    let first: Vec<usize> = (0..=gap).map(|t| face[(i + t) % m]).collect();
    let second: Vec<usize> = (0..=m - gap).map(|t| face[(j + t) % m]).collect();
    map.faces[fi] = first;
    map.faces.push(second);
    true
}

fn split_vertex(map: &mut RawMap, min_face: usize, rng: &mut impl Rng) -> bool {
    let _ = min_face; // splitting only enlarges faces
    let rotations = rotations(map);
    let candidates: Vec<usize> = (0..map.vertices).filter(|&v| rotations[v].len() >= 4).collect();
    let Some(&v) = candidates.choose(rng) else {
        return false;
    };
    let rot = &rotations[v];
    let d = rot.len();
    // v keeps neighbors rot[a+1..=b], the new vertex gets the rest; both keep >= 2.
    let a = rng.gen_range(0..d);
    let len = rng.gen_range(2..=d - 2);
    let keep: Vec<usize> = (1..=len).map(|t| rot[(a + t) % d]).collect();
    let w = map.vertices;
    map.vertices += 1;
    let owner = |u: usize| if keep.contains(&u) { v } else { w };
    for face in map.faces.iter_mut() {
        let Some(pos) = face.iter().position(|&x| x == v) else {
            continue;
        };
        let m = face.len();
        let prev = face[(pos + m - 1) % m];
        let next = face[(pos + 1) % m];
        let (op, on) = (owner(prev), owner(next));
        if op == on {
            face[pos] = op;
        } else {
            face[pos] = op;
            face.insert(pos + 1, on);
        }
    }
    true
}

fn rotations(map: &RawMap) -> Vec<Vec<usize>> {
    use std::collections::HashMap;
    let mut next_in_face = HashMap::new();
    let mut first: Vec<Option<usize>> = vec![None; map.vertices];
    for face in &map.faces {
        let m = face.len();
        for i in 0..m {
            next_in_face.insert((face[(i + m - 1) % m], face[i]), face[(i + 1) % m]);
            let (a, b) = (face[i], face[(i + 1) % m]);
            first[a] = Some(first[a].map_or(b, |c| c.min(b)));
        }
    }
    (0..map.vertices)
        .map(|v| {
            let Some(start) = first[v] else {
                return Vec::new();
            };
            let mut out = vec![start];
            let mut cur = next_in_face[&(start, v)];
            while cur != start {
                out.push(cur);
                cur = next_in_face[&(cur, v)];
            }
            out
        })
        .collect()
}

/// The named small polytopes used throughout the tests.
pub fn named() -> Vec<(&'static str, RawMap)> {
    vec![
        ("tetrahedron", tetrahedron()),
        ("cube", cube()),
        ("triangular-prism", prism(3)),
        ("pentagonal-prism", prism(5)),
        ("hexagonal-prism", prism(6)),
        ("octahedron", antiprism(3)),
        ("square-antiprism", antiprism(4)),
        ("pentagonal-antiprism", antiprism(5)),
        ("trapezohedron-4", trapezohedron(4)),
        ("trapezohedron-5", trapezohedron(5)),
        ("seven-vertex", seven_vertex()),
        ("dodecahedron", dodecahedron()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::validate;

    #[test]
    fn named_maps_validate() {
        for (name, raw) in named() {
            validate(&raw).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        for k in 5..=10 {
            validate(&barrel(k)).unwrap();
        }
    }

    #[test]
    fn dual_of_cube_is_octahedron() {
        let oct = validate(&dual(&cube())).unwrap();
        assert_eq!(oct.n(), 6);
        assert!(oct.faces().iter().all(|f| f.len() == 3));
        assert!((0..6).all(|v| oct.degree(v) == 4));
    }

    #[test]
    fn random_maps_are_valid_and_keep_face_sizes() {
        for seed in 0..20 {
            let t = random_triangle_map(8 + seed as usize, seed);
            validate(&t).unwrap();
            let q = random_quad_map(16, seed);
            let qm = validate(&q).unwrap();
            assert!(qm.faces().iter().all(|f| f.len() >= 4));
            let p = random_pentagon_map(38, seed);
            let pm = validate(&p).unwrap();
            assert!(pm.faces().iter().all(|f| f.len() >= 5));
        }
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_triangle_map(20, 7), random_triangle_map(20, 7));
    }
}
