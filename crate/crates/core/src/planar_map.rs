//! Combinatorial input: a planar map given by its full list of faces.
//!
//! Faces are cyclic vertex sequences. Every directed edge `(i, j)` must occur in
//! exactly one face, which fixes a consistent orientation of the sphere. The
//! face that contains the dart `(i, j)` is the face to the left of `i -> j`
//! once the map is drawn with its interior faces counterclockwise.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("Parse: {0}")]
    Parse(String),
    #[error("TooFewVertices: a 3-polytope needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("IndexOutOfRange: face {face} references vertex {vertex} but n = {n}")]
    IndexOutOfRange { face: usize, vertex: usize, n: usize },
    #[error("NotSimple: {0}")]
    NotSimple(String),
    #[error("NotClosedSurface: {0}")]
    NotClosedSurface(String),
    #[error("EulerViolation: n - e + f = {n} - {e} + {f} != 2")]
    EulerViolation { n: usize, e: usize, f: usize },
    #[error("NotThreeConnected: {0}")]
    NotThreeConnected(String),
    #[error("FaceOutOfRange: face {face} requested but the map has {count} faces")]
    FaceOutOfRange { face: usize, count: usize },
    #[error("FaceTooLarge: face {face} has {size} vertices; the outer face must have at most 5")]
    FaceTooLarge { face: usize, size: usize },
}

impl MapError {
    /// Short machine-readable name of the rejection.
    pub fn kind(&self) -> &'static str {
        match self {
            MapError::Parse(_) => "Parse",
            MapError::TooFewVertices(_) => "TooFewVertices",
            MapError::IndexOutOfRange { .. } => "IndexOutOfRange",
            MapError::NotSimple(_) => "NotSimple",
            MapError::NotClosedSurface(_) => "NotClosedSurface",
            MapError::EulerViolation { .. } => "EulerViolation",
            MapError::NotThreeConnected(_) => "NotThreeConnected",
            MapError::FaceOutOfRange { .. } => "FaceOutOfRange",
            MapError::FaceTooLarge { .. } => "FaceTooLarge",
        }
    }
}

/// Raw input as read from JSON: `{"vertices": n, "faces": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    pub vertices: usize,
    pub faces: Vec<Vec<usize>>,
}

impl RawMap {
    pub fn new(vertices: usize, faces: Vec<Vec<usize>>) -> Self {
        RawMap { vertices, faces }
    }

    pub fn from_json(text: &str) -> Result<Self, MapError> {
        serde_json::from_str(text).map_err(|e| MapError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("raw map serializes")
    }
}

/// A validated 3-connected planar map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    n: usize,
    faces: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    dart_face: HashMap<(usize, usize), usize>,
}

impl PlanarMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in cyclic order around `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.dart_face.contains_key(&(u, v))
    }

    /// The face whose cycle contains the directed edge `u -> v`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.dart_face.get(&(u, v)).copied()
    }

    pub fn to_raw(&self) -> RawMap {
        RawMap::new(self.n, self.faces.clone())
    }
}

/// Validates raw input and builds the derived structure.
pub fn validate(raw: &RawMap) -> Result<PlanarMap, MapError> {
    let n = raw.vertices;
    if n < 4 {
        return Err(MapError::TooFewVertices(n));
    }
    for (fi, face) in raw.faces.iter().enumerate() {
        if let Some(&v) = face.iter().find(|&&v| v >= n) {
            return Err(MapError::IndexOutOfRange { face: fi, vertex: v, n });
        }
        if face.len() < 3 {
            return Err(MapError::NotSimple(format!(
                "face {fi} has only {} vertices (loop or parallel edge)",
                face.len()
            )));
        }
        let distinct: BTreeSet<_> = face.iter().collect();
        if distinct.len() != face.len() {
            return Err(MapError::NotSimple(format!("face {fi} visits a vertex twice")));
        }
    }

    let mut dart_face = HashMap::new();
    for (fi, face) in raw.faces.iter().enumerate() {
        for (a, b) in cyclic_pairs(face) {
            if let Some(prev) = dart_face.insert((a, b), fi) {
                return Err(MapError::NotClosedSurface(format!(
                    "directed edge ({a},{b}) occurs in faces {prev} and {fi}"
                )));
            }
        }
    }
    for &(a, b) in dart_face.keys() {
        if !dart_face.contains_key(&(b, a)) {
            return Err(MapError::NotClosedSurface(format!(
                "directed edge ({b},{a}) is missing; edge {{{a},{b}}} borders only one face"
            )));
        }
    }

    let mut edges: Vec<(usize, usize)> = dart_face.keys().filter(|(a, b)| a < b).copied().collect();
    edges.sort_unstable();

    // Rotation around each vertex: leaving v along (v, y) inside face f, the next
    // neighbor is found in the face containing the dart (y, v).
    let mut next_in_face = HashMap::new();
    for face in &raw.faces {
        let m = face.len();
        for i in 0..m {
            next_in_face.insert((face[(i + m - 1) % m], face[i]), face[(i + 1) % m]);
        }
    }
    let mut out_degree = vec![0usize; n];
    for &(a, _) in dart_face.keys() {
        out_degree[a] += 1;
    }
    let mut first_out: Vec<Option<usize>> = vec![None; n];
    for &(a, b) in dart_face.keys() {
        first_out[a] = Some(first_out[a].map_or(b, |c: usize| c.min(b)));
    }
    let mut rotation = vec![Vec::new(); n];
    for v in 0..n {
        let Some(start) = first_out[v] else {
            continue;
        };
        let mut cur = start;
        loop {
            rotation[v].push(cur);
            cur = next_in_face[&(cur, v)];
            if cur == start {
                break;
            }
            if rotation[v].len() > out_degree[v] {
                break;
            }
        }
        if rotation[v].len() != out_degree[v] {
            return Err(MapError::NotClosedSurface(format!(
                "the faces around vertex {v} do not form a single disk"
            )));
        }
    }

    let e = edges.len();
    let f = raw.faces.len();
    if n + f != e + 2 {
        return Err(MapError::EulerViolation { n, e, f });
    }

    if let Some(v) = (0..n).find(|&v| rotation[v].len() < 3) {
        return Err(MapError::NotThreeConnected(format!(
            "vertex {v} has degree {}",
            rotation[v].len()
        )));
    }
    if let Some((a, b)) = separating_pair(n, &rotation) {
        let msg = match b {
            Some(b) => format!("removing vertices {a} and {b} disconnects the graph"),
            None if a == usize::MAX => "the graph is disconnected".to_string(),
            None => format!("removing vertex {a} disconnects the graph"),
        };
        return Err(MapError::NotThreeConnected(msg));
    }

    Ok(PlanarMap {
        n,
        faces: raw.faces.clone(),
        edges,
        rotation,
        dart_face,
    })
}

pub(crate) fn cyclic_pairs(face: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let m = face.len();
    (0..m).map(move |i| (face[i], face[(i + 1) % m]))
}

/// Finds a vertex set of size at most two whose removal disconnects the graph.
/// `Some((usize::MAX, None))` means the graph is already disconnected.
fn separating_pair(n: usize, adj: &[Vec<usize>]) -> Option<(usize, Option<usize>)> {
    let mut stamp = vec![0usize; n];
    let mut round = 0usize;
    let mut queue = Vec::with_capacity(n);
    let mut reached = |removed: &[usize], stamp: &mut Vec<usize>, round: usize| -> usize {
        let Some(start) = (0..n).find(|v| !removed.contains(v)) else {
            return 0;
        };
        queue.clear();
        queue.push(start);
        stamp[start] = round;
        let mut count = 1;
        while let Some(v) = queue.pop() {
            for &w in &adj[v] {
                if stamp[w] != round && !removed.contains(&w) {
                    stamp[w] = round;
                    count += 1;
                    queue.push(w);
                }
            }
        }
        count
    };

    round += 1;
    if reached(&[], &mut stamp, round) != n {
        return Some((usize::MAX, None));
    }
    for a in 0..n {
        round += 1;
        if reached(&[a], &mut stamp, round) != n - 1 {
            return Some((a, None));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            round += 1;
            if reached(&[a, b], &mut stamp, round) != n - 2 {
                return Some((a, Some(b)));
            }
        }
    }
    None
}

/// The chosen outer face together with the boundary-first vertex labeling.
///
/// `boundary` lists the outer-face vertices as `p_1, ..., p_k`: the face cycle
/// read backwards, so that with the interior faces drawn counterclockwise the
/// outer polygon is also traversed counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterFaceSelection {
    pub face: usize,
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
    /// `position[v]` is the 0-based label of vertex `v` (boundary first).
    pub position: Vec<usize>,
}

impl OuterFaceSelection {
    pub fn k(&self) -> usize {
        self.boundary.len()
    }

    /// Vertex ids in label order: boundary first, then interior ascending.
    pub fn order(&self) -> Vec<usize> {
        self.boundary.iter().chain(&self.interior).copied().collect()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.position[v] < self.k()
    }

    /// Whether `{u, v}` is an edge of the outer face.
    pub fn is_boundary_edge(&self, u: usize, v: usize) -> bool {
        let k = self.k();
        let (pu, pv) = (self.position[u], self.position[v]);
        if pu >= k || pv >= k {
            return false;
        }
        (pu + 1) % k == pv || (pv + 1) % k == pu
    }

    pub fn for_face(map: &PlanarMap, face: usize) -> Result<Self, MapError> {
        if face >= map.face_count() {
            return Err(MapError::FaceOutOfRange {
                face,
                count: map.face_count(),
            });
        }
        let cycle = map.face(face);
        if cycle.len() > 5 {
            return Err(MapError::FaceTooLarge {
                face,
                size: cycle.len(),
            });
        }
        let mut boundary = vec![cycle[0]];
        boundary.extend(cycle[1..].iter().rev());
        let on_face: BTreeSet<usize> = boundary.iter().copied().collect();
        let interior: Vec<usize> = (0..map.n()).filter(|v| !on_face.contains(v)).collect();
        let mut position = vec![0; map.n()];
        for (label, &v) in boundary.iter().chain(&interior).enumerate() {
            position[v] = label;
        }
        Ok(OuterFaceSelection {
            face,
            boundary,
            interior,
            position,
        })
    }
}

/// Picks the outer face: the smallest face (lowest index on ties) unless overridden.
pub fn choose_outer_face(map: &PlanarMap, override_face: Option<usize>) -> Result<OuterFaceSelection, MapError> {
    let face = match override_face {
        Some(f) => f,
        None => (0..map.face_count())
            .min_by_key(|&f| (map.face(f).len(), f))
            .expect("validated maps have faces"),
    };
    OuterFaceSelection::for_face(map, face)
}

/// True iff the interior vertices induce a connected subgraph.
pub fn interior_connectivity_check(map: &PlanarMap, sel: &OuterFaceSelection) -> bool {
    let Some(&start) = sel.interior.first() else {
        return true;
    };
    let mut seen = vec![false; map.n()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in map.rotation(v) {
            if !seen[w] && !sel.is_boundary(w) {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == sel.interior.len()
}
