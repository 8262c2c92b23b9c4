//! Output formats: OFF, a JSON polytope document, and the run report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::Point3;
use crate::grid::GridEmbedding;
use crate::lifting::{LiftedPolytope, Lifting};
use crate::pipeline::Realization;
use crate::verification::Certificate;
use crate::Rational;

/// Exact `num/den`, also for integers.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// OFF text: header, one line per vertex, one per face in input order.
pub fn emit_off(poly: &LiftedPolytope) -> String {
    let v = poly.vertices.len();
    let f = poly.faces.len();
    let e: usize = poly.faces.iter().map(Vec::len).sum::<usize>() / 2;
    let mut out = String::new();
    out.push_str("OFF\n");
    writeln!(out, "{v} {f} {e}").unwrap();
    for p in &poly.vertices {
        writeln!(out, "{} {} {}", p[0], p[1], p[2]).unwrap();
    }
    for face in &poly.faces {
        out.push_str(&face.len().to_string());
        for i in face {
            write!(out, " {i}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("Parse: {0}")]
    Json(#[from] serde_json::Error),
    #[error("Parse: vertex {vertex} coordinate {value:?} is not an integer")]
    BadInteger { vertex: usize, value: String },
}

/// The polytope as JSON; coordinates are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub vertices: Vec<[String; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub outer_face: usize,
}

impl PolytopeDocument {
    pub fn from_polytope(poly: &LiftedPolytope) -> Self {
        PolytopeDocument {
            vertices: poly
                .vertices
                .iter()
                .map(|p| [p[0].to_string(), p[1].to_string(), p[2].to_string()])
                .collect(),
            faces: poly.faces.clone(),
            outer_face: poly.outer_face,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn points(&self) -> Result<Vec<Point3>, DocumentError> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(v, c)| {
                let mut out: [BigInt; 3] = Default::default();
                for (slot, s) in out.iter_mut().zip(c) {
                    *slot = s.parse().map_err(|_| DocumentError::BadInteger {
                        vertex: v,
                        value: s.clone(),
                    })?;
                }
                Ok(out)
            })
            .collect()
    }
}

pub fn emit_json(poly: &LiftedPolytope) -> String {
    PolytopeDocument::from_polytope(poly).to_json()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranges {
    pub delta_x: String,
    pub delta_y: String,
    pub z_min: String,
    pub z_max: String,
}

impl Ranges {
    fn of(poly: &LiftedPolytope) -> Self {
        let spans = crate::verification::spans(poly);
        let z_min = poly.vertices.iter().map(|p| p[2].clone()).min().unwrap_or_default();
        Ranges {
            delta_x: spans[0].to_string(),
            delta_y: spans[1].to_string(),
            z_min: z_min.to_string(),
            z_max: poly.max_height().to_string(),
        }
    }
}

/// Grid coordinates before translation and heights before normalisation
/// (the start face at zero, all others below).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Untranslated {
    pub coordinates: Vec<[String; 2]>,
    pub heights: Vec<String>,
}

impl Untranslated {
    fn of(grid: &GridEmbedding, lifting: &Lifting) -> Self {
        Untranslated {
            coordinates: grid.raw.iter().map(|p| [p[0].to_string(), p[1].to_string()]).collect(),
            heights: lifting.raw_heights.iter().map(rational_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedReport {
    pub gx: String,
    pub gy: String,
    pub ranges: Ranges,
    pub untranslated: Untranslated,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub input_sha256: String,
    pub vertices: usize,
    pub outer_face: usize,
    /// Vertex ids of `p_1..p_k`.
    pub boundary: Vec<usize>,
    pub relabeling: Vec<usize>,
    pub reflected: bool,
    pub case_type: String,
    pub strategy: String,
    pub det_reduced_laplacian: String,
    /// Substitution stresses under the chosen relabeling, `k x k`.
    pub substitution_stresses: Vec<Vec<String>>,
    pub boundary_coordinates: Vec<[String; 2]>,
    pub boundary_edge_stresses: Vec<String>,
    pub derived: BTreeMap<String, String>,
    pub s_x: String,
    pub s_y: String,
    pub span_bound_x: String,
    pub span_bound_y: String,
    pub theorem_bounds: [String; 3],
    pub generic_bounds: bool,
    pub ranges: Ranges,
    pub untranslated: Untranslated,
    pub certificate: Option<Certificate>,
    pub reduced: Option<ReducedReport>,
    /// Wall-clock microseconds per stage; the only nondeterministic field.
    pub timings_us: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn new(input: &[u8], r: &Realization) -> Self {
        let p = &r.placement;
        let k = p.stresses.k();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| rational_string(p.stresses.get(i, j))).collect())
            .collect();
        let b = &r.theorem_bounds;
        RunReport {
            input_sha256: sha256_hex(input),
            vertices: r.map.n(),
            outer_face: r.selection.face,
            boundary: p.labelled_vertices(&r.selection),
            relabeling: p.relabel.perm.clone(),
            reflected: p.relabel.reflected,
            case_type: p.case_type.label().to_string(),
            strategy: p.strategy.to_string(),
            det_reduced_laplacian: r.det.to_string(),
            substitution_stresses: matrix,
            boundary_coordinates: p
                .coords
                .iter()
                .map(|c| [rational_string(&c.x), rational_string(&c.y)])
                .collect(),
            boundary_edge_stresses: p.boundary_stresses.iter().map(rational_string).collect(),
            derived: p
                .derived
                .iter()
                .map(|(name, v)| (name.to_string(), rational_string(v)))
                .collect(),
            s_x: r.factors.sx.to_string(),
            s_y: r.factors.sy.to_string(),
            span_bound_x: r.grid.bound_dx.to_string(),
            span_bound_y: r.grid.bound_dy.to_string(),
            theorem_bounds: [rational_string(&b.x), rational_string(&b.y), rational_string(&b.z)],
            generic_bounds: r.generic_bounds,
            ranges: Ranges::of(&r.polytope),
            untranslated: Untranslated::of(&r.grid, &r.lifting),
            certificate: r.certificate.clone(),
            reduced: r.reduced.as_ref().map(|red| ReducedReport {
                gx: red.gx.to_string(),
                gy: red.gy.to_string(),
                ranges: Ranges::of(&red.polytope),
                untranslated: Untranslated::of(&red.grid, &red.lifting),
                certificate: red.certificate.clone(),
            }),
            timings_us: r
                .timings
                .iter()
                .map(|(stage, d)| (stage.to_string(), d.as_micros() as u64))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
