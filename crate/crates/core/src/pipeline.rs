//! The end-to-end realization: validate, embed, place, scale, lift, certify.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use thiserror::Error;

use crate::equilibrium::{substitution_stresses, tutte_interior, EquilibriumError, PlaneEmbedding, SubstitutionStress};
use crate::grid::{apply_scaling, gcd_reduce, scale_factors, GridEmbedding, GridError, ScalingFactors};
use crate::laplacian::{assemble_laplacian, LaplacianError, StressAssignment};
use crate::lifting::{choose_f1, lift, LiftedPolytope, Lifting, LiftingError};
use crate::placement::{BoundaryPlacement, CoordinateBounds, PlacementError, StrategyRegistry};
use crate::planar_map::{choose_outer_face, validate, MapError, OuterFaceSelection, PlanarMap, RawMap};
use crate::verification::{check_realization, generic_theorem_bounds, Certificate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub outer_face: Option<usize>,
    /// Placement strategy name; `None` picks by face size and stresses.
    pub strategy: Option<String>,
    pub reduce: bool,
    pub verify: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            outer_face: None,
            strategy: None,
            reduce: false,
            verify: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Lifting(#[from] LiftingError),
    #[error("NonIntegralDeterminant: det of the reduced Laplacian is {0}")]
    NonIntegralDeterminant(String),
    #[error("CertificateFailed: {}", .0.witnesses.join("; "))]
    CertificateFailed(Box<Certificate>),
}

impl PipelineError {
    /// 1 for rejected input or an unusable request, 2 for a broken invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Map(_) => 1,
            PipelineError::Placement(p) if !p.is_contract_violation() => 1,
            _ => 2,
        }
    }
}

/// A gcd-reduced copy of the realization.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub gx: BigInt,
    pub gy: BigInt,
    pub grid: GridEmbedding,
    pub lifting: Lifting,
    pub polytope: LiftedPolytope,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub map: PlanarMap,
    pub selection: OuterFaceSelection,
    pub det: BigInt,
    /// Substitution stresses in the selection's boundary order.
    pub substitution: SubstitutionStress,
    pub placement: BoundaryPlacement,
    pub plane: PlaneEmbedding,
    pub factors: ScalingFactors,
    pub grid: GridEmbedding,
    pub stress: StressAssignment,
    pub lifting: Lifting,
    pub polytope: LiftedPolytope,
    pub theorem_bounds: CoordinateBounds,
    /// True when the outer face is larger than the smallest face, so the
    /// bounds fall back to the degree-product estimate.
    pub generic_bounds: bool,
    pub certificate: Option<Certificate>,
    pub reduced: Option<Reduced>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl Realization {
    /// The polytope to emit: the reduced one when reduction was requested.
    pub fn output(&self) -> &LiftedPolytope {
        self.reduced.as_ref().map_or(&self.polytope, |r| &r.polytope)
    }

    pub fn output_certificate(&self) -> Option<&Certificate> {
        match &self.reduced {
            Some(r) => r.certificate.as_ref(),
            None => self.certificate.as_ref(),
        }
    }
}

struct Stopwatch {
    last: Instant,
    laps: Vec<(&'static str, Duration)>,
}

impl Stopwatch {
    fn new() -> Self {
        Stopwatch {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.laps.push((stage, now - self.last));
        self.last = now;
    }
}

pub fn realize(raw: &RawMap, opts: &Options) -> Result<Realization, PipelineError> {
    realize_with(&StrategyRegistry::default(), raw, opts)
}

pub fn realize_with(registry: &StrategyRegistry, raw: &RawMap, opts: &Options) -> Result<Realization, PipelineError> {
    let mut clock = Stopwatch::new();
    let map = validate(raw)?;
    let selection = choose_outer_face(&map, opts.outer_face)?;
    clock.lap("validate");

    let interior = StressAssignment::unit_interior(&map, &selection);
    let blocks = assemble_laplacian(&map, &selection, &interior)?;
    let det = blocks
        .det_reduced_integer()
        .ok_or_else(|| PipelineError::NonIntegralDeterminant(blocks.det_reduced.to_string()))?;
    let substitution = substitution_stresses(&blocks)?;
    clock.lap("substitution");

    let placement = registry.classify(&substitution, opts.strategy.as_deref())?;
    let strategy = registry
        .get(placement.strategy)
        .expect("placement names a registered strategy");
    let plane = tutte_interior(&blocks, &placement.coords_in_selection_order())?;
    clock.lap("placement");

    let factors = scale_factors(strategy, &placement.stresses, &det)?;
    let grid = apply_scaling(&plane, &factors, strategy.span_bound(map.n(), &det))?;
    grid.check_spans()?;
    clock.lap("scaling");

    let labels = placement.labelled_vertices(&selection);
    let k = labels.len();
    let mut stress = interior;
    for i in 0..k {
        stress.set(labels[i], labels[(i + 1) % k], placement.boundary_stresses[i].clone());
    }
    let f1 = choose_f1(&map, selection.face, labels[0], labels[1])?;
    let (lifting, polytope) = lift_grid(&map, selection.face, &grid, &stress, f1)?;
    clock.lap("lifting");

    let smallest = (0..map.face_count()).map(|f| map.face(f).len()).min().unwrap_or(k);
    let generic_bounds = k != smallest;
    let theorem_bounds = if generic_bounds {
        generic_theorem_bounds(strategy, map.n())
    } else {
        strategy.theorem_bounds(map.n())
    };

    let certificate = if opts.verify {
        let c = check_realization(&polytope, &map, &theorem_bounds);
        if !c.all_ok() {
            return Err(PipelineError::CertificateFailed(Box::new(c)));
        }
        Some(c)
    } else {
        None
    };
    clock.lap("verify");

    let reduced = if opts.reduce {
        let r = gcd_reduce(&grid);
        let (lifting, polytope) = lift_grid(&map, selection.face, &r.grid, &stress, f1)?;
        let certificate = if opts.verify {
            let c = check_realization(&polytope, &map, &theorem_bounds);
            if !c.all_ok() {
                return Err(PipelineError::CertificateFailed(Box::new(c)));
            }
            Some(c)
        } else {
            None
        };
        clock.lap("reduce");
        Some(Reduced {
            gx: r.gx,
            gy: r.gy,
            grid: r.grid,
            lifting,
            polytope,
            certificate,
        })
    } else {
        None
    };

    Ok(Realization {
        map,
        selection,
        det,
        substitution,
        placement,
        plane,
        factors,
        grid,
        stress,
        lifting,
        polytope,
        theorem_bounds,
        generic_bounds,
        certificate,
        reduced,
        timings: clock.laps,
    })
}

fn lift_grid(
    map: &PlanarMap,
    outer: usize,
    grid: &GridEmbedding,
    stress: &StressAssignment,
    f1: usize,
) -> Result<(Lifting, LiftedPolytope), LiftingError> {
    let coords = grid.as_points();
    let lifting = lift(map, outer, &coords, stress, f1)?;
    let polytope = LiftedPolytope::from_lifting(map, outer, &coords, &lifting, stress.clone())?;
    Ok((lifting, polytope))
}
