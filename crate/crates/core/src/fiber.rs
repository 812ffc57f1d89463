//! The A'Campo fiber of an admissible divide as a ribbon surface, its ordered
//! vanishing cycles and the monodromy word.
//!
//! The fiber is stored as a trivalent ribbon graph. Every dart `d` of the
//! divide gives one ribbon vertex where the band of `d` meets the roundabout
//! of `d`'s double point; its three ribbon darts are the band `3d`, the
//! roundabout arc toward the counterclockwise neighbour `3d + 1` and the arc
//! toward the clockwise neighbour `3d + 2`. Bands alternate between the outer
//! and inner side of each roundabout: a band lies outside when the corner
//! counterclockwise after it is black. A boundary component entering a
//! roundabout therefore leaves through the opposite band, so it follows a
//! circle of the divide in one direction.
//!
//! A divide without double points (one embedded circle) has the annulus as
//! fiber, stored as a single vertex with one loop.

use serde::Serialize;
use thiserror::Error;

use crate::divide::{Color, Coloring, Divide, DivideError};
use crate::map::{Dart, HalfEdgeMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("coloring does not belong to this divide")]
    ColoringMismatch,
    #[error("cycle is not a closed walk on this fiber")]
    BasisMismatch,
    #[error("integer overflow in homological monodromy")]
    Overflow,
}

/// A closed walk on the ribbon graph: each dart is traversed from its vertex
/// to the vertex of its partner, and the next dart leaves from there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle(pub Vec<Dart>);

impl Cycle {
    pub fn darts(&self) -> &[Dart] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_closed_walk_on(&self, ribbon: &HalfEdgeMap) -> bool {
        let n = ribbon.dart_count();
        if self.0.is_empty() || self.0.iter().any(|&d| d >= n) {
            return false;
        }
        let k = self.0.len();
        (0..k).all(|i| {
            let here = ribbon.pair(self.0[i]);
            ribbon.vertex_of(here) == ribbon.vertex_of(self.0[(i + 1) % k])
        })
    }
}

/// Annulus around one double point, in the counterclockwise order of the
/// divide darts attached to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roundabout {
    pub double_point: usize,
    pub darts: [Dart; 4],
}

/// Band along one edge of the divide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    /// The two divide darts of the edge, smaller first.
    pub ends: (Dart, Dart),
    /// Whether the band leaves each end on the outer side of its roundabout.
    pub outer: (bool, bool),
}

#[derive(Debug, Clone)]
pub struct FiberComplex {
    ribbon: HalfEdgeMap,
    divide_map: HalfEdgeMap,
    coloring: Coloring,
    roundabouts: Vec<Roundabout>,
    bands: Vec<Band>,
    boundary: Vec<Vec<Dart>>,
}

pub fn build_fiber(divide: &Divide, coloring: &Coloring) -> Result<FiberComplex, FiberError> {
    divide.require_admissible()?;
    let map = divide.map();
    let n = map.dart_count();
    let face_darts: usize = coloring.faces().iter().map(Vec::len).sum();
    if face_darts != n || coloring.faces().len() != map.face_count() + 2 * divide.free_loops() {
        return Err(FiberError::ColoringMismatch);
    }
    for d in 0..n {
        if coloring.face_color(d) == coloring.face_color(map.pair(d)) {
            return Err(FiberError::ColoringMismatch);
        }
    }

    if n == 0 {
        let ribbon = HalfEdgeMap::new(vec![vec![0, 1]], vec![1, 0]).expect("loop map");
        let boundary = ribbon.faces();
        return Ok(FiberComplex {
            ribbon,
            divide_map: map.clone(),
            coloring: coloring.clone(),
            roundabouts: Vec::new(),
            bands: Vec::new(),
            boundary,
        });
    }

    let outer = |d: Dart| corner_color(map, coloring, d) == Color::Black;
    let mut rotations = Vec::with_capacity(n);
    let mut pairing = vec![0; 3 * n];
    for d in 0..n {
        let (band, ccw, cw) = (3 * d, 3 * d + 1, 3 * d + 2);
        rotations.push(if outer(d) {
            vec![band, ccw, cw]
        } else {
            vec![band, cw, ccw]
        });
        pairing[band] = 3 * map.pair(d);
        let s = map.next(d);
        pairing[ccw] = 3 * s + 2;
        pairing[3 * s + 2] = ccw;
    }
    let ribbon = HalfEdgeMap::new(rotations, pairing).expect("ribbon graph is well formed");
    let roundabouts = map
        .rotations()
        .iter()
        .enumerate()
        .map(|(x, rot)| Roundabout {
            double_point: x,
            darts: [rot[0], rot[1], rot[2], rot[3]],
        })
        .collect();
    let bands = (0..n)
        .filter(|&d| d < map.pair(d))
        .map(|d| {
            let e = map.pair(d);
            Band {
                ends: (d, e),
                outer: (outer(d), outer(e)),
            }
        })
        .collect();
    let boundary = ribbon.faces();
    Ok(FiberComplex {
        ribbon,
        divide_map: map.clone(),
        coloring: coloring.clone(),
        roundabouts,
        bands,
        boundary,
    })
}

/// Color of the corner between `d` and its counterclockwise successor.
fn corner_color(map: &HalfEdgeMap, coloring: &Coloring, d: Dart) -> Color {
    // the face through that corner continues with next(d)
    coloring.face_color(map.next(d))
}

impl FiberComplex {
    pub fn ribbon(&self) -> &HalfEdgeMap {
        &self.ribbon
    }

    pub fn roundabouts(&self) -> &[Roundabout] {
        &self.roundabouts
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    /// Boundary components as ribbon face cycles.
    pub fn boundary_cycles(&self) -> &[Vec<Dart>] {
        &self.boundary
    }

    /// V - E of the ribbon graph.
    pub fn euler_characteristic(&self) -> i64 {
        self.ribbon.vertex_count() as i64 - self.ribbon.edge_count() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic() - self.boundary.len() as i64) / 2
    }

    /// Rank of the first homology, `1 - chi`.
    pub fn first_betti(&self) -> usize {
        (1 - self.euler_characteristic()) as usize
    }

    /// Ribbon walk of the roundabout core at double point `x`,
    /// counterclockwise.
    fn roundabout_core(&self, x: usize) -> Cycle {
        Cycle(self.divide_map.rotation(x).iter().map(|&d| 3 * d + 1).collect())
    }

    /// Ribbon walk following the boundary of a face of the divide: along the
    /// band of each face dart, then through the corner to the next one.
    fn face_curve(&self, face: &[Dart]) -> Cycle {
        if face.is_empty() {
            return Cycle(vec![0]);
        }
        let walk = face
            .iter()
            .flat_map(|&d| [3 * d, 3 * self.divide_map.pair(d) + 1])
            .collect();
        Cycle(walk)
    }

    /// The ordered vanishing cycles: one per white region, one per double
    /// point and one per black region.
    pub fn vanishing_cycles(&self) -> VanishingCycleSet {
        let faces = self.coloring.faces();
        let of_color = |c: Color| {
            self.coloring
                .faces_of_color(c)
                .into_iter()
                .map(|f| VanishingCycle {
                    source: f,
                    cycle: self.face_curve(&faces[f]),
                })
                .collect::<Vec<_>>()
        };
        let betas = (0..self.roundabouts.len())
            .map(|x| VanishingCycle {
                source: x,
                cycle: self.roundabout_core(x),
            })
            .collect();
        VanishingCycleSet {
            alphas: of_color(Color::White),
            betas,
            gammas: of_color(Color::Black),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CycleFamily {
    Alpha,
    Beta,
    Gamma,
}

/// A vanishing cycle and the region (for alphas and gammas) or double point
/// (for betas) it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingCycle {
    pub source: usize,
    pub cycle: Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingCycleSet {
    pub alphas: Vec<VanishingCycle>,
    pub betas: Vec<VanishingCycle>,
    pub gammas: Vec<VanishingCycle>,
}

impl VanishingCycleSet {
    /// `(m0, m1, m2)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.alphas.len(), self.betas.len(), self.gammas.len())
    }

    pub fn len(&self) -> usize {
        self.alphas.len() + self.betas.len() + self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Alphas, then betas, then gammas, labelled with their family and index.
    pub fn ordered<'a>(&'a self) -> impl Iterator<Item = (CycleFamily, usize, &'a Cycle)> {
        let tag = |fam: CycleFamily, list: &'a [VanishingCycle]| {
            list.iter().enumerate().map(move |(i, c)| (fam, i, &c.cycle))
        };
        tag(CycleFamily::Alpha, &self.alphas)
            .chain(tag(CycleFamily::Beta, &self.betas))
            .chain(tag(CycleFamily::Gamma, &self.gammas))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Twist {
    pub family: CycleFamily,
    pub index: usize,
    pub positive: bool,
    pub cycle: Cycle,
}

/// Product of Dehn twists along the ordered vanishing cycles, first twist
/// applied first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyWord {
    pub twists: Vec<Twist>,
}

impl MonodromyWord {
    /// Positive twists along `cycles` in their canonical order.
    pub fn from_cycles(cycles: &VanishingCycleSet) -> Self {
        let twists = cycles
            .ordered()
            .map(|(family, index, cycle)| Twist {
                family,
                index,
                positive: true,
                cycle: cycle.clone(),
            })
            .collect();
        Self { twists }
    }

    /// Same word with every twist inverted, for the achiral Lefschetz
    /// fibration on the tangent disk bundle.
    pub fn negated(&self) -> Self {
        let twists = self
            .twists
            .iter()
            .map(|t| Twist {
                positive: !t.positive,
                ..t.clone()
            })
            .collect();
        Self { twists }
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }
}

impl std::fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for t in &self.twists {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = match t.family {
                CycleFamily::Alpha => "a",
                CycleFamily::Beta => "b",
                CycleFamily::Gamma => "c",
            };
            let exp = if t.positive { "" } else { "^-1" };
            write!(f, "T({name}{}){exp}", t.index + 1)?;
        }
        Ok(())
    }
}

/// Fiber, vanishing cycles and positive monodromy word of an admissible
/// divide under its default coloring.
pub fn monodromy_word(divide: &Divide) -> Result<MonodromyWord, FiberError> {
    let coloring = divide.checkerboard(false)?;
    let fiber = build_fiber(divide, &coloring)?;
    Ok(MonodromyWord::from_cycles(&fiber.vanishing_cycles()))
}
