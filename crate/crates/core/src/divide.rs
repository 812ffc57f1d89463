//! Divides as 4-valent maps: circle tracing, checkerboard coloring,
//! admissibility and the dual graph of circles and double points.

use std::collections::VecDeque;

use thiserror::Error;

use crate::map::{orbits, CanonicalForm, Dart, HalfEdgeMap, MapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivideError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("vertex {vertex} has degree {degree}, expected 4")]
    NotFourValent { vertex: usize, degree: usize },
    #[error("complement is not checkerboard colorable")]
    NotBipartite,
    #[error("divide is not admissible: {0}")]
    NotAdmissible(AdmissibilityReport),
}

/// A generic immersion of circles, stored as its cellular embedding.
///
/// `free_loops` counts vertex-free circles. Each carries its own pair of disk
/// faces; the only admissible configuration with free loops is a single
/// embedded circle on the sphere with no double points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divide {
    map: HalfEdgeMap,
    free_loops: usize,
    circle_of: Vec<usize>,
    strands: Vec<Vec<Dart>>,
}

impl Divide {
    pub fn new(map: HalfEdgeMap, free_loops: usize) -> Result<Self, DivideError> {
        for (vertex, rot) in map.rotations().iter().enumerate() {
            if rot.len() != 4 {
                return Err(DivideError::NotFourValent {
                    vertex,
                    degree: rot.len(),
                });
            }
        }
        let (circle_of, strands) = trace_strands(&map);
        Ok(Self {
            map,
            free_loops,
            circle_of,
            strands,
        })
    }

    /// Divide with pairing `d <-> d ^ 1`.
    pub fn from_rotations(rotations: Vec<Vec<Dart>>) -> Result<Self, DivideError> {
        Self::new(HalfEdgeMap::with_xor_pairing(rotations)?, 0)
    }

    /// A single embedded circle on the sphere.
    pub fn free_loop() -> Self {
        Self::new(HalfEdgeMap::empty(), 1).expect("empty map is 4-valent")
    }

    pub fn map(&self) -> &HalfEdgeMap {
        &self.map
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// v(P).
    pub fn double_points(&self) -> usize {
        self.map.vertex_count()
    }

    /// c(P).
    pub fn circle_count(&self) -> usize {
        self.strands.len() + self.free_loops
    }

    /// Circle index of a dart. Circles through double points come first,
    /// numbered by their smallest dart.
    pub fn circle_of(&self, d: Dart) -> usize {
        self.circle_of[d]
    }

    /// One strand cycle per circle: the outgoing darts met when following the
    /// circle from its smallest dart, going straight through every double
    /// point. Free loops are appended as empty cycles.
    pub fn trace_circles(&self) -> Vec<Vec<Dart>> {
        let mut out = self.strands.clone();
        out.extend(std::iter::repeat_with(Vec::new).take(self.free_loops));
        out
    }

    /// Number of double points met by each circle, self-crossings counted
    /// twice.
    pub fn crossings_per_circle(&self) -> Vec<usize> {
        self.trace_circles().iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        match (self.map.is_empty(), self.free_loops) {
            (true, 1) => true,
            (false, 0) => self.map.is_connected(),
            _ => false,
        }
    }

    pub fn ambient_euler_characteristic(&self) -> Result<i64, DivideError> {
        if self.map.is_empty() && self.free_loops == 1 {
            return Ok(2);
        }
        if self.free_loops > 0 {
            return Err(MapError::Disconnected.into());
        }
        Ok(self.map.euler_characteristic()?)
    }

    /// Genus of the closed surface carrying the divide.
    pub fn ambient_genus(&self) -> Result<u32, DivideError> {
        if self.map.is_empty() && self.free_loops == 1 {
            return Ok(0);
        }
        if self.free_loops > 0 {
            return Err(MapError::Disconnected.into());
        }
        Ok(self.map.genus()?)
    }

    /// Two-colors the complementary regions so that the regions on the two
    /// sides of every edge differ. The region containing the smallest dart of
    /// each component is white, unless `swap` is set.
    pub fn checkerboard(&self, swap: bool) -> Result<Coloring, DivideError> {
        let (white, black) = if swap {
            (Color::Black, Color::White)
        } else {
            (Color::White, Color::Black)
        };
        let (face_count, face_of) = self.map.face_labels();
        let mut faces = vec![Vec::new(); face_count];
        for d in 0..self.map.dart_count() {
            faces[face_of[d]].push(d);
        }
        for f in &mut faces {
            // face cycles in traversal order, starting at the smallest dart
            let start = f[0];
            f.clear();
            let mut d = start;
            loop {
                f.push(d);
                d = self.map.face_step(d);
                if d == start {
                    break;
                }
            }
        }
        let mut colors: Vec<Option<Color>> = vec![None; face_count];
        for start in 0..face_count {
            if colors[start].is_some() {
                continue;
            }
            colors[start] = Some(white);
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                let here = colors[f].unwrap();
                for &d in &faces[f] {
                    let g = face_of[self.map.pair(d)];
                    match colors[g] {
                        None => {
                            colors[g] = Some(here.opposite());
                            queue.push_back(g);
                        }
                        Some(c) if c == here => return Err(DivideError::NotBipartite),
                        Some(_) => {}
                    }
                }
            }
        }
        let mut colors: Vec<Color> = colors.into_iter().map(Option::unwrap).collect();
        for _ in 0..self.free_loops {
            // outside, then inside
            faces.push(Vec::new());
            colors.push(white);
            faces.push(Vec::new());
            colors.push(black);
        }
        Ok(Coloring {
            faces,
            face_of,
            colors,
        })
    }

    pub fn validate_admissible(&self) -> AdmissibilityReport {
        AdmissibilityReport {
            connected: self.is_connected(),
            faces_are_disks: true,
            colorable: self.checkerboard(false).is_ok(),
        }
    }

    pub fn require_admissible(&self) -> Result<(), DivideError> {
        let report = self.validate_admissible();
        if report.admissible() {
            Ok(())
        } else {
            Err(DivideError::NotAdmissible(report))
        }
    }

    pub fn dual_graph(&self) -> DualGraph {
        let edges = self
            .map
            .rotations()
            .iter()
            .map(|rot| (self.circle_of[rot[0]], self.circle_of[rot[1]]))
            .collect();
        DualGraph {
            vertex_count: self.circle_count(),
            edges,
        }
    }

    /// Canonical form of the pair (surface, divide) up to homeomorphism,
    /// orientation-reversing ones included.
    pub fn canonical_form(&self) -> Result<CanonicalForm, DivideError> {
        let map_bytes = if self.map.is_empty() {
            vec![0; 4]
        } else {
            self.map.canonical_form()?.into_bytes()
        };
        let mut bytes = (self.free_loops as u32).to_be_bytes().to_vec();
        bytes.extend(map_bytes);
        Ok(CanonicalForm::from_bytes(bytes))
    }

    pub fn is_homeomorphic_to(&self, other: &Divide) -> Result<bool, DivideError> {
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    pub fn mirror(&self) -> Self {
        Self::new(self.map.mirror(), self.free_loops).expect("mirror keeps degrees")
    }

    pub fn relabel(&self, perm: &[Dart]) -> Result<Self, DivideError> {
        Self::new(self.map.relabel(perm)?, self.free_loops)
    }
}

/// Circle index per dart and one strand cycle per circle.
fn trace_strands(map: &HalfEdgeMap) -> (Vec<usize>, Vec<Vec<Dart>>) {
    let n = map.dart_count();
    // leaving along d, arrive at pair(d) and go straight: position + 2
    let straight = |d: Dart| {
        let e = map.pair(d);
        map.next(map.next(e))
    };
    let mut circle_of = vec![usize::MAX; n];
    let mut strands = Vec::new();
    for cycle in orbits(n, straight) {
        if circle_of[cycle[0]] != usize::MAX {
            continue;
        }
        let id = strands.len();
        for &d in &cycle {
            circle_of[d] = id;
            circle_of[map.pair(d)] = id;
        }
        strands.push(cycle);
    }
    (circle_of, strands)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Face colors of a divide. Faces of free loops have no darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    faces: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
    colors: Vec<Color>,
}

impl Coloring {
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn color(&self, face: usize) -> Color {
        self.colors[face]
    }

    pub fn face_color(&self, d: Dart) -> Color {
        self.colors[self.face_of[d]]
    }

    pub fn count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// Face indices of one color, in face order.
    pub fn faces_of_color(&self, color: Color) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&f| self.colors[f] == color)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub connected: bool,
    /// Always true: a divide is represented by a cellular embedding.
    pub faces_are_disks: bool,
    pub colorable: bool,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.connected && self.faces_are_disks && self.colorable
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("disconnected");
        }
        if !self.faces_are_disks {
            out.push("non-disk region");
        }
        if !self.colorable {
            out.push("not checkerboard colorable");
        }
        out
    }
}

impl std::fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.admissible() {
            write!(f, "admissible")
        } else {
            write!(f, "{}", self.failures().join(", "))
        }
    }
}

/// Multigraph with one vertex per circle and one edge per double point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub vertex_count: usize,
    /// Circles through each double point, indexed by double point.
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when the graph is a single cycle through every vertex (a loop for
    /// one vertex, a double edge for two).
    pub fn is_cycle(&self) -> bool {
        self.edges.len() == self.vertex_count
            && self.degrees().iter().all(|&d| d == 2)
            && self.is_connected()
    }
}
