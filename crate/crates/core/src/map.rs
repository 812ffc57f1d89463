//! Rotation-system encoding of graphs cellularly embedded in closed oriented
//! surfaces.
//!
//! A map is given by two permutations of its darts: the rotation `next`
//! (counterclockwise successor around the dart's vertex) and the edge pairing
//! `pair` (a fixed-point-free involution). Faces are the orbits of
//! `d -> next[pair[d]]`; this face rule is used everywhere a boundary is traced,
//! including the ribbon surfaces built in [`crate::fiber`].

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub type Dart = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("dart {0} appears more than once in the rotations")]
    DuplicateDart(Dart),
    #[error("dart {0} has no valid partner")]
    UnpairedDart(Dart),
    #[error("dart {0} is paired with itself")]
    FixedDart(Dart),
    #[error("dart {0} is out of range")]
    DartOutOfRange(Dart),
    #[error("vertex {0} has an empty rotation")]
    EmptyVertex(usize),
    #[error("map is disconnected")]
    Disconnected,
    #[error("map has no darts")]
    Empty,
    #[error("odd Euler characteristic {0}")]
    OddCharacteristic(i64),
    #[error("malformed canonical form")]
    MalformedCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeMap {
    rotations: Vec<Vec<Dart>>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
    pair: Vec<Dart>,
    vertex_of: Vec<usize>,
    position: Vec<usize>,
}

impl HalfEdgeMap {
    /// Builds a map from counterclockwise vertex rotations and an edge pairing
    /// indexed by dart.
    pub fn new(rotations: Vec<Vec<Dart>>, pairing: Vec<Dart>) -> Result<Self, MapError> {
        let n = pairing.len();
        let mut vertex_of = vec![usize::MAX; n];
        let mut position = vec![0; n];
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(MapError::EmptyVertex(v));
            }
            for (i, &d) in rot.iter().enumerate() {
                if d >= n {
                    return Err(MapError::DartOutOfRange(d));
                }
                if vertex_of[d] != usize::MAX {
                    return Err(MapError::DuplicateDart(d));
                }
                vertex_of[d] = v;
                position[d] = i;
            }
        }
        if let Some(d) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(MapError::UnpairedDart(d));
        }
        for (d, &e) in pairing.iter().enumerate() {
            if e == d {
                return Err(MapError::FixedDart(d));
            }
            if e >= n || pairing[e] != d {
                return Err(MapError::UnpairedDart(d));
            }
        }
        let mut next = vec![0; n];
        let mut prev = vec![0; n];
        for rot in &rotations {
            let k = rot.len();
            for i in 0..k {
                next[rot[i]] = rot[(i + 1) % k];
                prev[rot[(i + 1) % k]] = rot[i];
            }
        }
        Ok(Self {
            rotations,
            next,
            prev,
            pair: pairing,
            vertex_of,
            position,
        })
    }

    /// Builds a map whose pairing is `d <-> d ^ 1`.
    pub fn with_xor_pairing(rotations: Vec<Vec<Dart>>) -> Result<Self, MapError> {
        let n: usize = rotations.iter().map(Vec::len).sum();
        if n % 2 == 1 {
            // the last dart would be paired with a dart that does not exist
            return Err(MapError::UnpairedDart(n - 1));
        }
        Self::new(rotations, (0..n).map(|d| d ^ 1).collect())
    }

    /// Builds a map from the rotation permutation directly. Vertices are the
    /// cycles of `next`, listed by smallest dart.
    pub fn from_permutations(next: &[Dart], pairing: Vec<Dart>) -> Result<Self, MapError> {
        let n = next.len();
        if pairing.len() != n {
            return Err(MapError::UnpairedDart(n.min(pairing.len())));
        }
        let mut seen = vec![false; n];
        let mut rotations = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut rot = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                rot.push(d);
                d = next[d];
                if d >= n {
                    return Err(MapError::DartOutOfRange(d));
                }
            }
            if d != start {
                return Err(MapError::DuplicateDart(d));
            }
            rotations.push(rot);
        }
        Self::new(rotations, pairing)
    }

    pub fn empty() -> Self {
        Self {
            rotations: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
            pair: Vec::new(),
            vertex_of: Vec::new(),
            position: Vec::new(),
        }
    }

    pub fn dart_count(&self) -> usize {
        self.pair.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pair.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.pair.is_empty()
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn rotation(&self, vertex: usize) -> &[Dart] {
        &self.rotations[vertex]
    }

    pub fn pairing(&self) -> &[Dart] {
        &self.pair
    }

    #[inline]
    pub fn pair(&self, d: Dart) -> Dart {
        self.pair[d]
    }

    /// Counterclockwise successor of `d` around its vertex.
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }

    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d]
    }

    #[inline]
    pub fn vertex_of(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    /// Index of `d` inside its vertex rotation.
    #[inline]
    pub fn position(&self, d: Dart) -> usize {
        self.position[d]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.rotations[vertex].len()
    }

    /// Successor of `d` along its face.
    #[inline]
    pub fn face_step(&self, d: Dart) -> Dart {
        self.next[self.pair[d]]
    }

    /// Face cycles, each starting at its smallest dart, ordered by that dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        orbits(self.dart_count(), |d| self.face_step(d))
    }

    /// Face index of every dart, numbered as in [`HalfEdgeMap::faces`].
    pub fn face_labels(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.dart_count()];
        let mut count = 0;
        for start in 0..self.dart_count() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while label[d] == usize::MAX {
                label[d] = count;
                d = self.face_step(d);
            }
            count += 1;
        }
        (count, label)
    }

    pub fn face_count(&self) -> usize {
        self.face_labels().0
    }

    /// Dart sets of the connected components, by smallest dart.
    pub fn components(&self) -> Vec<Vec<Dart>> {
        let n = self.dart_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let d = members[i];
                i += 1;
                for e in [self.next[d], self.pair[d]] {
                    if comp[e] == usize::MAX {
                        comp[e] = id;
                        members.push(e);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    fn require_connected(&self) -> Result<(), MapError> {
        match self.components().len() {
            0 => Err(MapError::Empty),
            1 => Ok(()),
            _ => Err(MapError::Disconnected),
        }
    }

    /// V - E + F of a connected map.
    pub fn euler_characteristic(&self) -> Result<i64, MapError> {
        self.require_connected()?;
        Ok(self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64)
    }

    pub fn genus(&self) -> Result<u32, MapError> {
        let chi = self.euler_characteristic()?;
        if chi % 2 != 0 || chi > 2 {
            return Err(MapError::OddCharacteristic(chi));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    /// The same map on the oppositely oriented surface.
    pub fn mirror(&self) -> Self {
        let rotations = self
            .rotations
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        Self::new(rotations, self.pair.clone()).expect("mirror of a valid map is valid")
    }

    /// Renames every dart `d` to `perm[d]`.
    pub fn relabel(&self, perm: &[Dart]) -> Result<Self, MapError> {
        let n = self.dart_count();
        let rotations = self
            .rotations
            .iter()
            .map(|r| r.iter().map(|&d| perm[d]).collect())
            .collect();
        let mut pairing = vec![usize::MAX; n];
        for d in 0..n {
            let (a, b) = (perm[d], perm[self.pair[d]]);
            if a >= n {
                return Err(MapError::DartOutOfRange(a));
            }
            pairing[a] = b;
        }
        Self::new(rotations, pairing)
    }

    /// Minimal traversal code over every root dart and both orientations.
    pub fn canonical_form(&self) -> Result<CanonicalForm, MapError> {
        self.require_connected()?;
        let mut best: Vec<u32> = Vec::new();
        for rot in [&self.next, &self.prev] {
            for root in 0..self.dart_count() {
                traversal_code(rot, &self.pair, root, &mut best);
            }
        }
        Ok(CanonicalForm::from_code(&best))
    }

    /// Like [`HalfEdgeMap::canonical_form`] but without reflections, so a map
    /// and its mirror image differ unless the map is achiral.
    pub fn oriented_canonical_form(&self) -> Result<CanonicalForm, MapError> {
        self.require_connected()?;
        let mut best: Vec<u32> = Vec::new();
        for root in 0..self.dart_count() {
            traversal_code(&self.next, &self.pair, root, &mut best);
        }
        Ok(CanonicalForm::from_code(&best))
    }
}

pub fn are_homeomorphic(a: &HalfEdgeMap, b: &HalfEdgeMap) -> Result<bool, MapError> {
    if a.dart_count() != b.dart_count() || a.vertex_count() != b.vertex_count() {
        a.require_connected()?;
        b.require_connected()?;
        return Ok(false);
    }
    Ok(a.canonical_form()? == b.canonical_form()?)
}

pub(crate) fn orbits(n: usize, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            cycle.push(d);
            d = step(d);
        }
        out.push(cycle);
    }
    out
}

/// Relabels the darts in breadth-first order from `root` (pair first, then
/// rotation) and emits `(pair, next)` labels per dart. `best` holds the
/// smallest code seen so far and is replaced when this root beats it; the
/// traversal stops as soon as it is known to be larger.
fn traversal_code(next: &[Dart], pair: &[Dart], root: Dart, best: &mut Vec<u32>) {
    const NONE: u32 = u32::MAX;
    let n = next.len();
    let mut label = vec![NONE; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut code = Vec::with_capacity(2 * n);
    let mut state = if best.is_empty() {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    let mut i = 0;
    while i < order.len() {
        let d = order[i];
        for t in [pair[d], next[d]] {
            if label[t] == NONE {
                label[t] = order.len() as u32;
                order.push(t);
            }
            let x = label[t];
            if state == Ordering::Equal {
                match x.cmp(&best[code.len()]) {
                    Ordering::Greater => return,
                    Ordering::Less => state = Ordering::Less,
                    Ordering::Equal => {}
                }
            }
            code.push(x);
        }
        i += 1;
    }
    if state == Ordering::Less {
        *best = code;
    }
}

/// Byte encoding of a map that is equal for two maps exactly when they are
/// related by a dart relabeling, possibly composed with a reflection.
///
/// Layout: big-endian `u32` dart count, then per dart the big-endian `u32`
/// labels of its partner and its rotation successor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    fn from_code(code: &[u32]) -> Self {
        let mut bytes = Vec::with_capacity(4 + 4 * code.len());
        bytes.extend_from_slice(&((code.len() / 2) as u32).to_be_bytes());
        for x in code {
            bytes.extend_from_slice(&x.to_be_bytes());
        }
        Self(bytes)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Rebuilds the map in its canonical labeling.
    pub fn decode(&self) -> Result<HalfEdgeMap, MapError> {
        let words: Vec<u32> = self
            .0
            .chunks(4)
            .map(|c| {
                <[u8; 4]>::try_from(c)
                    .map(u32::from_be_bytes)
                    .map_err(|_| MapError::MalformedCode)
            })
            .collect::<Result<_, _>>()?;
        let (&n, rest) = words.split_first().ok_or(MapError::MalformedCode)?;
        let n = n as usize;
        if rest.len() != 2 * n {
            return Err(MapError::MalformedCode);
        }
        let pairing = rest.iter().step_by(2).map(|&x| x as usize).collect();
        let next: Vec<usize> = rest.iter().skip(1).step_by(2).map(|&x| x as usize).collect();
        HalfEdgeMap::from_permutations(&next, pairing)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_loop() -> HalfEdgeMap {
        HalfEdgeMap::new(vec![vec![0, 1]], vec![1, 0]).unwrap()
    }

    fn torus() -> HalfEdgeMap {
        HalfEdgeMap::new(vec![vec![0, 2, 1, 3]], vec![1, 0, 3, 2]).unwrap()
    }

    #[test]
    fn loop_on_sphere() {
        let m = sphere_loop();
        assert_eq!((m.vertex_count(), m.edge_count()), (1, 1));
        assert_eq!(m.faces().len(), 2);
        assert_eq!(m.euler_characteristic(), Ok(2));
        assert_eq!(m.genus(), Ok(0));
    }

    #[test]
    fn one_vertex_torus() {
        let m = torus();
        assert_eq!((m.vertex_count(), m.edge_count()), (1, 2));
        // hand trace: 0 -> next[1] = 3 -> next[2] = 1 -> next[0] = 2 -> next[3] = 0
        assert_eq!(m.faces(), vec![vec![0, 3, 1, 2]]);
        assert_eq!(m.euler_characteristic(), Ok(0));
        assert_eq!(m.genus(), Ok(1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            HalfEdgeMap::new(vec![vec![0, 5, 1], vec![5, 2, 3, 4]], vec![1, 0, 3, 2, 5, 4]),
            Err(MapError::DuplicateDart(5))
        );
        assert_eq!(
            HalfEdgeMap::new(vec![vec![0, 1]], vec![0, 1]),
            Err(MapError::FixedDart(0))
        );
        assert_eq!(
            HalfEdgeMap::new(vec![vec![0, 1, 2]], vec![1, 2, 0]),
            Err(MapError::UnpairedDart(0))
        );
        assert_eq!(
            HalfEdgeMap::new(vec![vec![0, 1]], vec![1, 0, 3, 2]),
            Err(MapError::UnpairedDart(2))
        );
        assert_eq!(
            HalfEdgeMap::with_xor_pairing(vec![vec![0, 1, 2]]),
            Err(MapError::UnpairedDart(2))
        );
    }

    #[test]
    fn disconnected_maps_are_rejected() {
        let m = HalfEdgeMap::new(vec![vec![0, 1], vec![2, 3]], vec![1, 0, 3, 2]).unwrap();
        assert_eq!(m.faces().len(), 4);
        assert_eq!(m.components().len(), 2);
        assert_eq!(m.euler_characteristic(), Err(MapError::Disconnected));
        assert_eq!(m.canonical_form(), Err(MapError::Disconnected));
        assert_eq!(HalfEdgeMap::empty().genus(), Err(MapError::Empty));
    }

    #[test]
    fn canonical_form_decodes_to_an_equivalent_map() {
        let m = torus();
        let form = m.canonical_form().unwrap();
        let decoded = form.decode().unwrap();
        assert_eq!(decoded.canonical_form().unwrap(), form);
        assert_eq!(decoded.genus(), Ok(1));
        assert!(CanonicalForm::from_bytes(vec![0, 0, 0, 2, 1]).decode().is_err());
    }

    #[test]
    fn sphere_and_torus_differ() {
        let a = torus();
        let b = HalfEdgeMap::new(vec![vec![0, 1, 2, 3]], vec![1, 0, 3, 2]).unwrap();
        assert_eq!(b.genus(), Ok(0));
        assert_eq!(are_homeomorphic(&a, &b), Ok(false));
        assert_eq!(are_homeomorphic(&a, &a.mirror()), Ok(true));
    }
}
