//! Generators for cyclic chains of circles, the three genus-one families, and
//! the exhaustive census of admissible divides up to homeomorphism.
//!
//! The census enumerates maps with `v` edges (the black regions of a
//! checkerboard-colored divide, joined through its double points) by orderly
//! generation of rooted traversal codes, and takes the medial map of each.
//! Every connected admissible divide with `v >= 1` double points is the medial
//! map of exactly its black-region map, so this reaches every class; the
//! results are deduplicated by the canonical form of the divide itself.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::divide::{Divide, DivideError};
use crate::fiber::{build_fiber, FiberError};
use crate::invariants::{heegaard_check, page_invariants, InvariantError};
use crate::map::{CanonicalForm, Dart, HalfEdgeMap};

/// Default largest number of double points accepted by [`enumerate_divides`].
pub const DEFAULT_MAX_V: usize = 8;

/// Environment variable overriding [`DEFAULT_MAX_V`].
pub const MAX_V_ENV: &str = "DIVIDE_FORGE_MAX_V";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("gluing {gluing} needs {} k, got k = {k}", if gluing.even() { "even" } else { "odd" })]
    ParityMismatch { k: usize, gluing: GluingKind },
    #[error("a chain needs at least 2 circles, got {0}")]
    ChainTooShort(usize),
    #[error("genus must be at least 1, got {0}")]
    GenusTooSmall(u32),
    #[error("max_v = {max_v} exceeds the census cap {cap}")]
    CapExceeded { max_v: usize, cap: usize },
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("census entry failed verification: {0}")]
    Verification(String),
}

/// How the last ribbon of a chain is glued back to the first one.
///
/// The open chain of ribbons has four boundary arcs. For even `k` they are
/// either each closed up on themselves (`EvenSelf`) or exchanged in pairs
/// (`EvenCross`). For odd `k` the two closings `OddA` and `OddB` are mirror
/// images of each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GluingKind {
    EvenSelf,
    EvenCross,
    OddA,
    OddB,
}

impl GluingKind {
    pub const ALL: [GluingKind; 4] = [
        GluingKind::EvenSelf,
        GluingKind::EvenCross,
        GluingKind::OddA,
        GluingKind::OddB,
    ];

    pub fn even(self) -> bool {
        matches!(self, GluingKind::EvenSelf | GluingKind::EvenCross)
    }

    // Whether the closing crossing swaps the two arcs of the first circle.
    fn closing_twist(self) -> bool {
        matches!(self, GluingKind::EvenCross | GluingKind::OddB)
    }
}

impl fmt::Display for GluingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GluingKind::EvenSelf => "even-self",
            GluingKind::EvenCross => "even-cross",
            GluingKind::OddA => "odd-a",
            GluingKind::OddB => "odd-b",
        };
        f.write_str(s)
    }
}

/// Cyclic chain of `k` circles where circle `j` crosses circle `j + 1`
/// (indices mod `k`) exactly once.
///
/// Circle `j` consists of two arcs from double point `j - 1` to double point
/// `j`, with darts `4j, 4j + 1` and `4j + 2, 4j + 3` (start, end). The pairing
/// is `d <-> d ^ 1`. All crossings but the last one are untwisted; the last
/// one realizes `gluing`.
pub fn chain_divide(k: usize, gluing: GluingKind) -> Result<Divide, CensusError> {
    if k < 2 {
        return Err(CensusError::ChainTooShort(k));
    }
    if gluing.even() != k.is_multiple_of(2) {
        return Err(CensusError::ParityMismatch { k, gluing });
    }
    let rotations = (0..k)
        .map(|j| {
            let n = (j + 1) % k;
            let twist = j == k - 1 && gluing.closing_twist();
            let (y, z) = if twist { (4 * n + 2, 4 * n) } else { (4 * n, 4 * n + 2) };
            vec![4 * j + 1, y, 4 * j + 3, z]
        })
        .collect();
    Ok(Divide::from_rotations(rotations)?)
}

/// Lengths of the boundary components of a regular neighborhood of the chain,
/// sorted ascending. Computed by tracing the faces of the chain divide.
pub fn ribbon_boundary_profile(k: usize, gluing: GluingKind) -> Result<Vec<usize>, CensusError> {
    let divide = chain_divide(k, gluing)?;
    let mut lengths: Vec<usize> = divide.map().faces().iter().map(Vec::len).collect();
    lengths.sort_unstable();
    Ok(lengths)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyKind {
    /// `2g + 2` circles, `4g + 4` binding components.
    BirkhoffFried,
    /// `2g + 1` circles, `4g + 2` binding components.
    Brunella,
    /// `2g` circles, `4g` binding components.
    Minimal,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::BirkhoffFried,
        FamilyKind::Brunella,
        FamilyKind::Minimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::BirkhoffFried => "birkhoff-fried",
            FamilyKind::Brunella => "brunella",
            FamilyKind::Minimal => "minimal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Chain length and gluing realizing this family on a genus `g` surface.
    pub fn chain(self, genus: u32) -> (usize, GluingKind) {
        let g = genus as usize;
        match self {
            FamilyKind::BirkhoffFried => (2 * g + 2, GluingKind::EvenSelf),
            FamilyKind::Brunella => (2 * g + 1, GluingKind::OddA),
            FamilyKind::Minimal => (2 * g, GluingKind::EvenCross),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn family(kind: FamilyKind, genus: u32) -> Result<Divide, CensusError> {
    if genus < 1 {
        return Err(CensusError::GenusTooSmall(genus));
    }
    let (k, gluing) = kind.chain(genus);
    chain_divide(k, gluing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EntryInvariants {
    pub ambient_genus: u32,
    pub circles: u32,
    pub double_points: u32,
    pub binding_components: u32,
    pub page_genus: u32,
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub canonical: CanonicalForm,
    pub divide: Divide,
    pub invariants: EntryInvariants,
    pub family: Option<FamilyKind>,
}

impl CensusEntry {
    pub fn new(divide: Divide) -> Result<Self, CensusError> {
        let page = page_invariants(&divide)?;
        let invariants = EntryInvariants {
            ambient_genus: page.ambient_genus,
            circles: divide.circle_count() as u32,
            double_points: divide.double_points() as u32,
            binding_components: page.binding_components,
            page_genus: page.genus,
        };
        Ok(Self {
            canonical: divide.canonical_form()?,
            divide,
            invariants,
            family: None,
        })
    }
}

/// Recognizes the three genus-one families by canonical form.
#[derive(Default)]
struct FamilyIndex {
    forms: HashMap<u32, Vec<(FamilyKind, CanonicalForm)>>,
}

impl FamilyIndex {
    fn tag(&mut self, entry: &mut CensusEntry) -> Result<(), CensusError> {
        let inv = entry.invariants;
        if inv.page_genus != 1 || inv.ambient_genus < 1 {
            return Ok(());
        }
        let g = inv.ambient_genus;
        let forms = match self.forms.entry(g) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                let mut forms = Vec::new();
                for kind in FamilyKind::ALL {
                    forms.push((kind, family(kind, g)?.canonical_form()?));
                }
                e.insert(forms)
            }
        };
        entry.family = forms
            .iter()
            .find(|(_, form)| *form == entry.canonical)
            .map(|(kind, _)| *kind);
        Ok(())
    }
}

/// All admissible divides with genus-one pages on a genus `g` surface, up to
/// homeomorphism, found by closing chains of circles in every possible way.
pub fn enumerate_genus_one(genus: u32) -> Result<Vec<CensusEntry>, CensusError> {
    if genus < 1 {
        return Err(CensusError::GenusTooSmall(genus));
    }
    // a genus-one page forces c = v, so every circle meets exactly two double
    // points and the circles form a cyclic chain; its genus is at least
    // (k - 2) / 2, so k <= 2g + 2
    let mut classes = BTreeMap::new();
    let mut index = FamilyIndex::default();
    for k in 2..=(2 * genus as usize + 2) {
        for gluing in GluingKind::ALL {
            if gluing.even() != (k % 2 == 0) {
                continue;
            }
            let divide = chain_divide(k, gluing)?;
            if divide.ambient_genus()? != genus {
                continue;
            }
            let mut entry = CensusEntry::new(divide)?;
            index.tag(&mut entry)?;
            classes.entry(entry.canonical.clone()).or_insert(entry);
        }
    }
    Ok(classes.into_values().collect())
}

/// Largest `max_v` accepted by [`enumerate_divides`], read from
/// `DIVIDE_FORGE_MAX_V` when set.
pub fn census_cap() -> usize {
    std::env::var(MAX_V_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_V)
}

/// Every admissible divide with at most `max_v` double points, up to
/// homeomorphism, ordered by canonical form. Each entry is re-verified with
/// [`verify_entry`].
pub fn enumerate_divides(max_v: usize) -> Result<Vec<CensusEntry>, CensusError> {
    enumerate_divides_with_cap(max_v, census_cap())
}

pub fn enumerate_divides_with_cap(max_v: usize, cap: usize) -> Result<Vec<CensusEntry>, CensusError> {
    if max_v > cap {
        return Err(CensusError::CapExceeded { max_v, cap });
    }
    let mut entries = Vec::new();
    let mut index = FamilyIndex::default();
    let mut push = |divide: Divide| -> Result<(), CensusError> {
        let mut entry = CensusEntry::new(divide)?;
        verify_entry(&entry)?;
        index.tag(&mut entry)?;
        entries.push(entry);
        Ok(())
    };
    push(Divide::free_loop())?;
    for v in 1..=max_v {
        let mut classes: BTreeMap<CanonicalForm, Divide> = BTreeMap::new();
        let mut failure = None;
        for_each_map(v, |next| {
            if failure.is_some() {
                return;
            }
            // the dual map has the same medial; keep the side with fewer vertices
            if cycle_count(next, |d| next[d]) > cycle_count(next, |d| next[d ^ 1]) {
                return;
            }
            let divide = medial_of_permutation(next);
            match divide.canonical_form() {
                Ok(form) => {
                    classes.entry(form).or_insert(divide);
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        for divide in classes.into_values() {
            if !divide.validate_admissible().admissible() {
                return Err(CensusError::Verification(format!(
                    "generated divide with v = {v} is not admissible"
                )));
            }
            push(divide)?;
        }
    }
    entries.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(entries)
}

/// Checks the relations every admissible divide must satisfy: every circle
/// meets an even number of double points, `2v >= 2c` when `v >= 1` with
/// equality exactly when every circle meets two, the Heegaard bound, and
/// that the traced A'Campo fiber has Euler characteristic `-2v` and `2c`
/// boundary components.
pub fn verify_entry(entry: &CensusEntry) -> Result<(), CensusError> {
    let p = &entry.divide;
    let fail = |what: &str| Err(CensusError::Verification(what.to_string()));
    let crossings = p.crossings_per_circle();
    let (v, c) = (p.double_points(), p.circle_count());
    if crossings.iter().any(|&n| n % 2 == 1) {
        return fail("circle with an odd number of double points");
    }
    if v >= 1 {
        if v < c {
            return fail("fewer double points than circles");
        }
        if (v == c) != crossings.iter().all(|&n| n == 2) {
            return fail("v = c does not match two double points per circle");
        }
    }
    let inv = entry.invariants;
    if (inv.page_genus == 1) != (inv.circles == inv.double_points) {
        return fail("page genus one does not match c = v");
    }
    let (_, heegaard_ok) = heegaard_check(p)?;
    if !heegaard_ok {
        return fail("Heegaard bound violated");
    }
    let coloring = p.checkerboard(false)?;
    let fiber = build_fiber(p, &coloring)?;
    if fiber.euler_characteristic() != -2 * v as i64 {
        return fail("fiber Euler characteristic differs from -2v");
    }
    if fiber.boundary_cycles().len() != 2 * c {
        return fail("fiber boundary count differs from 2c");
    }
    Ok(())
}

fn cycle_count(next: &[usize], step: impl Fn(usize) -> usize) -> usize {
    let mut seen = vec![false; next.len()];
    let mut count = 0;
    for start in 0..next.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = step(d);
        }
    }
    count
}

/// Medial divide of a map: one double point per edge, one divide edge per
/// corner. The faces around the vertices of `map` are black, those inside
/// its faces white (up to the tie-break of [`Divide::checkerboard`]).
pub fn medial_divide(map: &HalfEdgeMap) -> Divide {
    let n = map.dart_count();
    let mut rotations = Vec::with_capacity(n / 2);
    let mut pairing = vec![0; 2 * n];
    for d in 0..n {
        let e = map.pair(d);
        if d < e {
            // midpoint of edge {d, e}, counterclockwise from the corner on
            // the far side of e
            rotations.push(vec![2 * e + 1, 2 * d, 2 * d + 1, 2 * e]);
        }
        // corner between d and its successor
        let s = map.next(d);
        pairing[2 * d] = 2 * s + 1;
        pairing[2 * s + 1] = 2 * d;
    }
    let medial = HalfEdgeMap::new(rotations, pairing).expect("medial map is well formed");
    Divide::new(medial, 0).expect("medial map is 4-valent")
}

fn medial_of_permutation(next: &[Dart]) -> Divide {
    let map = HalfEdgeMap::from_permutations(next, (0..next.len()).map(|d| d ^ 1).collect())
        .expect("generated permutation is valid");
    medial_divide(&map)
}

/// Calls `visit` with the rotation permutation of one representative of
/// every connected map with `edges` edges, up to relabeling and reflection.
/// Darts are paired as `d <-> d ^ 1`.
///
/// Rooted maps are generated as traversal codes: dart 0 is the root, darts
/// are processed in label order and a dart first reached through the
/// rotation gets the next even label (its partner the odd one). A code is
/// kept when no other root or orientation yields a smaller code.
pub fn for_each_map(edges: usize, mut visit: impl FnMut(&[Dart])) {
    let n = 2 * edges;
    let mut gen = Generator {
        n,
        next: vec![usize::MAX; n],
        has_preimage: vec![false; n],
        labelled: 2,
        scratch: Scratch::new(n),
    };
    gen.extend(0, &mut visit);
}

struct Generator {
    n: usize,
    next: Vec<usize>,
    has_preimage: Vec<bool>,
    labelled: usize,
    scratch: Scratch,
}

impl Generator {
    fn extend(&mut self, d: usize, visit: &mut impl FnMut(&[Dart])) {
        if d == self.labelled {
            if d == self.n && self.scratch.is_canonical(&self.next) {
                visit(&self.next);
            }
            return;
        }
        // the first entry of any code is 0 (root on a univalent vertex),
        // 1 (root followed by its own partner) or 2; a later dart of either
        // kind would root a smaller code
        let root_class = if d == 0 { 3 } else { self.next[0].min(2) };
        for t in 0..self.labelled {
            if self.has_preimage[t] {
                continue;
            }
            if d > 0 && ((t == d && root_class > 0) || (t == d ^ 1 && root_class > 1)) {
                continue;
            }
            self.next[d] = t;
            self.has_preimage[t] = true;
            self.extend(d + 1, visit);
            self.has_preimage[t] = false;
        }
        if self.labelled < self.n {
            let t = self.labelled;
            self.next[d] = t;
            self.has_preimage[t] = true;
            self.labelled += 2;
            self.extend(d + 1, visit);
            self.labelled -= 2;
            self.has_preimage[t] = false;
        }
        self.next[d] = usize::MAX;
    }
}

struct Scratch {
    label: Vec<usize>,
    order: Vec<usize>,
    inverse: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            label: vec![usize::MAX; n],
            order: Vec::with_capacity(n),
            inverse: vec![0; n],
        }
    }

    fn is_canonical(&mut self, next: &[usize]) -> bool {
        for (d, &s) in next.iter().enumerate() {
            self.inverse[s] = d;
        }
        let inverse = std::mem::take(&mut self.inverse);
        let mut keep = true;
        'roots: for rot in [next, &inverse[..]] {
            for root in 0..next.len() {
                if std::ptr::eq(rot, next) && root == 0 {
                    continue;
                }
                if self.beats(rot, root, next) {
                    keep = false;
                    break 'roots;
                }
            }
        }
        self.inverse = inverse;
        keep
    }

    /// Whether the code rooted at `root` under rotation `rot` is smaller than
    /// `code`.
    fn beats(&mut self, rot: &[usize], root: usize, code: &[usize]) -> bool {
        for &d in &self.order {
            self.label[d] = usize::MAX;
        }
        self.order.clear();
        self.label[root] = 0;
        self.label[root ^ 1] = 1;
        self.order.push(root);
        self.order.push(root ^ 1);
        let mut i = 0;
        while i < self.order.len() {
            let d = self.order[i];
            let s = rot[d];
            if self.label[s] == usize::MAX {
                self.label[s] = self.order.len();
                self.label[s ^ 1] = self.order.len() + 1;
                self.order.push(s);
                self.order.push(s ^ 1);
            }
            let x = self.label[s];
            if x != code[i] {
                return x < code[i];
            }
            i += 1;
        }
        false
    }
}
