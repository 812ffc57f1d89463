//! First homology of the fiber, the algebraic intersection form and the
//! action of the monodromy word on it.
//!
//! The basis comes from a spanning tree of the ribbon graph: every edge
//! outside the tree closes one loop. Contracting the tree leaves a bouquet
//! whose single vertex sees the non-tree half-edges in a cyclic order, and
//! two basis loops intersect once exactly when their chords in that vertex
//! disk interleave.

use std::collections::VecDeque;

use serde::Serialize;

use crate::fiber::{Cycle, FiberComplex, FiberError, MonodromyWord};
use crate::map::HalfEdgeMap;

/// Square integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub size: usize,
    pub entries: Vec<i128>,
}

impl IntMatrix {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        Self { size, entries }
    }

    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            entries: vec![0; size * size],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.entries[i * self.size + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        self.entries.chunks(self.size.max(1)).map(<[i128]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Whether `M^T J M = J`.
    pub fn preserves_form(&self, form: &IntMatrix) -> bool {
        self.transpose()
            .checked_mul(form)
            .and_then(|x| x.checked_mul(self))
            .is_some_and(|x| &x == form)
    }
}

/// Basis of `H_1` of a fiber given by the non-tree edges of a spanning tree.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    /// For every ribbon dart on a non-tree edge, the basis index and `+1` if
    /// the dart runs along the loop, `-1` against it.
    coordinate: Vec<Option<(usize, i128)>>,
    form: IntMatrix,
}

impl HomologyBasis {
    pub fn new(fiber: &FiberComplex) -> Self {
        Self::of_ribbon(fiber.ribbon())
    }

    pub fn of_ribbon(ribbon: &HalfEdgeMap) -> Self {
        let n = ribbon.dart_count();
        let mut in_tree = vec![false; n];
        let mut seen = vec![false; ribbon.vertex_count()];
        if ribbon.vertex_count() > 0 {
            seen[0] = true;
            let mut queue = VecDeque::from([0]);
            while let Some(x) = queue.pop_front() {
                for &d in ribbon.rotation(x) {
                    let y = ribbon.vertex_of(ribbon.pair(d));
                    if !seen[y] {
                        seen[y] = true;
                        in_tree[d] = true;
                        in_tree[ribbon.pair(d)] = true;
                        queue.push_back(y);
                    }
                }
            }
        }

        let mut coordinate = vec![None; n];
        let mut rank = 0;
        for d in 0..n {
            let e = ribbon.pair(d);
            if !in_tree[d] && d < e {
                coordinate[d] = Some((rank, 1));
                coordinate[e] = Some((rank, -1));
                rank += 1;
            }
        }

        // cyclic order of non-tree darts around the contracted tree
        let mut position = vec![usize::MAX; n];
        if n > 0 {
            let mut d = 0;
            let mut pos = 0;
            for _ in 0..n {
                if in_tree[d] {
                    d = ribbon.next(ribbon.pair(d));
                } else {
                    position[d] = pos;
                    pos += 1;
                    d = ribbon.next(d);
                }
            }
            debug_assert_eq!(pos, 2 * rank);
        }

        // loop i leaves the vertex along its forward dart and comes back
        // along the partner; inside the vertex disk its chord runs from the
        // entry position to the exit position
        let mut chords = vec![(0, 0); rank];
        for d in 0..n {
            if let Some((i, 1)) = coordinate[d] {
                chords[i] = (position[ribbon.pair(d)], position[d]);
            }
        }
        let period = 2 * rank;
        let inside = |from: usize, to: usize, x: usize| {
            // strictly inside the counterclockwise arc from `from` to `to`
            let span = (to + period - from) % period;
            let off = (x + period - from) % period;
            off > 0 && off < span
        };
        let mut form = IntMatrix::zeros(rank);
        for i in 0..rank {
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let (s, t) = chords[i];
                let (u, w) = chords[j];
                let (su, sw) = (inside(s, t, u), inside(s, t, w));
                if su != sw {
                    form.set(i, j, if su { 1 } else { -1 });
                }
            }
        }
        Self { coordinate, form }
    }

    pub fn rank(&self) -> usize {
        self.form.size
    }

    /// The intersection form `J` on the basis.
    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    /// Coordinates of the class of a closed walk.
    pub fn class_of(&self, cycle: &Cycle) -> Vec<i128> {
        let mut v = vec![0; self.rank()];
        for &d in cycle.darts() {
            if let Some((i, s)) = self.coordinate[d] {
                v[i] += s;
            }
        }
        v
    }

    /// `<x, y> = x^T J y`.
    pub fn pairing(&self, x: &[i128], y: &[i128]) -> i128 {
        let jy = self.form.mul_vec(y);
        x.iter().zip(&jy).map(|(a, b)| a * b).sum()
    }
}

/// Pairwise algebraic intersection numbers of the given cycles.
pub fn intersection_matrix(
    fiber: &FiberComplex,
    cycles: &[Cycle],
) -> Result<IntMatrix, FiberError> {
    check_cycles(fiber, cycles.iter())?;
    let basis = HomologyBasis::new(fiber);
    let classes: Vec<_> = cycles.iter().map(|c| basis.class_of(c)).collect();
    let mut m = IntMatrix::zeros(cycles.len());
    for (i, x) in classes.iter().enumerate() {
        for (j, y) in classes.iter().enumerate() {
            m.set(i, j, basis.pairing(x, y));
        }
    }
    Ok(m)
}

fn check_cycles<'a>(
    fiber: &FiberComplex,
    mut cycles: impl Iterator<Item = &'a Cycle>,
) -> Result<(), FiberError> {
    if cycles.all(|c| c.is_closed_walk_on(fiber.ribbon())) {
        Ok(())
    } else {
        Err(FiberError::BasisMismatch)
    }
}

/// Matrix of the transvection `x -> x + s<x, c>c` for `s = +1` or `-1`.
pub fn transvection(basis: &HomologyBasis, class: &[i128], positive: bool) -> IntMatrix {
    let n = basis.rank();
    let sign = if positive { 1 } else { -1 };
    // row vector c^T J^T, so that entry (i, j) adds c_i <e_j, c>
    let jc = basis.form().mul_vec(class);
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) + sign * class[i] * jc[j];
            m.set(i, j, v);
        }
    }
    m
}

/// Action of the monodromy word on `H_1` of the fiber, in the spanning-tree
/// basis, with the first twist of the word applied first.
pub fn homological_monodromy(
    fiber: &FiberComplex,
    word: &MonodromyWord,
) -> Result<(HomologyBasis, IntMatrix), FiberError> {
    check_cycles(fiber, word.twists.iter().map(|t| &t.cycle))?;
    let basis = HomologyBasis::new(fiber);
    let n = basis.rank();
    let mut total = IntMatrix::identity(n);
    for twist in &word.twists {
        // T M = M + s c ((Jc)^T M), a rank one update
        let c = basis.class_of(&twist.cycle);
        let jc = basis.form().mul_vec(&c);
        let sign = if twist.positive { 1 } else { -1 };
        let mut w = vec![0i128; n];
        for (k, &a) in jc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                *wj = a
                    .checked_mul(total.get(k, j))
                    .and_then(|x| wj.checked_add(x))
                    .ok_or(FiberError::Overflow)?;
            }
        }
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &wj) in w.iter().enumerate() {
                let v = (sign * ci)
                    .checked_mul(wj)
                    .and_then(|x| x.checked_add(total.get(i, j)))
                    .ok_or(FiberError::Overflow)?;
                total.set(i, j, v);
            }
        }
    }
    Ok((basis, total))
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let g = gcd(a, b);
            let (a, b) = (a / g, b / g);
            for k in c..cols {
                m[i][k] = m[i][k] * a - m[r][k] * b;
            }
            let g = m[i].iter().fold(0, |acc, &x| gcd(acc, x));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{family, FamilyKind};
    use crate::divide::Divide;
    use crate::fiber::build_fiber;

    fn fiber_of(p: &Divide) -> FiberComplex {
        build_fiber(p, &p.checkerboard(false).unwrap()).unwrap()
    }

    #[test]
    fn torus_with_one_hole() {
        // one vertex, two interleaved loops
        let ribbon = HalfEdgeMap::new(vec![vec![0, 2, 1, 3]], vec![1, 0, 3, 2]).unwrap();
        let basis = HomologyBasis::of_ribbon(&ribbon);
        assert_eq!(basis.rank(), 2);
        let j = basis.form();
        assert_eq!(j.get(0, 1).abs(), 1);
        assert_eq!(j.get(0, 1), -j.get(1, 0));
    }

    #[test]
    fn planar_bouquet_has_zero_form() {
        let ribbon = HalfEdgeMap::new(vec![vec![0, 1, 2, 3]], vec![1, 0, 3, 2]).unwrap();
        let basis = HomologyBasis::of_ribbon(&ribbon);
        assert_eq!(basis.form(), &IntMatrix::zeros(2));
    }

    #[test]
    fn free_loop_monodromy_is_trivial() {
        let p = Divide::free_loop();
        let fiber = fiber_of(&p);
        let word = crate::fiber::monodromy_word(&p).unwrap();
        let (basis, m) = homological_monodromy(&fiber, &word).unwrap();
        assert_eq!(basis.rank(), 1);
        assert_eq!(m, IntMatrix::identity(1));
    }

    #[test]
    fn minimal_genus_one_preserves_form() {
        let p = family(FamilyKind::Minimal, 1).unwrap();
        let fiber = fiber_of(&p);
        let word = crate::fiber::monodromy_word(&p).unwrap();
        let (basis, m) = homological_monodromy(&fiber, &word).unwrap();
        assert_eq!(basis.rank(), 5);
        assert!(m.preserves_form(basis.form()));
    }

    #[test]
    fn foreign_cycles_are_rejected() {
        let p = family(FamilyKind::Minimal, 1).unwrap();
        let fiber = fiber_of(&p);
        let q = family(FamilyKind::BirkhoffFried, 2).unwrap();
        let word = crate::fiber::monodromy_word(&q).unwrap();
        assert_eq!(
            homological_monodromy(&fiber, &word).unwrap_err(),
            FiberError::BasisMismatch
        );
    }

    #[test]
    fn word_product_matches_transvection_matrices() {
        let p = family(FamilyKind::Brunella, 1).unwrap();
        let fiber = fiber_of(&p);
        let word = crate::fiber::monodromy_word(&p).unwrap();
        let (basis, m) = homological_monodromy(&fiber, &word).unwrap();
        let mut expected = IntMatrix::identity(basis.rank());
        for t in &word.twists {
            let step = transvection(&basis, &basis.class_of(&t.cycle), t.positive);
            expected = step.checked_mul(&expected).unwrap();
        }
        assert_eq!(m, expected);
        assert_ne!(m, IntMatrix::identity(basis.rank()));
    }

    #[test]
    fn empty_word_is_the_identity() {
        let p = family(FamilyKind::Minimal, 1).unwrap();
        let fiber = fiber_of(&p);
        let word = MonodromyWord { twists: Vec::new() };
        let (basis, m) = homological_monodromy(&fiber, &word).unwrap();
        assert_eq!(m, IntMatrix::identity(basis.rank()));
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![0, 1], vec![1, 0], vec![1, 1]]), 2);
        assert_eq!(rank(&[]), 0);
    }
}
