//! Closed-form page invariants of the open book of an admissible divide, and
//! the Heegaard-genus consistency checks derived from them.

use serde::Serialize;
use thiserror::Error;

use crate::divide::{Divide, DivideError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("binding number bounds need genus at least 2, got {0}")]
    GenusTooSmall(u32),
}

/// Topology of a page: `binding_components` boundary circles, Euler
/// characteristic and genus, together with the genus of the base surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PageInvariants {
    pub binding_components: u32,
    pub euler_char: i64,
    pub genus: u32,
    pub ambient_genus: u32,
}

impl PageInvariants {
    /// Page data from the circle count `c`, double point count `v` and the
    /// genus `g` of the surface. The page has `2c` boundary components,
    /// Euler characteristic `-2v` and genus `1 + v - c`.
    ///
    /// Returns `None` when `1 + v - c` is negative, which no admissible divide
    /// produces.
    pub fn from_counts(circles: u32, double_points: u32, ambient_genus: u32) -> Option<Self> {
        let genus = (1 + double_points).checked_sub(circles)?;
        Some(Self {
            binding_components: 2 * circles,
            euler_char: -2 * double_points as i64,
            genus,
            ambient_genus,
        })
    }

    /// `2 - 2h - k`, which must agree with `euler_char`.
    pub fn euler_char_from_genus(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.binding_components as i64
    }

    /// Same numbers for the open book built from a convex Morse function on
    /// the bundle of cooriented lines: it also has `2c` binding components and
    /// the same page genus.
    pub fn convex_morse_count(circles: u32, double_points: u32, ambient_genus: u32) -> Option<Self> {
        Self::from_counts(circles, double_points, ambient_genus)
    }
}

pub fn page_invariants(divide: &Divide) -> Result<PageInvariants, InvariantError> {
    divide.require_admissible()?;
    let ambient_genus = divide.ambient_genus()?;
    let inv = PageInvariants::from_counts(
        divide.circle_count() as u32,
        divide.double_points() as u32,
        ambient_genus,
    )
    .expect("admissible divides have c <= v + 1");
    Ok(inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeegaardData {
    /// `2h + k - 1`: genus of the union of two pages along the binding.
    pub heegaard_genus_from_openbook: i64,
    /// `2g + 1`: Heegaard genus of the unit cotangent bundle.
    pub heegaard_genus_lower_bound: i64,
}

impl HeegaardData {
    pub fn from_page(page: &PageInvariants) -> Self {
        Self {
            heegaard_genus_from_openbook: 2 * page.genus as i64
                + page.binding_components as i64
                - 1,
            heegaard_genus_lower_bound: 2 * page.ambient_genus as i64 + 1,
        }
    }

    pub fn consistent(&self) -> bool {
        self.heegaard_genus_from_openbook >= self.heegaard_genus_lower_bound
    }
}

/// Heegaard genera induced by the open book and the lower bound `2g + 1`,
/// and whether the first dominates the second (equivalently `v >= g`).
///
/// For `g = 0` and `g = 1` the bound `2g + 1` is also used; it is the
/// Heegaard genus of `RP^3` and `T^3` respectively.
pub fn heegaard_check(divide: &Divide) -> Result<(HeegaardData, bool), InvariantError> {
    let page = page_invariants(divide)?;
    let data = HeegaardData::from_page(&page);
    Ok((data, data.consistent()))
}

/// Lower and upper bounds `(2g, 4g)` on the binding number of the canonical
/// contact structure on the unit cotangent bundle of a genus `g >= 2`
/// surface.
pub fn binding_number_bounds(genus: u32) -> Result<(u32, u32), InvariantError> {
    if genus < 2 {
        return Err(InvariantError::GenusTooSmall(genus));
    }
    Ok((2 * genus, 4 * genus))
}
