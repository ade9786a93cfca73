//! Symmetric linear systems: eigenspace dimensions, symmetry and theta
//! structures of translated bundles, and the parity of `t*_{pi(-y)} M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::{PolarizationContext, QuotientModel};
use crate::torsion::{full_torsion, TorsionPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Eigenvalue of `[-1]^*` on the class of the translated curve.
    pub fn eigenvalue(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StsStatus {
    HasSts,
    NoSts,
}

/// `h0(A,L)^+`, `h0(A,L)^-` and the sizes of the base loci `A[2]^-`, `A[2]^+`.
///
/// A smooth curve in the `+` system has `fix_minus` fixed points under `[-1]`,
/// one in the `-` system has `fix_plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemProfile {
    pub h_plus: u64,
    pub h_minus: u64,
    pub fix_minus: u64,
    pub fix_plus: u64,
}

impl LinearSystemProfile {
    /// Fixed points of `[-1]` on a smooth curve whose class has this eigenvalue.
    pub fn fixed_points(&self, eigenvalue: i8) -> u64 {
        if eigenvalue > 0 {
            self.fix_minus
        } else {
            self.fix_plus
        }
    }
}

pub fn profile_lookup(d: u64, sts: StsStatus, parity: Parity) -> Result<LinearSystemProfile> {
    if d == 0 {
        return Err(Error::domain("d must be positive"));
    }
    let p = |h_plus, h_minus, fix_minus, fix_plus| LinearSystemProfile { h_plus, h_minus, fix_minus, fix_plus };
    let profile = match (d % 2 == 1, sts, parity) {
        (true, StsStatus::NoSts, _) => {
            return Err(Error::domain("for odd d every symmetric bundle has a symmetric theta structure"))
        }
        (true, StsStatus::HasSts, Parity::Even) => p((d + 1) / 2, (d - 1) / 2, 6, 10),
        (true, StsStatus::HasSts, Parity::Odd) => p((d - 1) / 2, (d + 1) / 2, 10, 6),
        (false, StsStatus::HasSts, Parity::Even) => p(d / 2 + 1, d / 2 - 1, 4, 12),
        (false, StsStatus::HasSts, Parity::Odd) => p(d / 2 - 1, d / 2 + 1, 12, 4),
        (false, StsStatus::NoSts, _) => p(d / 2, d / 2, 8, 8),
    };
    Ok(profile)
}

/// `t_y^* L` is symmetric iff `2y` lies in `K(L)`.
pub fn symmetric_after_translate(ctx: &PolarizationContext, y: TorsionPoint) -> bool {
    ctx.in_kernel(&y.double())
}

/// `t_y^* L` has a symmetric theta structure iff `y` lies in `A[2] + K(L)`.
pub fn sts_after_translate(ctx: &PolarizationContext, y: TorsionPoint) -> Result<StsStatus> {
    if !symmetric_after_translate(ctx, y) {
        return Err(Error::domain(format!("t_y^*L is not symmetric for y = {y}")));
    }
    let two_torsion = full_torsion(2);
    let hit = two_torsion.elements().iter().any(|&z| ctx.in_kernel(&(y - z)));
    Ok(if hit { StsStatus::HasSts } else { StsStatus::NoSts })
}

/// Parity of `t*_{pi(-y)} M` with the point `pi(-y)` it was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityEvidence {
    pub y: TorsionPoint,
    pub image: TorsionPoint,
    pub parity: Parity,
}

/// `pi(-y)` in `{0, w1, w2}` gives an even bundle, `w1 + w2` an odd one.
///
/// Requires `y` in `K(L)` and `2y` in `X`. Anything else in the image would
/// contradict `pi(K(L)) ∩ (A/X)[2] ⊆ <w1> + <w2>` and is reported as an
/// invariant violation.
pub fn translated_m_parity(q: &QuotientModel, y: TorsionPoint) -> Result<ParityEvidence> {
    let ctx = q.base();
    if !ctx.in_kernel(&y) {
        return Err(Error::domain(format!("{y} is not in K(L)")));
    }
    if !q.subgroup().contains(&y.double()) {
        return Err(Error::domain(format!("2 * {y} is not in X")));
    }
    let image = q.project(-y);
    let parity = if image.is_zero() || Some(image) == q.w1() || Some(image) == q.w2() {
        Parity::Even
    } else if Some(image) == q.w_sum() {
        Parity::Odd
    } else {
        return Err(Error::invariant(format!("pi(-y) = {image} for y = {y} lies outside <w1> + <w2>")));
    };
    Ok(ParityEvidence { y, image, parity })
}
