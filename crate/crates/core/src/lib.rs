//! Curves `C = pi^{-1}(H)` in `(1,d)`-polarized abelian surfaces, modelled through
//! finite torsion data: fixed points of the involutions `[-1] ∘ t_x`, genera of
//! quotients, and Jacobian splittings from partitions of `<-1> ⋊ X`.

pub mod curve;
pub mod engine;
pub mod error;
pub mod group;
pub mod isogeny;
pub mod parity;
pub mod polarization;
pub mod report;
pub mod snf;
pub mod torsion;
pub mod verify;

pub use curve::{
    fix_count, hyperelliptic_census, involution_quotient_genus, CensusReport, CensusTerm, CoverCurve, FixBranch,
    FixReport,
};
pub use engine::{
    automorphism_group, decompose, elliptic_cover_report, AutElement, AutGroup, DecomposeOptions, Decomposition,
    EllipticCoverReport, Verdict,
};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Partition};
pub use isogeny::{IsogenyExpression, IsogenyFactor, Relation};
pub use parity::{LinearSystemProfile, Parity, StsStatus};
pub use polarization::{PairingValue, PolarizationContext, QuotientModel};
pub use report::{analyze, census, parse_subgroup, report_from_json, CensusDocument, ReportDocument};
pub use torsion::{point_order, span, FiniteSubgroup, Rational01, TorsionPoint};
pub use verify::{verify_all, FixtureResult};
