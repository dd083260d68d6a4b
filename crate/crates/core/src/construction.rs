//! The n-tetrahedron family and its rank bookkeeping.
//!
//! Tetrahedron `T_i` carries faces `(1,3,2)`, `(4,5,3)`, `(2,6,4)` and
//! `(5,1,6)`. For admissible `n` (`n > 3`, `3 ∤ n`) the faces are glued in
//! `2n` pairs `[(1,3,2)_i, (4,5,3)_{i+1}]` and `[(2,6,4)_i, (5,1,6)_{i+1}]`
//! with indices taken cyclically, keeping the listed edge order.
//!
//! The glued complex has two edge classes of valence `3n` and a single
//! vertex whose link is a closed orientable surface of genus `n - 1`.
//! Removing the edges leaves a handlebody of genus `n + 1`, so the double has
//! rank at most `n + 3` while its reflection fixes the boundary surface group
//! of rank `2n - 2`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::triangulation::{
    boundary_surfaces, dihedral_admissibility, glue, handle_structure, FaceLabel, FacePairing,
    FaceSlot, GluingScheme, TriangulationError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("n = {0} is not admissible (need n > 3 and n not divisible by 3)")]
    Inadmissible(u64),
    #[error("epsilon {0} is outside the open interval (0, 2)")]
    EpsilonOutOfRange(Ratio<i64>),
    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Admissible family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyParams {
    n: u64,
}

impl FamilyParams {
    pub fn new(n: u64) -> Result<Self, FamilyError> {
        if Self::is_admissible(n) {
            Ok(FamilyParams { n })
        } else {
            Err(FamilyError::Inadmissible(n))
        }
    }

    pub fn is_admissible(n: u64) -> bool {
        n > 3 && !n.is_multiple_of(3)
    }

    pub fn n(self) -> u64 {
        self.n
    }

    /// Admissible parameters in `lo..=hi`.
    pub fn range(lo: u64, hi: u64) -> impl Iterator<Item = FamilyParams> {
        (lo..=hi).filter_map(|n| FamilyParams::new(n).ok())
    }
}

const FACE_132: [u8; 3] = [1, 3, 2];
const FACE_453: [u8; 3] = [4, 5, 3];
const FACE_264: [u8; 3] = [2, 6, 4];
const FACE_516: [u8; 3] = [5, 1, 6];

pub fn generate_paper_scheme(params: FamilyParams) -> GluingScheme {
    let n = params.n as usize;
    let face = |e| FaceLabel::new(e).expect("reference face");
    let mut pairings = Vec::with_capacity(2 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        pairings.push(FacePairing::positional(
            FaceSlot::new(i, face(FACE_132)),
            FaceSlot::new(j, face(FACE_453)),
        ));
        pairings.push(FacePairing::positional(
            FaceSlot::new(i, face(FACE_264)),
            FaceSlot::new(j, face(FACE_516)),
        ));
    }
    GluingScheme::new(n, pairings).expect("family pairings are valid")
}

/// One checked claim about the glued family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: &'static str,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl Claim {
    fn check<T: PartialEq + fmt::Display>(name: &'static str, expected: T, observed: T) -> Self {
        Claim {
            name,
            passed: expected == observed,
            expected: expected.to_string(),
            observed: observed.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: u64,
    pub claims: Vec<Claim>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

/// Glues the family member and checks every counting claim about it.
pub fn verify_paper_invariants(params: FamilyParams) -> Result<VerificationReport, FamilyError> {
    let n = params.n;
    let complex = glue(&generate_paper_scheme(params))?;
    let boundary = boundary_surfaces(&complex)?;
    let handles = handle_structure(&complex)?;
    let admissibility = dihedral_admissibility(&complex);

    let mut claims = vec![
        Claim::check("edge classes", 2, complex.edge_classes().len()),
        Claim::check(
            "edge class valences",
            format!("{0},{0}", 3 * n),
            complex
                .edge_classes()
                .iter()
                .map(|e| e.valence().to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        Claim::check("vertex classes", 1, complex.vertex_class_count()),
        Claim::check("orientable", true, complex.orientable()),
        Claim::check("boundary components", 1, boundary.components.len()),
    ];
    if let Some(b) = boundary.components.first() {
        claims.push(Claim::check("boundary orientable", true, b.orientable));
        claims.push(Claim::check("boundary genus", n as i64 - 1, b.genus));
        claims.push(Claim::check("boundary triangles", 4 * n as usize, b.triangles));
        claims.push(Claim::check("boundary edges", 6 * n as usize, b.edges));
    }
    claims.push(Claim::check("handlebody genus", n as usize + 1, handles.handlebody_genus));
    claims.push(Claim::check("two-handles", 2, handles.two_handles));
    claims.push(Claim::check(
        "dihedral angle",
        format!("2pi/{}", 3 * n),
        admissibility
            .iter()
            .map(|a| a.angle.to_string())
            .collect::<Vec<_>>()
            .first()
            .cloned()
            .unwrap_or_default(),
    ));
    claims.push(Claim::check(
        "angle in (0deg, 60deg)",
        true,
        !admissibility.is_empty() && admissibility.iter().all(|a| a.admissible),
    ));
    Ok(VerificationReport { n, claims })
}

/// Rank bookkeeping for the closed double and its cusped variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyStats {
    pub n: u64,
    pub handlebody_genus: u64,
    pub two_handles: u64,
    pub boundary_genus: u64,
    pub rank_upper_closed: u64,
    pub fix_rank_closed: u64,
    pub ratio_closed: Ratio<i64>,
    /// The cusped bound is strict: `rank < n + 4`, stored as `n + 3`.
    pub rank_upper_cusped: u64,
    pub rank_upper_cusped_strict_bound: u64,
    pub fix_rank_cusped: u64,
    pub ratio_cusped: Ratio<i64>,
}

fn stats_from_counts(n: u64, handlebody_genus: u64, two_handles: u64, boundary_genus: u64) -> FamilyStats {
    let rank_upper_closed = handlebody_genus + two_handles;
    // closed orientable genus-g surface group has rank 2g
    let fix_rank_closed = 2 * boundary_genus;
    // removing one non-separating curve from the boundary leaves a twice
    // punctured surface of genus g - 1: free of rank 2(g - 1) + 1
    let fix_rank_cusped = 2 * (boundary_genus - 1) + 1;
    let rank_upper_cusped_strict_bound = rank_upper_closed + 1;
    FamilyStats {
        n,
        handlebody_genus,
        two_handles,
        boundary_genus,
        rank_upper_closed,
        fix_rank_closed,
        ratio_closed: Ratio::new(fix_rank_closed as i64, rank_upper_closed as i64),
        rank_upper_cusped: rank_upper_cusped_strict_bound - 1,
        rank_upper_cusped_strict_bound,
        fix_rank_cusped,
        ratio_cusped: Ratio::new(fix_rank_cusped as i64, rank_upper_cusped_strict_bound as i64),
    }
}

pub fn family_stats(params: FamilyParams) -> FamilyStats {
    let n = params.n;
    stats_from_counts(n, n + 1, 2, n - 1)
}

/// Same statistics, with genus and handle counts read off the glued complex
/// instead of the closed-form expressions.
pub fn family_stats_from_complex(params: FamilyParams) -> Result<FamilyStats, FamilyError> {
    let complex = glue(&generate_paper_scheme(params))?;
    let handles = handle_structure(&complex)?;
    let boundary = boundary_surfaces(&complex)?;
    let genus = boundary.components.first().map(|c| c.genus).unwrap_or(0);
    Ok(stats_from_counts(
        params.n,
        handles.handlebody_genus as u64,
        handles.two_handles as u64,
        genus.max(1) as u64,
    ))
}

/// Smallest admissible `n` whose closed ratio `(2n-2)/(n+3)` exceeds `2 - ε`.
pub fn min_n_for_ratio(epsilon: Ratio<i64>) -> Result<u64, FamilyError> {
    let two = Ratio::from_integer(2);
    if epsilon <= Ratio::zero() || epsilon >= two {
        return Err(FamilyError::EpsilonOutOfRange(epsilon));
    }
    let target = two - epsilon;
    let mut n = 4;
    loop {
        if let Ok(p) = FamilyParams::new(n) {
            if family_stats(p).ratio_closed > target {
                return Ok(n);
            }
        }
        n += 1;
    }
}

/// Parses `0.1`, `1/10` or `3` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Ratio<i64>, FamilyError> {
    let bad = || FamilyError::BadRational(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return Err(bad());
    }
    let mut value = Ratio::from_integer(if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? });
    let mut scale = Ratio::one();
    for d in frac.chars() {
        scale /= 10;
        value += scale * d.to_digit(10).expect("digit") as i64;
    }
    Ok(if neg { -value } else { value })
}
