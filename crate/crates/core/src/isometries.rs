//! Isometries of hyperbolic 3-space acting on the sphere at infinity.
//!
//! An isometry is a matrix in `SL(2, C)`, taken up to sign, together with a
//! flag for orientation reversal: `z ↦ M·z` or `z ↦ M·conj(z)`. Composition
//! follows `(M, r)∘(N, s) = (M·N^r, r xor s)` where `N^r` is `conj(N)` when
//! `r` is set, entrywise.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

pub type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsometryError {
    #[error("matrix is singular (|det| = {0:e})")]
    Singular(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("cannot parse matrix {0:?}: expected \"a,b;c,d\" with entries like 1.5-2i")]
    Parse(String),
    #[error("operation needs an orientation-preserving isometry")]
    Reversing,
    #[error("operation needs a non-trivial isometry")]
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    tol: f64,
}

impl Tolerance {
    pub fn new(tol: f64) -> Result<Self, IsometryError> {
        if tol > 0.0 && tol.is_finite() {
            Ok(Tolerance { tol })
        } else {
            Err(IsometryError::BadTolerance(tol))
        }
    }

    pub fn value(self) -> f64 {
        self.tol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { tol: 1e-9 }
    }
}

pub type Mat = [[C; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Mat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn conj(a: &Mat) -> Mat {
    [[a[0][0].conj(), a[0][1].conj()], [a[1][0].conj(), a[1][1].conj()]]
}

fn det(a: &Mat) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn max_dist(a: &Mat, b: &Mat, sign: f64) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j] * sign).norm());
        }
    }
    d
}

/// Point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(C),
    Infinity,
}

impl BoundaryPoint {
    fn from_homogeneous(num: C, den: C) -> BoundaryPoint {
        if den.norm() <= 1e-300 || (num / den).norm().is_infinite() {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(num / den)
        }
    }

    fn homogeneous(self) -> (C, C) {
        match self {
            BoundaryPoint::Finite(z) => (z, ONE),
            BoundaryPoint::Infinity => (ONE, ZERO),
        }
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(self, other: BoundaryPoint) -> f64 {
        let (a, b) = self.homogeneous();
        let (c, d) = other.homogeneous();
        let cross = (a * d - b * c).norm();
        let na = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let nc = (c.norm_sqr() + d.norm_sqr()).sqrt();
        2.0 * cross / (na * nc)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(z) => write!(f, "{}", format_complex(*z)),
            BoundaryPoint::Infinity => f.write_str("inf"),
        }
    }
}

pub fn format_complex(z: C) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

pub fn parse_complex(s: &str) -> Result<C, IsometryError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    C::from_str(&compact).map_err(|_| IsometryError::Parse(s.to_string()))
}

/// A hyperbolic isometry with determinant normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: Mat,
    reversing: bool,
}

impl Isometry {
    /// Normalizes `m` to determinant 1.
    pub fn new(m: Mat, reversing: bool) -> Result<Self, IsometryError> {
        let d = det(&m);
        let scale = d.norm().max(m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>());
        if d.norm() <= 1e-14 * scale || !d.norm().is_normal() {
            return Err(IsometryError::Singular(d.norm()));
        }
        let s = d.sqrt();
        let m = [[m[0][0] / s, m[0][1] / s], [m[1][0] / s, m[1][1] / s]];
        Ok(Isometry { m, reversing })
    }

    pub fn preserving(m: Mat) -> Result<Self, IsometryError> {
        Isometry::new(m, false)
    }

    pub fn identity() -> Self {
        Isometry {
            m: [[ONE, ZERO], [ZERO, ONE]],
            reversing: false,
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn is_reversing(&self) -> bool {
        self.reversing
    }

    pub fn trace(&self) -> C {
        self.m[0][0] + self.m[1][1]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let rhs = if self.reversing { conj(&other.m) } else { other.m };
        Isometry {
            m: mul(&self.m, &rhs),
            reversing: self.reversing ^ other.reversing,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        let inv = [[d, -b], [-c, a]];
        Isometry {
            m: if self.reversing { conj(&inv) } else { inv },
            reversing: self.reversing,
        }
    }

    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose(self).compose(&h.inverse())
    }

    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (x, y) = p.homogeneous();
        let (x, y) = if self.reversing { (x.conj(), y.conj()) } else { (x, y) };
        let [[a, b], [c, d]] = self.m;
        BoundaryPoint::from_homogeneous(a * x + b * y, c * x + d * y)
    }

    /// Equality in the quotient by `±I`.
    pub fn approx_eq(&self, other: &Isometry, tol: Tolerance) -> bool {
        self.reversing == other.reversing
            && (max_dist(&self.m, &other.m, 1.0) <= tol.tol || max_dist(&self.m, &other.m, -1.0) <= tol.tol)
    }

    pub fn is_identity(&self, tol: Tolerance) -> bool {
        self.approx_eq(&Isometry::identity(), tol)
    }
}

impl FromStr for Isometry {
    type Err = IsometryError;

    /// `"a,b;c,d"`, orientation preserving.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IsometryError::Parse(s.to_string());
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(bad());
            }
            for (j, e) in cols.iter().enumerate() {
                m[i][j] = parse_complex(e).map_err(|_| bad())?;
            }
        }
        Isometry::new(m, false)
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |i: usize, j: usize| format_complex(self.m[i][j]);
        write!(f, "[[{},{}],[{},{}]]", e(0, 0), e(0, 1), e(1, 0), e(1, 1))?;
        if self.reversing {
            f.write_str(" rev")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementClass::Identity => "identity",
            ElementClass::Elliptic => "elliptic",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Loxodromic => "loxodromic",
        })
    }
}

pub fn classify(g: &Isometry, tol: Tolerance) -> Result<ElementClass, IsometryError> {
    if g.reversing {
        return Err(IsometryError::Reversing);
    }
    if g.is_identity(tol) {
        return Ok(ElementClass::Identity);
    }
    let t2 = g.trace() * g.trace();
    Ok(if (t2 - 4.0).norm() <= tol.tol {
        ElementClass::Parabolic
    } else if t2.im.abs() <= tol.tol && t2.re >= -tol.tol && t2.re < 4.0 {
        ElementClass::Elliptic
    } else {
        ElementClass::Loxodromic
    })
}

/// Generalized circle on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Circle {
    Round { center: C, radius: f64 },
    /// Line through `point` with unit `direction`, closed up by `∞`.
    Line { point: C, direction: C },
}

impl Circle {
    pub fn contains(&self, p: BoundaryPoint, tol: f64) -> bool {
        match (self, p) {
            (Circle::Round { .. }, BoundaryPoint::Infinity) => false,
            (Circle::Line { .. }, BoundaryPoint::Infinity) => true,
            (Circle::Round { center, radius }, BoundaryPoint::Finite(z)) => {
                ((z - center).norm() - radius).abs() <= tol * (1.0 + radius)
            }
            (Circle::Line { point, direction }, BoundaryPoint::Finite(z)) => {
                ((z - point) * direction.conj()).im.abs() <= tol * (1.0 + (z - point).norm())
            }
        }
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Circle::Round { center, radius } => {
                write!(f, "circle(center={}, radius={radius})", format_complex(*center))
            }
            Circle::Line { point, direction } => write!(
                f,
                "line(through={}, direction={})",
                format_complex(*point),
                format_complex(*direction)
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvolutionKind {
    /// Fixes one interior point and no boundary point.
    PointReflection,
    /// Fixes a totally geodesic plane, meeting the boundary in a circle.
    PlaneReflection(Circle),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedSet {
    All,
    Points(Vec<BoundaryPoint>),
    Circle(Circle),
}

impl FixedSet {
    pub fn points(&self) -> &[BoundaryPoint] {
        match self {
            FixedSet::Points(p) => p,
            _ => &[],
        }
    }
}

impl fmt::Display for FixedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedSet::All => f.write_str("all"),
            FixedSet::Points(p) if p.is_empty() => f.write_str("{}"),
            FixedSet::Points(p) => {
                let s: Vec<String> = p.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", s.join(", "))
            }
            FixedSet::Circle(c) => write!(f, "{c}"),
        }
    }
}

/// Roots of `c z² + (d - a) z - b = 0` on the sphere.
fn mobius_fixed_points(g: &Isometry, parabolic: bool) -> Vec<BoundaryPoint> {
    let [[a, b], [c, d]] = g.m;
    let scale = g.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if c.norm() <= 1e-14 * scale {
        if parabolic {
            return vec![BoundaryPoint::Infinity];
        }
        return vec![BoundaryPoint::Finite(b / (d - a)), BoundaryPoint::Infinity];
    }
    if parabolic {
        return vec![BoundaryPoint::Finite((a - d) / (2.0 * c))];
    }
    let disc = ((a + d) * (a + d) - 4.0).sqrt();
    vec![
        BoundaryPoint::Finite((a - d + disc) / (2.0 * c)),
        BoundaryPoint::Finite((a - d - disc) / (2.0 * c)),
    ]
}

/// `Some(kind)` when `g` is orientation reversing with `g² = ±I`.
pub fn involution_kind(g: &Isometry, tol: Tolerance) -> Option<InvolutionKind> {
    if !g.reversing || !g.compose(g).is_identity(tol) {
        return None;
    }
    // M·conj(M) = s·I with s = ±1 once det M = 1
    let s = mul(&g.m, &conj(&g.m))[0][0];
    if s.re < 0.0 {
        return Some(InvolutionKind::PointReflection);
    }
    Some(InvolutionKind::PlaneReflection(reflection_circle(g)))
}

fn reflection_circle(g: &Isometry) -> Circle {
    match g.apply(BoundaryPoint::Infinity) {
        BoundaryPoint::Finite(center) => {
            // inversion: |g(p) - c|·|p - c| = r² for every p ≠ c
            let p = center + ONE;
            let gp = match g.apply(BoundaryPoint::Finite(p)) {
                BoundaryPoint::Finite(z) => z,
                BoundaryPoint::Infinity => p,
            };
            let radius = ((gp - center).norm() * (p - center).norm()).sqrt();
            Circle::Round { center, radius }
        }
        BoundaryPoint::Infinity => {
            let probes = [ZERO, ONE, C::new(0.0, 1.0)];
            let (p, gp) = probes
                .iter()
                .map(|&p| match g.apply(BoundaryPoint::Finite(p)) {
                    BoundaryPoint::Finite(z) => (p, z),
                    BoundaryPoint::Infinity => (p, p),
                })
                .max_by(|x, y| (x.1 - x.0).norm().total_cmp(&(y.1 - y.0).norm()))
                .expect("probes");
            let normal = gp - p;
            if normal.norm() == 0.0 {
                // every probe fixed: the real axis direction through 0 and 1
                return Circle::Line { point: ZERO, direction: ONE };
            }
            let direction = C::new(0.0, 1.0) * normal / normal.norm();
            Circle::Line {
                point: (p + gp) / 2.0,
                direction,
            }
        }
    }
}

pub fn fixed_points(g: &Isometry, tol: Tolerance) -> FixedSet {
    if !g.reversing {
        return match classify(g, tol).expect("orientation preserving") {
            ElementClass::Identity => FixedSet::All,
            class => FixedSet::Points(mobius_fixed_points(g, class == ElementClass::Parabolic)),
        };
    }
    match involution_kind(g, tol) {
        Some(InvolutionKind::PointReflection) => FixedSet::Points(Vec::new()),
        Some(InvolutionKind::PlaneReflection(c)) => FixedSet::Circle(c),
        None => {
            // fixed points of g lie among those of the preserving map g²
            let sq = g.compose(g);
            let class = classify(&sq, tol).expect("preserving square");
            let candidates = mobius_fixed_points(&sq, class == ElementClass::Parabolic);
            FixedSet::Points(
                candidates
                    .into_iter()
                    .filter(|&p| g.apply(p).chordal_distance(p) <= tol.tol.sqrt())
                    .collect(),
            )
        }
    }
}

/// Whether the commutator `a b a⁻¹ b⁻¹` is `±I`.
pub fn commute(a: &Isometry, b: &Isometry, tol: Tolerance) -> bool {
    a.compose(b)
        .compose(&a.inverse())
        .compose(&b.inverse())
        .is_identity(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommutingCase {
    SharedParabolicPoint,
    SharedAxis,
    PerpendicularPiRotations,
    None,
}

impl fmt::Display for CommutingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommutingCase::SharedParabolicPoint => "shared_parabolic_point",
            CommutingCase::SharedAxis => "shared_axis",
            CommutingCase::PerpendicularPiRotations => "perpendicular_pi_rotations",
            CommutingCase::None => "none",
        })
    }
}

fn same_point_set(p: &[BoundaryPoint], q: &[BoundaryPoint], tol: f64) -> bool {
    p.len() == q.len()
        && p.iter().all(|x| q.iter().any(|y| x.chordal_distance(*y) <= tol))
        && q.iter().all(|y| p.iter().any(|x| x.chordal_distance(*y) <= tol))
}

/// How far `(a, b)` is from each geometric commuting configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionResiduals {
    /// Hausdorff chordal distance between the two fixed-point sets, or
    /// `∞` when their sizes differ.
    pub fixed_sets: f64,
    /// Largest of `|tr a|`, `|tr b|` and the residuals of each map swapping
    /// the other's fixed points, or `∞` when not both have two fixed points.
    pub pi_rotations: f64,
}

impl CriterionResiduals {
    pub fn min(&self) -> f64 {
        self.fixed_sets.min(self.pi_rotations)
    }
}

fn swap_residual(g: &Isometry, pts: &[BoundaryPoint]) -> f64 {
    g.apply(pts[0])
        .chordal_distance(pts[1])
        .max(g.apply(pts[1]).chordal_distance(pts[0]))
}

pub fn criterion_residuals(a: &Isometry, b: &Isometry, tol: Tolerance) -> Result<CriterionResiduals, IsometryError> {
    let (fa, fb) = nontrivial_fixed_points(a, b, tol)?;
    let (pa, pb) = (fa.points(), fb.points());
    let fixed_sets = if pa.len() != pb.len() {
        f64::INFINITY
    } else {
        let one_way = |p: &[BoundaryPoint], q: &[BoundaryPoint]| {
            p.iter()
                .map(|x| q.iter().map(|y| x.chordal_distance(*y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one_way(pa, pb).max(one_way(pb, pa))
    };
    let pi_rotations = if pa.len() == 2 && pb.len() == 2 {
        a.trace()
            .norm()
            .max(b.trace().norm())
            .max(swap_residual(a, pb))
            .max(swap_residual(b, pa))
    } else {
        f64::INFINITY
    };
    Ok(CriterionResiduals { fixed_sets, pi_rotations })
}

fn nontrivial_fixed_points(a: &Isometry, b: &Isometry, tol: Tolerance) -> Result<(FixedSet, FixedSet), IsometryError> {
    if a.reversing || b.reversing {
        return Err(IsometryError::Reversing);
    }
    if a.is_identity(tol) || b.is_identity(tol) {
        return Err(IsometryError::Trivial);
    }
    Ok((fixed_points(a, tol), fixed_points(b, tol)))
}

/// Which geometric configuration makes `a` and `b` commute, if any.
pub fn commuting_criterion(a: &Isometry, b: &Isometry, tol: Tolerance) -> Result<CommutingCase, IsometryError> {
    let (fa, fb) = nontrivial_fixed_points(a, b, tol)?;
    let (pa, pb) = (fa.points(), fb.points());
    // fixed points carry the rounding of a square root, so they are compared
    // at a looser scale than matrix entries
    let ptol = 1e3 * tol.tol;
    if same_point_set(pa, pb, ptol) {
        let parabolic = classify(a, tol)? == ElementClass::Parabolic && classify(b, tol)? == ElementClass::Parabolic;
        return Ok(if parabolic {
            CommutingCase::SharedParabolicPoint
        } else {
            CommutingCase::SharedAxis
        });
    }
    let r = criterion_residuals(a, b, tol)?;
    if r.pi_rotations <= ptol {
        return Ok(CommutingCase::PerpendicularPiRotations);
    }
    Ok(CommutingCase::None)
}

/// Possible isomorphism types of a fixed subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixType {
    Trivial,
    Cyclic,
    FreeAbelianRank2,
    SurfaceGroup,
    Whole,
}

impl fmt::Display for FixType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixType::Trivial => "e",
            FixType::Cyclic => "Z",
            FixType::FreeAbelianRank2 => "Z+Z",
            FixType::SurfaceGroup => "pi1(S)",
            FixType::Whole => "G",
        })
    }
}

/// Fixed-subgroup types allowed for an automorphism of the fundamental
/// group of a finite-volume hyperbolic 3-manifold, induced by an isometry.
pub fn fix_type_table(orientation_preserving: bool, phi_squared_identity: bool, manifold_closed: bool) -> BTreeSet<FixType> {
    use FixType::*;
    let v: &[FixType] = match (orientation_preserving, phi_squared_identity, manifold_closed) {
        (true, _, true) => &[Cyclic, Whole],
        (true, _, false) => &[Trivial, Cyclic, FreeAbelianRank2, Whole],
        (false, false, _) => &[Trivial, Cyclic],
        (false, true, _) => &[Trivial, SurfaceGroup],
    };
    v.iter().copied().collect()
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> C {
    C::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random orientation-preserving isometry with entries of moderate size.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R) -> Isometry {
    loop {
        let m = [
            [random_complex(rng, 2.0), random_complex(rng, 2.0)],
            [random_complex(rng, 2.0), random_complex(rng, 2.0)],
        ];
        if det(&m).norm() > 0.25 {
            if let Ok(g) = Isometry::preserving(m) {
                return g;
            }
        }
    }
}

fn unit_or_far<R: Rng + ?Sized>(rng: &mut R) -> C {
    // multiplier kept away from ±1 and ±i so the pair is non-degenerate
    loop {
        let z = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        if (z - 1.0).norm() > 0.2 && (z + 1.0).norm() > 0.2 && (z * z + 1.0).norm() > 0.2 {
            return z;
        }
    }
}

/// A commuting pair realizing the given configuration, conjugated by a
/// random isometry.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R, case: CommutingCase) -> Option<(Isometry, Isometry)> {
    let (a, b) = match case {
        CommutingCase::SharedParabolicPoint => {
            let s = unit_or_far(rng) * rng.gen_range(0.5..2.0);
            let t = unit_or_far(rng) * rng.gen_range(0.5..2.0);
            (
                Isometry::preserving([[ONE, s], [ZERO, ONE]]).ok()?,
                Isometry::preserving([[ONE, t], [ZERO, ONE]]).ok()?,
            )
        }
        CommutingCase::SharedAxis => {
            let l = unit_or_far(rng);
            let m = unit_or_far(rng);
            (
                Isometry::preserving([[l, ZERO], [ZERO, l.inv()]]).ok()?,
                Isometry::preserving([[m, ZERO], [ZERO, m.inv()]]).ok()?,
            )
        }
        CommutingCase::PerpendicularPiRotations => {
            let w = unit_or_far(rng);
            (
                Isometry::preserving([[C::new(0.0, 1.0), ZERO], [ZERO, C::new(0.0, -1.0)]]).ok()?,
                Isometry::preserving([[ZERO, w], [-w.inv(), ZERO]]).ok()?,
            )
        }
        CommutingCase::None => return None,
    };
    let h = random_isometry(rng);
    Some((a.conjugate_by(&h), b.conjugate_by(&h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(s: &str) -> Isometry {
        s.parse().unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&iso("1,1;0,1"), tol()), Ok(ElementClass::Parabolic));
        assert_eq!(classify(&iso("2,0;0,0.5"), tol()), Ok(ElementClass::Loxodromic));
        assert_eq!(classify(&iso("i,0;0,-i"), tol()), Ok(ElementClass::Elliptic));
        assert_eq!(classify(&iso("-1,0;0,-1"), tol()), Ok(ElementClass::Identity));
        assert_eq!(classify(&iso("2,0;0,2"), tol()), Ok(ElementClass::Identity));
        assert!(matches!("1,2;2,4".parse::<Isometry>(), Err(IsometryError::Singular(_))));
        assert!("1,2;3".parse::<Isometry>().is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&iso("1,1;0,1"), tol()), FixedSet::Points(vec![BoundaryPoint::Infinity]));
        let f = fixed_points(&iso("2,0;0,0.5"), tol());
        assert!(same_point_set(
            f.points(),
            &[BoundaryPoint::Finite(ZERO), BoundaryPoint::Infinity],
            1e-12
        ));
        let antipodal = Isometry::new([[ZERO, -ONE], [ONE, ZERO]], true).unwrap();
        assert_eq!(involution_kind(&antipodal, tol()), Some(InvolutionKind::PointReflection));
        assert_eq!(fixed_points(&antipodal, tol()), FixedSet::Points(vec![]));
    }

    #[test]
    fn plane_reflections() {
        let conj_map = Isometry::new([[ONE, ZERO], [ZERO, ONE]], true).unwrap();
        match fixed_points(&conj_map, tol()) {
            FixedSet::Circle(c @ Circle::Line { .. }) => {
                assert!(c.contains(BoundaryPoint::Finite(C::new(3.0, 0.0)), 1e-12));
                assert!(!c.contains(BoundaryPoint::Finite(C::new(0.0, 1.0)), 1e-12));
            }
            other => panic!("{other:?}"),
        }
        let inversion = Isometry::new([[ZERO, ONE], [ONE, ZERO]], true).unwrap();
        match fixed_points(&inversion, tol()) {
            FixedSet::Circle(Circle::Round { center, radius }) => {
                assert!(center.norm() < 1e-12);
                assert!((radius - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn composition_with_reversal() {
        let r = Isometry::new([[ONE, ZERO], [ZERO, ONE]], true).unwrap();
        let g = iso("1,i;0,1");
        let z = BoundaryPoint::Finite(C::new(0.3, 0.7));
        let lhs = r.compose(&g).apply(z);
        let rhs = r.apply(g.apply(z));
        assert!(lhs.chordal_distance(rhs) < 1e-12);
        assert!(r.compose(&g).compose(&r.compose(&g).inverse()).is_identity(tol()));
    }

    #[test]
    fn commuting_examples() {
        let t = tol();
        assert!(commute(&iso("2,0;0,0.5"), &iso("3i,0;0,-0.3333333333333333i"), t));
        assert!(commute(&iso("1,1;0,1"), &iso("1,i;0,1"), t));
        let (a, b) = (iso("i,0;0,-i"), iso("0,1;-1,0"));
        assert!(commute(&a, &b, t));
        assert_eq!(commuting_criterion(&a, &b, t), Ok(CommutingCase::PerpendicularPiRotations));
        assert_eq!(
            commuting_criterion(&iso("2,0;0,0.5"), &iso("3,0;0,0.3333333333333333"), t),
            Ok(CommutingCase::SharedAxis)
        );
        assert_eq!(
            commuting_criterion(&iso("1,1;0,1"), &iso("1,i;0,1"), t),
            Ok(CommutingCase::SharedParabolicPoint)
        );
        assert!(!commute(&iso("1,1;0,1"), &iso("1,0;1,1"), t));
        assert_eq!(commuting_criterion(&iso("1,1;0,1"), &iso("1,0;1,1"), t), Ok(CommutingCase::None));
    }

    #[test]
    fn decision_table() {
        let show = |s: BTreeSet<FixType>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(show(fix_type_table(true, false, true)), "Z,G");
        assert_eq!(show(fix_type_table(true, true, false)), "e,Z,Z+Z,G");
        assert_eq!(show(fix_type_table(false, false, true)), "e,Z");
        assert_eq!(show(fix_type_table(false, true, false)), "e,pi1(S)");
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2.5-3i").unwrap(), C::new(2.5, -3.0));
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), C::new(1.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
        assert_eq!(format_complex(C::new(1.0, -2.0)), "1-2i");
        assert!(Tolerance::new(0.0).is_err());
    }
}
