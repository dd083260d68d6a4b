//! Rank inequality chains for a surface fixed by an orientation-reversing
//! involution.
//!
//! A case describes a properly embedded surface `S` of genus `g` with `k`
//! boundary circles in a hyperbolic 3-manifold `M`: `m` pairs of circles
//! share a torus cusp and `l` circles sit alone in their cusp, so
//! `k = 2m + l`. Each chain bounds `2·rk π₁(M)` from below and compares the
//! result with `rk π₁(S)`. Steps resting on results that cannot be computed
//! here are marked as assumed.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("covering degree must be positive")]
    ZeroDegree,
    #[error("a non-orientable surface needs genus at least 1")]
    NonOrientableGenusZero,
    #[error("k = {k} but 2m + l = {sum}")]
    BoundaryCount { k: u64, sum: u64 },
    #[error("a separating surface has no singly placed circles (l = {0})")]
    SeparatingWithSingles(u64),
    #[error("a non-orientable fixed surface is never separating")]
    NonOrientableSeparating,
    #[error("same_component only applies to an orientable non-separating surface")]
    SameComponentMisplaced,
    #[error("both copies of S lie in one boundary component only when k > 0")]
    SameComponentClosed,
    #[error("copies of S in different boundary components force l = 0 (l = {0})")]
    DifferentComponentsWithSingles(u64),
}

/// `(rank_h + n - 1) / n`: the least rank of a group containing a subgroup
/// of rank `rank_h` and index `n`.
pub fn covering_rank_bound(rank_h: u64, n: u64) -> Result<Ratio<i64>, AuditError> {
    if n == 0 {
        return Err(AuditError::ZeroDegree);
    }
    Ok(Ratio::new((rank_h + n - 1) as i64, n as i64))
}

/// Rank of the fundamental group of a compact surface of genus `g` with `k`
/// boundary circles.
pub fn surface_rank(g: u64, k: u64, orientable: bool) -> Result<u64, AuditError> {
    match (orientable, k) {
        (true, 0) => Ok(2 * g),
        (true, _) => Ok(2 * g + k - 1),
        (false, _) if g == 0 => Err(AuditError::NonOrientableGenusZero),
        (false, 0) => Ok(g),
        (false, _) => Ok(g + k - 1),
    }
}

/// Rank lower bound from an `n`-sheeted cover in which a genus-`g` boundary
/// surface lifts to `m` components: `(n(g-1) + m + n - 1) / n = g + (m-1)/n`.
pub fn genus_excess_bound(g: u64, m: u64, n: u64) -> Result<Ratio<i64>, AuditError> {
    if n == 0 {
        return Err(AuditError::ZeroDegree);
    }
    let rank_h = n as i64 * (g as i64 - 1) + m as i64;
    Ok(Ratio::new(rank_h + n as i64 - 1, n as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankAuditCase {
    pub g: u64,
    pub k: u64,
    pub m: u64,
    pub l: u64,
    pub orientable: bool,
    pub separating: bool,
    pub same_component: bool,
}

impl RankAuditCase {
    /// Case with `k = 2m + l`.
    pub fn new(g: u64, m: u64, l: u64, orientable: bool, separating: bool, same_component: bool) -> Self {
        RankAuditCase {
            g,
            k: 2 * m + l,
            m,
            l,
            orientable,
            separating,
            same_component,
        }
    }

    pub fn validate(&self) -> Result<(), AuditError> {
        if self.k != 2 * self.m + self.l {
            return Err(AuditError::BoundaryCount {
                k: self.k,
                sum: 2 * self.m + self.l,
            });
        }
        if !self.orientable && self.g == 0 {
            return Err(AuditError::NonOrientableGenusZero);
        }
        if !self.orientable && self.separating {
            return Err(AuditError::NonOrientableSeparating);
        }
        if self.separating && self.l != 0 {
            return Err(AuditError::SeparatingWithSingles(self.l));
        }
        if self.same_component && (!self.orientable || self.separating) {
            return Err(AuditError::SameComponentMisplaced);
        }
        if self.same_component && self.k == 0 {
            return Err(AuditError::SameComponentClosed);
        }
        if self.orientable && !self.separating && !self.same_component && self.l != 0 {
            return Err(AuditError::DifferentComponentsWithSingles(self.l));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

/// `quantity relation value`, justified by `anchor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditStep {
    pub anchor: &'static str,
    pub quantity: String,
    pub relation: Relation,
    pub value: Ratio<i64>,
    pub expression: String,
    pub assumed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub case: RankAuditCase,
    pub steps: Vec<AuditStep>,
    pub surface_rank: u64,
    /// Final lower bound on `2·rk π₁(M)`.
    pub final_value: Ratio<i64>,
    /// Whether some step of the final chain is itself strict.
    pub strict_step: Option<&'static str>,
}

impl AuditReport {
    /// `2·rk π₁(M) > rk π₁(S)` follows from the chain.
    pub fn strict(&self) -> bool {
        let rank = Ratio::from_integer(self.surface_rank as i64);
        self.final_value > rank || (self.final_value == rank && self.strict_step.is_some())
    }

    pub fn step(&self, anchor: &str) -> Option<&AuditStep> {
        self.steps.iter().find(|s| s.anchor == anchor)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.case;
        writeln!(
            f,
            "case g={} k={} m={} l={} orientable={} separating={} same_component={}",
            c.g, c.k, c.m, c.l, c.orientable, c.separating, c.same_component
        )?;
        let width = self.steps.iter().map(|s| s.anchor.len()).max().unwrap_or(0);
        for s in &self.steps {
            writeln!(
                f,
                "{:<width$}  {} {} {}  [{}]{}",
                s.anchor,
                s.quantity,
                s.relation,
                s.value,
                s.expression,
                if s.assumed { " (assumed)" } else { "" },
            )?;
        }
        let verdict = if self.strict() { "STRICT" } else { "NOT STRICT" };
        write!(
            f,
            "{:<width$}  2rk(pi1(M)) >= {} vs rk(pi1(S)) = {}: {verdict}",
            "conclusion", self.final_value, self.surface_rank
        )?;
        if let Some(a) = self.strict_step {
            write!(f, " (strict at {a})")?;
        }
        Ok(())
    }
}

fn int(x: u64) -> Ratio<i64> {
    Ratio::from_integer(x as i64)
}

struct Chain {
    steps: Vec<AuditStep>,
    strict_step: Option<&'static str>,
}

impl Chain {
    fn push(&mut self, anchor: &'static str, quantity: &str, relation: Relation, value: Ratio<i64>, expression: String) {
        self.push_step(anchor, quantity, relation, value, expression, false);
    }

    fn assume(&mut self, anchor: &'static str, quantity: &str, relation: Relation, value: Ratio<i64>, expression: String) {
        self.push_step(anchor, quantity, relation, value, expression, true);
    }

    fn push_step(
        &mut self,
        anchor: &'static str,
        quantity: &str,
        relation: Relation,
        value: Ratio<i64>,
        expression: String,
        assumed: bool,
    ) {
        if relation == Relation::Gt && self.strict_step.is_none() {
            self.strict_step = Some(anchor);
        }
        self.steps.push(AuditStep {
            anchor,
            quantity: quantity.to_string(),
            relation,
            value,
            expression,
            assumed,
        });
    }
}

/// Replays the inequality chain for the given case.
pub fn rank_audit(case: &RankAuditCase) -> Result<AuditReport, AuditError> {
    case.validate()?;
    let RankAuditCase { g, k, m, l, .. } = *case;
    let rank_s = surface_rank(g, k, case.orientable)?;
    let mut ch = Chain {
        steps: Vec::new(),
        strict_step: None,
    };
    let rank_expr = match (case.orientable, k) {
        (true, 0) => format!("2g = {rank_s}"),
        (true, _) => format!("2g+k-1 = {rank_s}"),
        (false, 0) => format!("g = {rank_s}"),
        (false, _) => format!("g+k-1 = {rank_s}"),
    };
    ch.push("surface-rank", "rk(pi1(S))", Relation::Eq, int(rank_s), rank_expr);

    let final_value;
    if case.orientable && case.separating {
        if k > 0 {
            let genus = Ratio::new(2 * g as i64 + k as i64, 2);
            ch.push(
                "annulus-capping",
                "g(boundary component of M1)",
                Relation::Eq,
                genus,
                format!("g+k/2 = {g}+{k}/2"),
            );
            ch.assume(
                "half-lives-half-dies",
                "rk(H1(M1,Q))",
                Relation::Ge,
                genus,
                "g+k/2".into(),
            );
            ch.push("abelianization", "rk(pi1(M1))", Relation::Ge, genus, "rk(H1(M1,Q))".into());
            ch.assume(
                "doubling-monotonicity",
                "rk(pi1(M))",
                Relation::Ge,
                genus,
                "rk(pi1(M1))".into(),
            );
            final_value = genus * 2;
            ch.push(
                "doubled-bound",
                "2rk(pi1(M))",
                Relation::Ge,
                final_value,
                format!("2(g+k/2) = 2g+k = {}", 2 * g + k),
            );
        } else {
            let witness = genus_excess_bound(g, 2, 2)?;
            ch.assume(
                "rank-exceeds-genus",
                "rk(pi1(M1))",
                Relation::Gt,
                int(g),
                format!("g+(m-1)/n with m>1 lifts, e.g. n=2,m=2: {witness}"),
            );
            ch.assume(
                "doubling-monotonicity",
                "rk(pi1(M))",
                Relation::Ge,
                int(g),
                "rk(pi1(M1))".into(),
            );
            final_value = int(2 * g);
            ch.push("doubled-bound", "2rk(pi1(M))", Relation::Gt, final_value, format!("2g = {}", 2 * g));
        }
    } else if case.orientable && case.same_component {
        let gs = 2 * g + 2 * m + l - 1;
        ch.push(
            "boundary-genus",
            "g(S')",
            Relation::Eq,
            int(gs),
            format!("2g+2m+l-1 = 2g+k-1 = {gs}"),
        );
        ch.assume(
            "half-lives-half-dies",
            "rk(H1(M',Q))",
            Relation::Ge,
            int(gs),
            format!("rk(H1(S',Q))/2 = 2g+k-1 = {gs}"),
        );
        ch.push("abelianization", "rk(pi1(M'))", Relation::Ge, int(gs), "rk(H1(M',Q))".into());
        ch.assume(
            "doubling-monotonicity",
            "rk(pi1(M~))",
            Relation::Ge,
            int(gs),
            "rk(pi1(M'))".into(),
        );
        final_value = int(gs + 1);
        ch.push(
            "covering-bound(n=2)",
            "2rk(pi1(M))",
            Relation::Ge,
            final_value,
            format!("rk(pi1(M~))+1 >= 2g+k = {}", gs + 1),
        );
    } else if case.orientable {
        let gb = 2 * g + k;
        ch.push(
            "boundary-genus",
            "g(boundary of M')",
            Relation::Ge,
            int(gb),
            format!("g(S1)+m+g(S2)+m = 2g+k = {gb}"),
        );
        ch.assume(
            "half-lives-half-dies",
            "rk(H1(M',Q))",
            Relation::Ge,
            int(gb),
            format!("2g+k = {gb}"),
        );
        ch.push("abelianization", "rk(pi1(M'))", Relation::Ge, int(gb), "rk(H1(M',Q))".into());
        ch.assume(
            "doubling-monotonicity",
            "rk(pi1(M~))",
            Relation::Ge,
            int(gb),
            "rk(pi1(M'))".into(),
        );
        final_value = int(gb + 1);
        ch.push(
            "covering-bound(n=2)",
            "2rk(pi1(M))",
            Relation::Ge,
            final_value,
            format!("rk(pi1(M~))+1 >= 2g+k+1 = {}", gb + 1),
        );
    } else {
        // g(S') = g - 1 + 2m + l = k + g - 1 >= 0 since g >= 1
        let gs = g - 1 + 2 * m + l;
        ch.push(
            "boundary-genus",
            "g(S')",
            Relation::Eq,
            int(gs),
            format!("g-1+2m+l = k+g-1 = {gs}"),
        );
        if k > 0 {
            ch.assume(
                "half-lives-half-dies",
                "rk(H1(M',Q))",
                Relation::Ge,
                int(gs),
                format!("k+g-1 = {gs}"),
            );
            ch.push("abelianization", "rk(pi1(M'))", Relation::Ge, int(gs), "rk(H1(M',Q))".into());
            ch.assume(
                "doubling-monotonicity",
                "rk(pi1(M~))",
                Relation::Ge,
                int(gs),
                "rk(pi1(M'))".into(),
            );
            final_value = int(gs + 1);
            ch.push(
                "covering-bound(n=2)",
                "2rk(pi1(M))",
                Relation::Ge,
                final_value,
                format!("rk(pi1(M~))+1 >= k+g = {}", gs + 1),
            );
        } else {
            let witness = genus_excess_bound(gs, 2, 2)?;
            ch.assume(
                "rank-exceeds-genus",
                "rk(pi1(M'))",
                Relation::Gt,
                int(gs),
                format!("g(S')+(m-1)/n with m>1 lifts, e.g. n=2,m=2: {witness}"),
            );
            ch.assume(
                "doubling-monotonicity",
                "rk(pi1(M~))",
                Relation::Gt,
                int(gs),
                "rk(pi1(M'))".into(),
            );
            final_value = int(gs + 1);
            ch.push(
                "covering-bound(n=2)",
                "2rk(pi1(M))",
                Relation::Gt,
                final_value,
                format!("rk(pi1(M~))+1 > g-1+1 = {}", gs + 1),
            );
        }
    }

    Ok(AuditReport {
        case: *case,
        steps: ch.steps,
        surface_rank: rank_s,
        final_value,
        strict_step: ch.strict_step,
    })
}

/// Every consistent case with `g ≤ g_max`, `m ≤ m_max`, `l ≤ l_max`.
pub fn sweep_cases(g_max: u64, m_max: u64, l_max: u64) -> Vec<RankAuditCase> {
    let mut out = Vec::new();
    for g in 0..=g_max {
        for m in 0..=m_max {
            for l in 0..=l_max {
                for flags in 0..8u8 {
                    let c = RankAuditCase::new(g, m, l, flags & 1 != 0, flags & 2 != 0, flags & 4 != 0);
                    if c.validate().is_ok() {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_bound_examples() {
        assert_eq!(covering_rank_bound(3, 2), Ok(Ratio::from_integer(2)));
        assert_eq!(covering_rank_bound(5, 1), Ok(Ratio::from_integer(5)));
        assert_eq!(covering_rank_bound(2 * 7 - 2, 2), Ok(Ratio::new(13, 2)));
        assert_eq!(covering_rank_bound(1, 0), Err(AuditError::ZeroDegree));
    }

    #[test]
    fn surface_rank_examples() {
        assert_eq!(surface_rank(3, 0, true), Ok(6));
        assert_eq!(surface_rank(2, 2, true), Ok(5));
        assert_eq!(surface_rank(3, 0, false), Ok(3));
        assert_eq!(surface_rank(0, 1, false), Err(AuditError::NonOrientableGenusZero));
    }

    #[test]
    fn genus_excess_matches_covering_bound() {
        for g in 1..6u64 {
            for n in 1..5u64 {
                for m in 2..5u64 {
                    let direct = covering_rank_bound(n * (g - 1) + m, n).unwrap();
                    assert_eq!(genus_excess_bound(g, m, n).unwrap(), direct);
                    assert_eq!(direct, Ratio::from_integer(g as i64) + Ratio::new(m as i64 - 1, n as i64));
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(RankAuditCase::new(1, 1, 1, true, true, false).validate().is_err());
        assert!(RankAuditCase::new(1, 0, 0, false, true, false).validate().is_err());
        assert!(RankAuditCase::new(1, 0, 0, true, false, true).validate().is_err());
        assert!(RankAuditCase::new(0, 1, 0, false, false, false).validate().is_err());
        assert!(RankAuditCase::new(2, 1, 1, true, false, false).validate().is_err());
        let mut c = RankAuditCase::new(1, 1, 0, true, true, false);
        c.k = 3;
        assert_eq!(c.validate(), Err(AuditError::BoundaryCount { k: 3, sum: 2 }));
    }

    #[test]
    fn separating_chain() {
        let r = rank_audit(&RankAuditCase::new(2, 1, 0, true, true, false)).unwrap();
        assert_eq!(r.surface_rank, 5);
        assert_eq!(r.final_value, Ratio::from_integer(6));
        assert!(r.strict());
    }

    #[test]
    fn nonorientable_closed_chain_is_strict_by_step() {
        let r = rank_audit(&RankAuditCase::new(3, 0, 0, false, false, false)).unwrap();
        assert_eq!(r.final_value, Ratio::from_integer(3));
        assert_eq!(r.surface_rank, 3);
        assert_eq!(r.strict_step, Some("rank-exceeds-genus"));
        assert!(r.strict());
    }

    #[test]
    fn sweep_is_strict() {
        let cases = sweep_cases(10, 5, 5);
        assert!(cases.len() > 500);
        for c in cases {
            assert!(rank_audit(&c).unwrap().strict(), "{c:?}");
        }
    }
}
