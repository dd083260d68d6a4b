//! Finite presentations, their abelianizations, and rank arithmetic.

mod audit;
mod snf;
mod tietze;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freegroups::{Letter, Word, WordError, MAX_RANK};
use crate::triangulation::{edge_vertices, GluedComplex};

pub use audit::{
    covering_rank_bound, genus_excess_bound, rank_audit, surface_rank, sweep_cases, AuditError, AuditReport,
    AuditStep, RankAuditCase, Relation,
};
pub use snf::{smith_normal_form, IntegerMatrix, SmithForm};
pub use tietze::{tietze_simplify, TIETZE_MAX_RELATOR_LEN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("complex is not connected")]
    Disconnected,
    #[error("cannot parse presentation {0:?}: expected \"<a,b | r1, r2>\"")]
    Parse(String),
    #[error("generator {0:?} is not declared")]
    UndeclaredGenerator(char),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `⟨x_0, …, x_{n-1} | r_1, …⟩` with freely and cyclically reduced relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePresentation {
    generators: usize,
    relators: Vec<Word>,
}

impl FinitePresentation {
    /// Cyclically reduces every relator.
    ///
    /// # Panics
    /// If a relator uses a generator index `>= generators`.
    pub fn new(generators: usize, relators: Vec<Word>) -> Self {
        let relators: Vec<Word> = relators.iter().map(Word::cyclically_reduced).collect();
        for r in &relators {
            assert!(
                r.max_gen().is_none_or(|g| g < generators),
                "relator uses an undeclared generator"
            );
        }
        FinitePresentation { generators, relators }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relator_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.relators.len(), self.generators);
        for (i, r) in self.relators.iter().enumerate() {
            for g in 0..self.generators {
                m.set(i, g, r.exponent_sum(g).into());
            }
        }
        m
    }

    /// Rank of `H₁` over the rationals.
    pub fn abelianization_rank(&self) -> usize {
        self.generators - smith_normal_form(&self.relator_matrix()).rank()
    }

    /// Torsion coefficients of the abelianization.
    pub fn abelianization_torsion(&self) -> Vec<num_bigint::BigInt> {
        smith_normal_form(&self.relator_matrix()).torsion()
    }

    /// `⟨a_1, b_1, …, a_g, b_g | [a_1, b_1] ⋯ [a_g, b_g]⟩`.
    pub fn orientable_surface(genus: usize) -> Self {
        let mut r = Word::empty();
        for i in 0..genus {
            let (a, b) = (Letter::gen(2 * i), Letter::gen(2 * i + 1));
            for l in [a, b, a.inv(), b.inv()] {
                r.push(l);
            }
        }
        let relators = if genus == 0 { Vec::new() } else { vec![r] };
        FinitePresentation::new(2 * genus, relators)
    }

    /// `⟨a_1, …, a_g | a_1² ⋯ a_g²⟩`.
    pub fn nonorientable_surface(genus: usize) -> Self {
        let r: Word = (0..genus).flat_map(|i| [Letter::gen(i), Letter::gen(i)]).collect();
        FinitePresentation::new(genus, vec![r])
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, w: &Word, letters: bool) -> fmt::Result {
    if letters {
        return write!(f, "{w}");
    }
    if w.is_empty() {
        return f.write_str("1");
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|l| if l.inverse { format!("X{}", l.gen + 1) } else { format!("x{}", l.gen + 1) })
        .collect();
    f.write_str(&parts.join("."))
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.generators <= MAX_RANK;
        let gens: Vec<String> = (0..self.generators)
            .map(|g| {
                if letters {
                    Letter::gen(g).to_char().to_string()
                } else {
                    format!("x{}", g + 1)
                }
            })
            .collect();
        write!(f, "<{} |", gens.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write_word(f, r, letters)?;
        }
        f.write_str(">")
    }
}

impl FromStr for FinitePresentation {
    type Err = PresentationError;

    /// `<a,b | aab, abAB>`; generators must be the first letters in order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PresentationError::Parse(s.to_string());
        let inner = s.trim().strip_prefix('<').and_then(|t| t.strip_suffix('>')).ok_or_else(bad)?;
        let (gens, rels) = inner.split_once('|').ok_or_else(bad)?;
        let names: Vec<&str> = gens.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        for (i, name) in names.iter().enumerate() {
            if name.len() != 1 || Letter::gen(i).to_char().to_string() != *name {
                return Err(bad());
            }
        }
        let rank = names.len();
        let mut relators = Vec::new();
        for t in rels.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let w: Word = t.parse()?;
            if let Some(l) = w.letters().iter().find(|l| l.gen >= rank) {
                return Err(PresentationError::UndeclaredGenerator(l.to_char()));
            }
            relators.push(w);
        }
        Ok(FinitePresentation::new(rank, relators))
    }
}

/// Presentation of the fundamental group of the glued 2-complex.
///
/// Cells are the vertex classes, the edge classes and one 2-cell per face
/// pairing; unpaired faces contribute nothing. An edge class glued to its
/// own reverse is subdivided at its midpoint and the half-edge joins the
/// spanning tree, so it never becomes a generator. The remaining edge
/// classes outside a breadth-first spanning tree of the vertex classes are
/// the generators.
pub fn presentation_from_complex(c: &GluedComplex) -> Result<FinitePresentation, PresentationError> {
    if !c.is_connected() {
        return Err(PresentationError::Disconnected);
    }
    let classes = c.edge_classes();
    let nv = c.vertex_class_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, e) in classes.iter().enumerate() {
        if !e.self_reversed {
            adj[e.ends[0]].push((e.ends[1], i));
            adj[e.ends[1]].push((e.ends[0], i));
        }
    }
    let mut in_tree = vec![false; classes.len()];
    let mut seen = vec![false; nv];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                in_tree[e] = true;
                queue.push_back(v);
            }
        }
    }

    let mut generator_of = vec![None; classes.len()];
    let mut generators = 0;
    for (i, e) in classes.iter().enumerate() {
        if !e.self_reversed && !in_tree[i] {
            generator_of[i] = Some(generators);
            generators += 1;
        }
    }

    let mut relators = Vec::new();
    for p in c.scheme().pairings() {
        let slot = p.side_a;
        let [x, y, z] = slot.face.vertices();
        let mut r = Word::empty();
        for (from, to) in [(x, y), (y, z), (z, x)] {
            let label = slot
                .face
                .edges()
                .into_iter()
                .find(|&e| {
                    let [u, v] = edge_vertices(e);
                    (u, v) == (from.min(to), from.max(to))
                })
                .expect("face edge");
            let (class, forward) = c.edge_class_of(slot.tet, label);
            if let Some(g) = generator_of[class] {
                let along_reference = from < to;
                r.push(Letter::new(g, along_reference != forward));
            }
        }
        relators.push(r);
    }
    Ok(FinitePresentation::new(generators, relators))
}

/// Rank of `H₁` over the rationals.
pub fn abelianization_rank(p: &FinitePresentation) -> usize {
    p.abelianization_rank()
}
