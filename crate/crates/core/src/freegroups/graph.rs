//! Stallings subgroup graphs.
//!
//! A finitely generated subgroup `H` of the free group `F_k` is represented
//! by its folded core graph: a finite connected graph with edges labelled by
//! generators, no two edges at a vertex sharing a label and direction, and no
//! hanging trees away from the base vertex. Membership, rank, index and
//! coset representatives are all read off this graph.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use super::word::{Letter, Word, WordError, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("permutation action is invalid: {0}")]
    BadAction(String),
}

/// Index of a subgroup in the ambient free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupIndex {
    Finite(usize),
    Infinite,
}

impl fmt::Display for SubgroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupIndex::Finite(n) => write!(f, "{n}"),
            SubgroupIndex::Infinite => f.write_str("infinite"),
        }
    }
}

/// Folded, core, canonically numbered subgroup graph. The base vertex is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    rank: usize,
    /// `out[v][g]`: target of the `g`-edge leaving `v`.
    out: Vec<Vec<Option<usize>>>,
    /// `inc[v][g]`: source of the `g`-edge entering `v`.
    inc: Vec<Vec<Option<usize>>>,
    /// Breadth-first spanning tree words from the base, indexed by vertex.
    tree: Vec<Word>,
}

/// Union-find folding of a labelled graph.
struct Folder {
    parent: Vec<usize>,
    out: Vec<BTreeMap<usize, usize>>,
    inc: Vec<BTreeMap<usize, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        let mut f = Folder {
            parent: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
            pending: Vec::new(),
        };
        f.add_vertex();
        f
    }

    fn add_vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn link(&mut self, u: usize, gen: usize, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        let o = self.out[u].get(&gen).copied().map(|w| self.find(w));
        let i = self.inc[v].get(&gen).copied().map(|s| self.find(s));
        if let Some(w) = o {
            if w != v {
                self.pending.push((w, v));
            }
        }
        if let Some(s) = i {
            if s != u {
                self.pending.push((s, u));
            }
        }
        if o.is_none() && (i.is_none() || i == Some(u)) {
            self.out[u].insert(gen, v);
        }
        if i.is_none() && (o.is_none() || o == Some(v)) {
            self.inc[v].insert(gen, u);
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.parent[gone] = keep;
        let outs = std::mem::take(&mut self.out[gone]);
        let incs = std::mem::take(&mut self.inc[gone]);
        for (gen, t) in outs {
            self.link(keep, gen, t);
        }
        for (gen, s) in incs {
            self.link(s, gen, keep);
        }
    }

    fn run(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            self.merge(a, b);
        }
    }

    fn add_loop(&mut self, word: &Word) {
        let letters = word.letters();
        if letters.is_empty() {
            return;
        }
        let mut cur = 0;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                self.add_vertex()
            };
            if l.inverse {
                self.link(next, l.gen, cur);
            } else {
                self.link(cur, l.gen, next);
            }
            self.run();
            cur = next;
        }
    }

    /// Live edges `(src, gen, dst)` after folding.
    fn edges(&mut self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for v in 0..self.parent.len() {
            if self.find(v) != v {
                continue;
            }
            let outs: Vec<(usize, usize)> = self.out[v].iter().map(|(&g, &t)| (g, t)).collect();
            for (g, t) in outs {
                let t = self.find(t);
                edges.push((v, g, t));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

impl SubgroupGraph {
    /// Builds the folded core graph of `⟨gens⟩ ≤ F_rank`.
    pub fn from_generators(rank: usize, gens: &[Word]) -> Result<Self, GraphError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(WordError::BadRank(rank).into());
        }
        let mut folder = Folder::new();
        for g in gens {
            g.check_rank(rank)?;
            folder.add_loop(&g.reduced());
        }
        let edges = folder.edges();
        Ok(Self::from_folded_edges(rank, &edges))
    }

    /// Builds the graph of the point stabiliser of `base` for a transitive
    /// permutation action: `perms[g][x]` is the image of point `x` under
    /// generator `g`. The result is a complete graph whose index is the number
    /// of points.
    pub fn from_permutations(perms: &[Vec<usize>], base: usize) -> Result<Self, GraphError> {
        let rank = perms.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(WordError::BadRank(rank).into());
        }
        let n = perms[0].len();
        if base >= n {
            return Err(GraphError::BadAction(format!("base {base} out of {n} points")));
        }
        let mut edges = Vec::new();
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(GraphError::BadAction("permutations act on different sets".into()));
            }
            let mut seen = vec![false; n];
            for (x, &y) in p.iter().enumerate() {
                if y >= n || seen[y] {
                    return Err(GraphError::BadAction(format!("generator {g} is not a bijection")));
                }
                seen[y] = true;
                edges.push((x, g, y));
            }
        }
        // relabel so that the base is vertex 0
        let relabel = |v: usize| {
            if v == base {
                0
            } else if v == 0 {
                base
            } else {
                v
            }
        };
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(s, g, t)| (relabel(s), g, relabel(t)))
            .collect();
        let graph = Self::from_folded_edges(rank, &edges);
        if graph.vertex_count() != n {
            return Err(GraphError::BadAction("action is not transitive".into()));
        }
        Ok(graph)
    }

    /// Trims hanging trees, then renumbers vertices breadth-first from the
    /// base (vertex 0 of `edges`) in direction order `a, A, b, B, ...`.
    fn from_folded_edges(rank: usize, edges: &[(usize, usize, usize)]) -> Self {
        let nv = edges
            .iter()
            .map(|&(s, _, t)| s.max(t) + 1)
            .max()
            .unwrap_or(1);
        let mut out = vec![vec![None; rank]; nv];
        let mut inc = vec![vec![None; rank]; nv];
        for &(s, g, t) in edges {
            out[s][g] = Some(t);
            inc[t][g] = Some(s);
        }
        // prune degree-one vertices other than the base
        let degree = |out: &Vec<Vec<Option<usize>>>, inc: &Vec<Vec<Option<usize>>>, v: usize| {
            out[v].iter().flatten().count() + inc[v].iter().flatten().count()
        };
        let mut alive = vec![true; nv];
        let mut stack: Vec<usize> = (1..nv).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || degree(&out, &inc, v) > 1 {
                continue;
            }
            alive[v] = false;
            for g in 0..rank {
                if let Some(t) = out[v][g].take() {
                    inc[t][g] = None;
                    stack.push(t);
                }
                if let Some(s) = inc[v][g].take() {
                    out[s][g] = None;
                    stack.push(s);
                }
            }
        }
        // breadth-first renumbering and spanning tree
        let mut order = vec![usize::MAX; nv];
        let mut tree_old: Vec<Word> = vec![Word::empty(); nv];
        let mut queue = VecDeque::from([0usize]);
        order[0] = 0;
        let mut seq = vec![0usize];
        while let Some(v) = queue.pop_front() {
            for dir in 0..2 * rank {
                let l = Letter::new(dir / 2, dir % 2 == 1);
                let next = if l.inverse { inc[v][l.gen] } else { out[v][l.gen] };
                if let Some(t) = next {
                    if order[t] == usize::MAX {
                        order[t] = seq.len();
                        seq.push(t);
                        let mut w = tree_old[v].clone();
                        w.push(l);
                        tree_old[t] = w;
                        queue.push_back(t);
                    }
                }
            }
        }
        let n = seq.len();
        let mut new_out = vec![vec![None; rank]; n];
        let mut new_inc = vec![vec![None; rank]; n];
        let mut tree = vec![Word::empty(); n];
        for (new, &old) in seq.iter().enumerate() {
            tree[new] = tree_old[old].clone();
            for g in 0..rank {
                new_out[new][g] = out[old][g].map(|t| order[t]);
                new_inc[new][g] = inc[old][g].map(|s| order[s]);
            }
        }
        SubgroupGraph {
            rank,
            out: new_out,
            inc: new_inc,
            tree,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|v| v.iter().flatten().count()).sum()
    }

    /// Edges `(src, gen, dst)` in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::with_capacity(self.edge_count());
        for (v, row) in self.out.iter().enumerate() {
            for (g, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    e.push((v, g, *t));
                }
            }
        }
        e
    }

    /// Follows `l` from `v`, if that edge exists.
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.gen >= self.rank {
            return None;
        }
        if l.inverse {
            self.inc[v][l.gen]
        } else {
            self.out[v][l.gen]
        }
    }

    /// Reads as much of `w` as possible from the base. Returns the vertex
    /// reached and how many letters were consumed.
    pub fn trace(&self, w: &Word) -> (usize, usize) {
        let mut v = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.step(v, l) {
                Some(t) => v = t,
                None => return (v, i),
            }
        }
        (v, w.len())
    }

    pub fn is_folded(&self) -> bool {
        // the adjacency arrays cannot hold two same-label edges; check that
        // `out` and `inc` describe the same edge set
        self.edges()
            .iter()
            .all(|&(s, g, t)| self.inc[t][g] == Some(s))
            && self.inc.iter().flatten().flatten().count() == self.edge_count()
    }

    pub fn is_core(&self) -> bool {
        (1..self.vertex_count()).all(|v| {
            let deg = self.out[v].iter().flatten().count() + self.inc[v].iter().flatten().count();
            deg >= 2
        })
    }

    /// True iff the reduced form of `w` labels a closed path at the base.
    pub fn contains(&self, w: &Word) -> bool {
        let r = w.reduced();
        matches!(self.trace(&r), (0, n) if n == r.len())
    }

    /// Rank of the subgroup: first Betti number `E - V + 1` of the core graph.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_complete(&self) -> bool {
        self.out
            .iter()
            .chain(self.inc.iter())
            .all(|row| row.iter().all(Option::is_some))
    }

    pub fn index(&self) -> SubgroupIndex {
        if self.is_complete() {
            SubgroupIndex::Finite(self.vertex_count())
        } else {
            SubgroupIndex::Infinite
        }
    }

    /// Spanning-tree word from the base to `v`.
    pub fn tree_word(&self, v: usize) -> &Word {
        &self.tree[v]
    }

    /// Canonical representative of the right coset `H·w`.
    ///
    /// Reads the reduced `w` from the base; if it stays in the graph the
    /// representative is the tree path to the final vertex, otherwise the tree
    /// path to the exit vertex followed by the unread suffix. Members of `H`
    /// map to the empty word and `w · rep(w)⁻¹ ∈ H`.
    pub fn coset_representative(&self, w: &Word) -> Word {
        let r = w.reduced();
        let (v, read) = self.trace(&r);
        let suffix = Word::from_letters(r.letters()[read..].to_vec());
        self.tree[v].times(&suffix)
    }

    /// Canonical representative `a` of the left coset `w·H`, with
    /// `a⁻¹·w ∈ H`.
    pub fn left_coset_representative(&self, w: &Word) -> Word {
        self.coset_representative(&w.inverse()).inverse()
    }

    /// Free generators read off the non-tree edges: for an edge `u --x--> v`
    /// outside the spanning tree, `tree(u) x tree(v)⁻¹`.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let mut gens = Vec::new();
        for (u, g, v) in self.edges() {
            let is_tree = self.tree[v].len() == self.tree[u].len() + 1
                && self.tree[v].letters().last() == Some(&Letter::gen(g))
                && self.tree[v].letters()[..self.tree[u].len()] == *self.tree[u].letters();
            let is_tree_rev = self.tree[u].len() == self.tree[v].len() + 1
                && self.tree[u].letters().last() == Some(&Letter::new(g, true))
                && self.tree[u].letters()[..self.tree[v].len()] == *self.tree[v].letters();
            if is_tree || is_tree_rev {
                continue;
            }
            let mut w = self.tree[u].clone();
            w.push(Letter::gen(g));
            gens.push(w.times(&self.tree[v].inverse()));
        }
        gens
    }

    /// Checks the Nielsen–Schreier equality `rank(H) = n(k-1) + 1` for a
    /// subgroup of index `n` in `F_k`, together with the equivalent bound
    /// `k >= (rank(H) + n - 1) / n` holding with equality.
    pub fn schreier_rank_check(&self) -> Result<bool, GraphError> {
        let n = match self.index() {
            SubgroupIndex::Finite(n) => n,
            SubgroupIndex::Infinite => return Err(GraphError::InfiniteIndex),
        };
        let k = self.rank;
        let rank = self.rank();
        let formula = n * (k - 1) + 1;
        let bound = Ratio::new((rank + n - 1) as i64, n as i64);
        Ok(rank == formula && bound == Ratio::from_integer(k as i64))
    }

    /// Plain-text edge list, one `v --x--> w` line per edge.
    pub fn render_edges(&self) -> String {
        let mut s = String::new();
        for (u, g, v) in self.edges() {
            s.push_str(&format!("{u} --{}--> {v}\n", Letter::gen(g).to_char()));
        }
        s
    }
}

/// Folded core graph of `⟨gens⟩`.
pub fn stallings_graph(rank: usize, gens: &[Word]) -> Result<SubgroupGraph, GraphError> {
    SubgroupGraph::from_generators(rank, gens)
}
