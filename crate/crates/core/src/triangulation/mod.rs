//! Face-pairing gluings of tetrahedra.
//!
//! A [`GluingScheme`] lists which tetrahedron faces are identified; [`glue`]
//! computes the resulting identification combinatorics (edge and vertex
//! classes, orientability). Vertex links, dihedral admissibility and the
//! handle decomposition are derived from the glued complex.

mod boundary;
mod scheme;

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

pub use boundary::{boundary_surfaces, BoundaryComponent, BoundarySurfaceStats};
pub use scheme::{edge_vertices, FaceLabel, FacePairing, FaceSlot, GluingScheme, EDGE_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("face {face} of tetrahedron {tet} appears in more than one pairing")]
    DuplicateSlot { tet: usize, face: String },
    #[error("face {face} of tetrahedron {tet} is paired with itself")]
    SelfPaired { tet: usize, face: String },
    #[error("edges {0} do not bound a face of the tetrahedron")]
    InvalidFace(String),
    #[error("edgeorder {0:?} is not a cyclic rotation of 1 2 3")]
    BadEdgeOrder([usize; 3]),
    #[error("tetrahedron {tet} out of range (scheme has {tet_count})")]
    TetOutOfRange { tet: usize, tet_count: usize },
    #[error("a scheme needs at least one tetrahedron")]
    NoTetrahedra,
    #[error("scheme is not closed: {unpaired} face(s) unpaired")]
    NotClosed { unpaired: usize },
    #[error("glued complex is disconnected")]
    Disconnected,
}

/// An edge of a particular tetrahedron. `forward` records whether the
/// edge's reference direction (lower vertex to higher vertex) agrees with the
/// direction of its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub tet: usize,
    pub edge: u8,
    pub forward: bool,
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.forward { "" } else { "~" };
        write!(f, "{arrow}{}_{}", self.edge, self.tet + 1)
    }
}

/// Dihedral angle `2π / valence`, kept symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralAngle {
    pub valence: usize,
}

impl DihedralAngle {
    pub fn radians(self) -> f64 {
        2.0 * PI / self.valence as f64
    }

    pub fn degrees(self) -> f64 {
        360.0 / self.valence as f64
    }
}

impl fmt::Display for DihedralAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2pi/{}", self.valence)
    }
}

/// An orbit of tetrahedron edges under the gluing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub members: Vec<DirectedEdge>,
    /// Some member is identified with its own reverse.
    pub self_reversed: bool,
    /// Vertex classes at the tail and head of the class direction.
    pub ends: [usize; 2],
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.members.len()
    }

    pub fn dihedral_angle(&self) -> DihedralAngle {
        DihedralAngle {
            valence: self.valence(),
        }
    }
}

/// The identification space of a gluing scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedComplex {
    scheme: GluingScheme,
    edge_classes: Vec<EdgeClass>,
    /// `(tet, vertex)` members of each vertex class.
    vertex_classes: Vec<Vec<(usize, usize)>>,
    orientable: bool,
    connected: bool,
    /// `edge_lookup[6 * tet + edge - 1]` = (class, forward).
    edge_lookup: Vec<(usize, bool)>,
    /// `vertex_lookup[4 * tet + vertex]` = class.
    vertex_lookup: Vec<usize>,
}

/// Union-find that tracks the relative direction of identified edges.
struct ParityUnionFind {
    parent: Vec<usize>,
    /// Parity relative to the parent.
    parity: Vec<bool>,
    twisted: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
            twisted: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut root = x;
        while self.parent[root] != root {
            path.push(root);
            root = self.parent[root];
        }
        // compress from the top so each node's parity is relative to the root
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (root, if path.is_empty() { false } else { self.parity[x] })
    }

    fn union(&mut self, a: usize, b: usize, flipped: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != flipped {
                self.twisted[ra] = true;
            }
            return;
        }
        let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[gone] = keep;
        self.parity[gone] = pa ^ pb ^ flipped;
        self.twisted[keep] |= self.twisted[gone];
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.0[gone] = keep;
        }
    }

    /// Dense class numbering in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.0.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[x] = id[r];
        }
        (out, count)
    }
}

/// Glues a closed scheme.
pub fn glue(scheme: &GluingScheme) -> Result<GluedComplex, TriangulationError> {
    if !scheme.is_closed() {
        return Err(TriangulationError::NotClosed {
            unpaired: 4 * scheme.tet_count() - 2 * scheme.pairings().len(),
        });
    }
    Ok(GluedComplex::build(scheme))
}

/// Glues a scheme that may leave faces unpaired.
pub fn glue_partial(scheme: &GluingScheme) -> GluedComplex {
    GluedComplex::build(scheme)
}

impl GluedComplex {
    fn build(scheme: &GluingScheme) -> Self {
        let t = scheme.tet_count();
        let mut verts = UnionFind::new(4 * t);
        let mut edges = ParityUnionFind::new(6 * t);
        let mut tets = UnionFind::new(t);

        for p in scheme.pairings() {
            let (a, b) = (p.side_a.tet, p.side_b.tet);
            let map = p.vertex_map();
            tets.union(a, b);
            for v in p.side_a.face.vertices() {
                verts.union(4 * a + v, 4 * b + map[v]);
            }
            for (ea, eb) in p.edge_map() {
                let [x, y] = edge_vertices(ea);
                let [px, py] = edge_vertices(eb);
                let flipped = !(map[x] == px && map[y] == py);
                debug_assert!(!flipped || (map[x] == py && map[y] == px));
                edges.union(6 * a + ea as usize - 1, 6 * b + eb as usize - 1, flipped);
            }
        }

        let (vertex_lookup, vcount) = verts.classes();
        let mut vertex_classes = vec![Vec::new(); vcount];
        for (i, &c) in vertex_lookup.iter().enumerate() {
            vertex_classes[c].push((i / 4, i % 4));
        }

        // edge classes numbered by first appearance; direction of the first member
        let mut class_of_root = vec![usize::MAX; 6 * t];
        let mut root_parity = vec![false; 6 * t];
        let mut edge_classes: Vec<EdgeClass> = Vec::new();
        let mut edge_lookup = vec![(0, true); 6 * t];
        for i in 0..6 * t {
            let (root, par) = edges.find(i);
            if class_of_root[root] == usize::MAX {
                class_of_root[root] = edge_classes.len();
                root_parity[root] = par;
                let [x, y] = edge_vertices((i % 6) as u8 + 1);
                let tet = i / 6;
                edge_classes.push(EdgeClass {
                    members: Vec::new(),
                    self_reversed: edges.twisted[root],
                    ends: [vertex_lookup[4 * tet + x], vertex_lookup[4 * tet + y]],
                });
            }
            let c = class_of_root[root];
            let forward = par == root_parity[root];
            edge_lookup[i] = (c, forward);
            edge_classes[c].members.push(DirectedEdge {
                tet: i / 6,
                edge: (i % 6) as u8 + 1,
                forward,
            });
        }

        let (_, components) = tets.classes();
        GluedComplex {
            scheme: scheme.clone(),
            edge_classes,
            vertex_classes,
            orientable: orientable_by_sign_propagation(scheme),
            connected: components == 1,
            edge_lookup,
            vertex_lookup,
        }
    }

    pub fn scheme(&self) -> &GluingScheme {
        &self.scheme
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn vertex_classes(&self) -> &[Vec<(usize, usize)>] {
        &self.vertex_classes
    }

    pub fn vertex_class_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_closed(&self) -> bool {
        self.scheme.is_closed()
    }

    /// Edge class of tetrahedron edge `edge` (1-based label) of `tet`, and
    /// whether its reference direction agrees with the class direction.
    pub fn edge_class_of(&self, tet: usize, edge: u8) -> (usize, bool) {
        self.edge_lookup[6 * tet + edge as usize - 1]
    }

    pub fn vertex_class_of(&self, tet: usize, vertex: usize) -> usize {
        self.vertex_lookup[4 * tet + vertex]
    }
}

/// Assigns each tetrahedron a sign so that every odd gluing joins equal signs
/// and every even gluing joins opposite signs; a contradiction means the
/// glued space is non-orientable.
fn orientable_by_sign_propagation(scheme: &GluingScheme) -> bool {
    let t = scheme.tet_count();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); t];
    for p in scheme.pairings() {
        let same = p.is_odd();
        adj[p.side_a.tet].push((p.side_b.tet, same));
        adj[p.side_b.tet].push((p.side_a.tet, same));
    }
    let mut sign: Vec<Option<bool>> = vec![None; t];
    for start in 0..t {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(true);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let su = sign[u].expect("visited");
            for &(v, same) in &adj[u] {
                let want = if same { su } else { !su };
                match sign[v] {
                    None => {
                        sign[v] = Some(want);
                        stack.push(v);
                    }
                    Some(sv) if sv != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Admissibility of one edge class: valence above 6, i.e. a dihedral angle
/// strictly between 0 and 60 degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeAdmissibility {
    pub class: usize,
    pub valence: usize,
    pub angle: DihedralAngle,
    pub admissible: bool,
}

pub fn valence_admissible(valence: usize) -> bool {
    valence > 6
}

pub fn dihedral_admissibility(complex: &GluedComplex) -> Vec<EdgeAdmissibility> {
    complex
        .edge_classes()
        .iter()
        .enumerate()
        .map(|(class, e)| EdgeAdmissibility {
            class,
            valence: e.valence(),
            angle: e.dihedral_angle(),
            admissible: valence_admissible(e.valence()),
        })
        .collect()
}

/// Handlebody obtained by drilling out the glued edges, plus one 2-handle per
/// edge class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandleStructure {
    pub handlebody_genus: usize,
    pub two_handles: usize,
}

pub fn handle_structure(complex: &GluedComplex) -> Result<HandleStructure, TriangulationError> {
    if !complex.is_connected() {
        return Err(TriangulationError::Disconnected);
    }
    let scheme = complex.scheme();
    Ok(HandleStructure {
        handlebody_genus: scheme.pairings().len() + 1 - scheme.tet_count(),
        two_handles: complex.edge_classes().len(),
    })
}
