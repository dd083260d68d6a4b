use std::collections::BTreeSet;
use std::fmt;

use super::TriangulationError;

/// Vertex pairs of the six edges of the reference tetrahedron, indexed by
/// edge label `1..=6`.
///
/// Faces are `(1,3,2)`, `(4,5,3)`, `(2,6,4)` and `(5,1,6)`; edges `1/4`, `2/5`
/// and `3/6` are opposite.
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[1, 2], [1, 3], [2, 3], [0, 3], [0, 2], [0, 1]];

/// Vertices of the edge with label `label` (1-based).
pub fn edge_vertices(label: u8) -> [usize; 2] {
    EDGE_VERTICES[label as usize - 1]
}

/// A face written as the ordered triple of edge labels around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceLabel([u8; 3]);

impl FaceLabel {
    pub fn new(edges: [u8; 3]) -> Result<Self, TriangulationError> {
        let bad = || TriangulationError::InvalidFace(format!("{}{}{}", edges[0], edges[1], edges[2]));
        if edges.iter().any(|&e| !(1..=6).contains(&e)) {
            return Err(bad());
        }
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&e| edge_vertices(e)).collect();
        let distinct: BTreeSet<u8> = edges.iter().copied().collect();
        if verts.len() != 3 || distinct.len() != 3 {
            return Err(bad());
        }
        Ok(FaceLabel(edges))
    }

    pub fn edges(self) -> [u8; 3] {
        self.0
    }

    /// Vertex of the face not on its `i`-th listed edge.
    pub fn vertex_opposite(self, i: usize) -> usize {
        let [x, y] = edge_vertices(self.0[i]);
        let [p, q] = edge_vertices(self.0[(i + 1) % 3]);
        // the other two edges meet at the opposite vertex
        let [r, s] = edge_vertices(self.0[(i + 2) % 3]);
        let common = if p == r || p == s { p } else { q };
        debug_assert!(common != x && common != y);
        common
    }

    /// The tetrahedron vertex this face does not contain.
    pub fn missing_vertex(self) -> usize {
        let verts = self.vertices();
        (0..4).find(|v| !verts.contains(v)).expect("face has three vertices")
    }

    pub fn vertices(self) -> [usize; 3] {
        [0, 1, 2].map(|i| self.vertex_opposite(i))
    }
}

impl fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

/// A face of a particular tetrahedron (tetrahedra are 0-based internally).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceSlot {
    pub tet: usize,
    pub face: FaceLabel,
}

impl FaceSlot {
    pub fn new(tet: usize, face: FaceLabel) -> Self {
        FaceSlot { tet, face }
    }

    /// Identifies the face independently of how its edges are listed.
    pub fn key(self) -> (usize, usize) {
        (self.tet, self.face.missing_vertex())
    }
}

/// Identification of two faces. Listed edge `i` of `side_a` is glued to
/// listed edge `edge_order[i]` of `side_b`; `edge_order` is always a cyclic
/// rotation so the cyclic order of the listed triples is preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacePairing {
    pub side_a: FaceSlot,
    pub side_b: FaceSlot,
    edge_order: [usize; 3],
}

const ROTATIONS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

impl FacePairing {
    /// Pairing with the positional edge map.
    pub fn positional(side_a: FaceSlot, side_b: FaceSlot) -> Self {
        FacePairing {
            side_a,
            side_b,
            edge_order: [0, 1, 2],
        }
        .canonical()
    }

    pub fn with_edge_order(
        side_a: FaceSlot,
        side_b: FaceSlot,
        edge_order: [usize; 3],
    ) -> Result<Self, TriangulationError> {
        if !ROTATIONS.contains(&edge_order) {
            return Err(TriangulationError::BadEdgeOrder(edge_order.map(|i| i + 1)));
        }
        Ok(FacePairing {
            side_a,
            side_b,
            edge_order,
        }
        .canonical())
    }

    pub fn edge_order(&self) -> [usize; 3] {
        self.edge_order
    }

    fn canonical(self) -> Self {
        if self.side_a <= self.side_b {
            return self;
        }
        let mut inverse = [0; 3];
        for (i, &j) in self.edge_order.iter().enumerate() {
            inverse[j] = i;
        }
        FacePairing {
            side_a: self.side_b,
            side_b: self.side_a,
            edge_order: inverse,
        }
    }

    /// Glued edge label pairs `(edge of side_a, edge of side_b)`.
    pub fn edge_map(&self) -> [(u8, u8); 3] {
        let a = self.side_a.face.edges();
        let b = self.side_b.face.edges();
        [0, 1, 2].map(|i| (a[i], b[self.edge_order[i]]))
    }

    /// Induced map of all four tetrahedron vertices, `side_a`'s tetrahedron
    /// to `side_b`'s; the unglued vertex goes to the unglued vertex.
    pub fn vertex_map(&self) -> [usize; 4] {
        let mut map = [0; 4];
        for i in 0..3 {
            map[self.side_a.face.vertex_opposite(i)] =
                self.side_b.face.vertex_opposite(self.edge_order[i]);
        }
        map[self.side_a.face.missing_vertex()] = self.side_b.face.missing_vertex();
        map
    }

    /// True when the induced vertex permutation is odd.
    pub fn is_odd(&self) -> bool {
        let p = self.vertex_map();
        let inversions = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        inversions % 2 == 1
    }
}

/// A set of face pairings on `tet_count` tetrahedra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GluingScheme {
    tet_count: usize,
    pairings: Vec<FacePairing>,
}

impl GluingScheme {
    /// Validates the pairings and stores them in canonical order.
    pub fn new(tet_count: usize, mut pairings: Vec<FacePairing>) -> Result<Self, TriangulationError> {
        if tet_count == 0 {
            return Err(TriangulationError::NoTetrahedra);
        }
        let mut seen = BTreeSet::new();
        for p in &pairings {
            for side in [p.side_a, p.side_b] {
                if side.tet >= tet_count {
                    return Err(TriangulationError::TetOutOfRange {
                        tet: side.tet + 1,
                        tet_count,
                    });
                }
            }
            if p.side_a.key() == p.side_b.key() {
                return Err(TriangulationError::SelfPaired {
                    tet: p.side_a.tet + 1,
                    face: p.side_a.face.to_string(),
                });
            }
            for side in [p.side_a, p.side_b] {
                if !seen.insert(side.key()) {
                    return Err(TriangulationError::DuplicateSlot {
                        tet: side.tet + 1,
                        face: side.face.to_string(),
                    });
                }
            }
        }
        pairings.sort();
        Ok(GluingScheme {
            tet_count,
            pairings,
        })
    }

    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    pub fn pairings(&self) -> &[FacePairing] {
        &self.pairings
    }

    /// Every face of every tetrahedron is paired.
    pub fn is_closed(&self) -> bool {
        2 * self.pairings.len() == 4 * self.tet_count
    }

    /// Canonical text form: sorted pairings, 1-based tetrahedra, `edgeorder`
    /// only when not positional.
    pub fn render(&self) -> String {
        let mut s = format!("tets {}\n", self.tet_count);
        for p in &self.pairings {
            s.push_str(&format!(
                "pair {}.{} {}.{}",
                p.side_a.tet + 1,
                p.side_a.face,
                p.side_b.tet + 1,
                p.side_b.face
            ));
            if p.edge_order != [0, 1, 2] {
                let o = p.edge_order;
                s.push_str(&format!(" edgeorder {} {} {}", o[0] + 1, o[1] + 1, o[2] + 1));
            }
            s.push('\n');
        }
        s
    }

    /// Parses the line-oriented scheme format:
    ///
    /// ```text
    /// # comment
    /// tets 2
    /// pair 1.132 2.453
    /// pair 1.264 2.516 edgeorder 2 3 1
    /// ```
    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let syntax = |line: usize, msg: &str| TriangulationError::Syntax {
            line,
            message: msg.to_string(),
        };
        let mut tet_count = None;
        let mut pairings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "tets" => {
                    if tet_count.is_some() {
                        return Err(syntax(line_no, "repeated `tets` header"));
                    }
                    if tokens.len() != 2 {
                        return Err(syntax(line_no, "expected `tets N`"));
                    }
                    let n: usize = tokens[1]
                        .parse()
                        .map_err(|_| syntax(line_no, "tetrahedron count is not a number"))?;
                    if n == 0 {
                        return Err(TriangulationError::NoTetrahedra);
                    }
                    tet_count = Some(n);
                }
                "pair" => {
                    let n = tet_count.ok_or_else(|| syntax(line_no, "`pair` before `tets` header"))?;
                    let pairing = match tokens.len() {
                        3 => {
                            let a = parse_slot(tokens[1], n, line_no)?;
                            let b = parse_slot(tokens[2], n, line_no)?;
                            FacePairing::positional(a, b)
                        }
                        7 if tokens[3] == "edgeorder" => {
                            let a = parse_slot(tokens[1], n, line_no)?;
                            let b = parse_slot(tokens[2], n, line_no)?;
                            let mut order = [0usize; 3];
                            for (slot, tok) in order.iter_mut().zip(&tokens[4..7]) {
                                let v: usize = tok
                                    .parse()
                                    .ok()
                                    .filter(|v| (1..=3).contains(v))
                                    .ok_or_else(|| syntax(line_no, "edgeorder entries must be 1, 2 or 3"))?;
                                *slot = v - 1;
                            }
                            FacePairing::with_edge_order(a, b, order)?
                        }
                        _ => {
                            return Err(syntax(
                                line_no,
                                "expected `pair <i>.<face> <j>.<face> [edgeorder p q r]`",
                            ))
                        }
                    };
                    pairings.push(pairing);
                }
                other => return Err(syntax(line_no, &format!("unknown directive `{other}`"))),
            }
        }
        let n = tet_count.ok_or_else(|| syntax(1, "missing `tets N` header"))?;
        GluingScheme::new(n, pairings)
    }
}

fn parse_slot(tok: &str, tet_count: usize, line: usize) -> Result<FaceSlot, TriangulationError> {
    let syntax = |msg: String| TriangulationError::Syntax { line, message: msg };
    let (tet, face) = tok
        .split_once('.')
        .ok_or_else(|| syntax(format!("face slot `{tok}` is not `<tet>.<face>`")))?;
    let tet: usize = tet
        .parse()
        .map_err(|_| syntax(format!("bad tetrahedron index `{tet}`")))?;
    if tet == 0 || tet > tet_count {
        return Err(TriangulationError::TetOutOfRange { tet, tet_count });
    }
    let digits: Vec<u8> = face
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as u8))
        .collect::<Option<_>>()
        .filter(|d: &Vec<u8>| d.len() == 3)
        .ok_or_else(|| syntax(format!("face `{face}` is not three edge digits")))?;
    let face = FaceLabel::new([digits[0], digits[1], digits[2]])?;
    Ok(FaceSlot::new(tet - 1, face))
}
