//! Vertex links: the surfaces formed by the corner triangles of the
//! tetrahedra, which become the boundary once vertex neighbourhoods are
//! removed.

use super::{GluedComplex, TriangulationError, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub vertex_class: usize,
    pub triangles: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// `(2 - χ) / 2` when orientable, `2 - χ` otherwise.
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySurfaceStats {
    pub components: Vec<BoundaryComponent>,
}

impl BoundarySurfaceStats {
    pub fn total_triangles(&self) -> usize {
        self.components.iter().map(|c| c.triangles).sum()
    }
}

// Link triangle (tet, v) has one vertex per tetrahedron edge at v and one
// edge per face containing v. Both are indexed as 16*tet + 4*v + w, where w
// is the other end of the edge, or the vertex the face misses.
fn slot(tet: usize, v: usize, w: usize) -> usize {
    16 * tet + 4 * v + w
}

/// +1 if `x -> y` follows the reference cyclic order (ascending) of the other
/// three vertices around corner `v`.
fn reference_orientation(v: usize, x: usize, y: usize) -> i8 {
    let others: Vec<usize> = (0..4).filter(|&u| u != v).collect();
    let pos = |u: usize| others.iter().position(|&o| o == u).expect("vertex of link");
    if (pos(x) + 1) % 3 == pos(y) {
        1
    } else {
        -1
    }
}

pub fn boundary_surfaces(complex: &GluedComplex) -> Result<BoundarySurfaceStats, TriangulationError> {
    let scheme = complex.scheme();
    if !scheme.is_closed() {
        return Err(TriangulationError::NotClosed {
            unpaired: 4 * scheme.tet_count() - 2 * scheme.pairings().len(),
        });
    }
    let t = scheme.tet_count();
    let mut link_vertices = UnionFind::new(16 * t);
    let mut link_edges = UnionFind::new(16 * t);
    // (neighbour triangle, sign relation) per link triangle 4*tet + v
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); 4 * t];

    for p in scheme.pairings() {
        let (a, b) = (p.side_a.tet, p.side_b.tet);
        let map = p.vertex_map();
        let face_verts = p.side_a.face.vertices();
        let (wa, wb) = (p.side_a.face.missing_vertex(), p.side_b.face.missing_vertex());
        for &v in &face_verts {
            link_edges.union(slot(a, v, wa), slot(b, map[v], wb));
            let others: Vec<usize> = face_verts.iter().copied().filter(|&u| u != v).collect();
            for &u in &others {
                link_vertices.union(slot(a, v, u), slot(b, map[v], map[u]));
            }
            let (x, y) = (others[0], others[1]);
            let rel = -reference_orientation(v, x, y) * reference_orientation(map[v], map[x], map[y]);
            adj[4 * a + v].push((4 * b + map[v], rel));
            adj[4 * b + map[v]].push((4 * a + v, rel));
        }
    }

    let (lv_class, _) = link_vertices.classes();
    let (le_class, _) = link_edges.classes();
    let nclasses = complex.vertex_class_count();

    let mut comps: Vec<BoundaryComponent> = (0..nclasses)
        .map(|c| BoundaryComponent {
            vertex_class: c,
            triangles: 0,
            edges: 0,
            vertices: 0,
            euler_characteristic: 0,
            orientable: true,
            genus: 0,
        })
        .collect();
    let mut seen_v = vec![false; 16 * t];
    let mut seen_e = vec![false; 16 * t];
    for tet in 0..t {
        for v in 0..4 {
            let c = complex.vertex_class_of(tet, v);
            comps[c].triangles += 1;
            for w in (0..4).filter(|&w| w != v) {
                let lv = lv_class[slot(tet, v, w)];
                if !seen_v[lv] {
                    seen_v[lv] = true;
                    comps[c].vertices += 1;
                }
                let le = le_class[slot(tet, v, w)];
                if !seen_e[le] {
                    seen_e[le] = true;
                    comps[c].edges += 1;
                }
            }
        }
    }

    // coherent orientation of link triangles, one component at a time
    let mut sign: Vec<i8> = vec![0; 4 * t];
    for start in 0..4 * t {
        if sign[start] != 0 {
            continue;
        }
        let c = complex.vertex_class_of(start / 4, start % 4);
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(w, rel) in &adj[u] {
                let want = sign[u] * rel;
                if sign[w] == 0 {
                    sign[w] = want;
                    stack.push(w);
                } else if sign[w] != want {
                    comps[c].orientable = false;
                }
            }
        }
    }

    for comp in &mut comps {
        comp.euler_characteristic = comp.vertices as i64 - comp.edges as i64 + comp.triangles as i64;
        comp.genus = if comp.orientable {
            (2 - comp.euler_characteristic) / 2
        } else {
            2 - comp.euler_characteristic
        };
    }
    Ok(BoundarySurfaceStats { components: comps })
}
