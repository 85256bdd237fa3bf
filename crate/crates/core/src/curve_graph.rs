//! Genus-labelled multigraphs (dual graphs of nodal curves) and their
//! quasistable blow-up models.
//!
//! Vertices are irreducible components, carrying a geometric genus and an
//! optional multiset of marking labels with integer multiplicities.  Edges
//! are nodes; loops and parallel edges are allowed.  Edges carry a canonical
//! orientation with the smaller vertex id as tail (parallel edges and loops
//! keep insertion order), which downstream chain-group code relies on.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, MAX_SUBSET_VERTICES};

/// One vertex of a dual graph: a component with its geometric genus and
/// the markings it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub genus: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub markings: BTreeMap<String, i64>,
}

impl VertexData {
    pub fn plain(genus: u64) -> Self {
        VertexData {
            genus,
            markings: BTreeMap::new(),
        }
    }

    /// Total marking multiplicity carried by this vertex.
    pub fn marking_sum(&self) -> i64 {
        self.markings.values().sum()
    }
}

/// An edge as an ordered pair `(tail, head)` with `tail <= head`.
pub type Edge = (usize, usize);

/// Opaque identity of a graph's combinatorial data, used to tag
/// multidegrees so that values built on one graph are rejected by another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphTag(u64);

/// Connected genus-labelled multigraph.  Immutable after construction.
#[derive(Clone, Debug)]
pub struct DualGraph {
    vertices: Vec<VertexData>,
    edges: Vec<Edge>,
    tag: GraphTag,
}

impl PartialEq for DualGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}
impl Eq for DualGraph {}

impl DualGraph {
    /// Builds a dual graph, canonicalising edge orientation and checking
    /// connectivity.  `edges` entries are vertex-id pairs in any order.
    pub fn new(vertices: Vec<VertexData>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidCurve("graph has no vertices".into()));
        }
        let n = vertices.len();
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidCurve(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            canon.push(if a <= b { (a, b) } else { (b, a) });
        }
        let components = component_count(n, &canon);
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        let tag = fingerprint(&vertices, &canon);
        Ok(DualGraph {
            vertices,
            edges: canon,
            tag,
        })
    }

    /// Convenience constructor for unmarked graphs given per-vertex genera.
    pub fn from_genera(genera: &[u64], edges: &[(usize, usize)]) -> Result<Self> {
        DualGraph::new(
            genera.iter().map(|&g| VertexData::plain(g)).collect(),
            edges.to_vec(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: usize) -> &VertexData {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tag(&self) -> GraphTag {
        self.tag
    }

    /// First Betti number `|E| - |V| + 1` (the graph is connected).
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Arithmetic genus: sum of geometric genera plus `betti1`.
    pub fn genus(&self) -> u64 {
        let geom: u64 = self.vertices.iter().map(|v| v.genus).sum();
        geom + self.betti1() as u64
    }

    /// Valence of `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Degree of the l-th power of the dualising sheaf on component `v`:
    /// `l * (2 genus(v) - 2 + valence(v))`.
    pub fn omega_degree(&self, l: i64, v: usize) -> i64 {
        l * (2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64)
    }

    /// Per-vertex ω-degrees at exponent `l`.
    pub fn omega_degrees(&self, l: i64) -> Vec<i64> {
        (0..self.vertex_count())
            .map(|v| self.omega_degree(l, v))
            .collect()
    }

    /// Per-vertex total marking multiplicities.
    pub fn marking_sums(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.marking_sum()).collect()
    }

    /// ω-degree summed over a subcurve.
    pub fn subcurve_omega(&self, l: i64, z: Subcurve) -> i64 {
        z.iter().map(|v| self.omega_degree(l, v)).sum()
    }

    /// Number of edges with exactly one endpoint in `z` (loops never count).
    pub fn boundary_count(&self, z: Subcurve) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) != z.contains(b))
            .count()
    }

    /// Iterator over nonempty proper vertex subsets, in increasing bitmask
    /// order.  Errors above [`MAX_SUBSET_VERTICES`] vertices.
    pub fn subcurves(&self) -> Result<impl Iterator<Item = Subcurve>> {
        subcurves_of(self.vertex_count())
    }

    /// Betti number and component count of the subgraph induced on `z`
    /// (vertices `z`, edges with both endpoints in `z`).
    pub fn induced_invariants(&self, z: Subcurve) -> (usize, usize) {
        let verts: Vec<usize> = z.iter().collect();
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) && z.contains(b))
            .map(|&(a, b)| (index[&a], index[&b]))
            .collect();
        let comps = component_count(verts.len(), &edges);
        let b1 = edges.len() + comps - verts.len();
        (b1, comps)
    }

    /// Blows up the nodes in `delta`, producing a quasistable model.
    pub fn blow_up(&self, delta: &[usize]) -> Result<QuasistableModel> {
        QuasistableModel::new(self.clone(), delta)
    }
}

fn fingerprint(vertices: &[VertexData], edges: &[Edge]) -> GraphTag {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for v in vertices {
        v.genus.hash(&mut h);
        for (k, c) in &v.markings {
            k.hash(&mut h);
            c.hash(&mut h);
        }
        0xffu8.hash(&mut h);
    }
    edges.hash(&mut h);
    GraphTag(h.finish())
}

fn component_count(n: usize, edges: &[Edge]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut comps = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    comps
}

/// Subset of vertices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Subcurve(u64);

impl Subcurve {
    pub const EMPTY: Subcurve = Subcurve(0);

    pub fn from_bits(bits: u64) -> Self {
        Subcurve(bits)
    }

    pub fn from_vertices(vs: &[usize]) -> Self {
        Subcurve(vs.iter().fold(0u64, |acc, &v| acc | (1u64 << v)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(self, v: usize) -> Self {
        Subcurve(self.0 | 1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside a graph with `n` vertices.
    pub fn complement(self, n: usize) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Subcurve(full & !self.0)
    }

    pub fn is_subset_of(self, other: Subcurve) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Nonempty proper subsets of `0..n`, ascending by bitmask value.
pub fn subcurves_of(n: usize) -> Result<impl Iterator<Item = Subcurve>> {
    if n > MAX_SUBSET_VERTICES {
        return Err(Error::SizeGate {
            what: "subcurve enumeration over vertices",
            size: n,
            limit: MAX_SUBSET_VERTICES,
        });
    }
    let full: u64 = (1u64 << n) - 1;
    Ok((1..full).map(Subcurve))
}

/// A blow-up of a dual graph at a set of nodes.  The derived graph inserts
/// one genus-0 exceptional vertex in the middle of every blown edge;
/// exceptional vertices get ids `n..n+|Δ|` following the sorted edge list.
#[derive(Clone, Debug)]
pub struct QuasistableModel {
    base: DualGraph,
    delta: Vec<usize>,
    derived_edges: Vec<Edge>,
    tilde: OnceLock<TildeDecomposition>,
}

/// Connected-component structure of the base graph with Δ removed.
#[derive(Clone, Debug)]
pub struct TildeDecomposition {
    /// Component index of every base vertex.
    pub component_of: Vec<usize>,
    /// Number of components (γ).
    pub components: usize,
    /// First Betti number of the (possibly disconnected) subgraph.
    pub betti1: usize,
}

impl QuasistableModel {
    pub fn new(base: DualGraph, delta: &[usize]) -> Result<Self> {
        let m = base.edge_count();
        let mut delta: Vec<usize> = delta.to_vec();
        delta.sort_unstable();
        delta.dedup();
        if let Some(&bad) = delta.iter().find(|&&e| e >= m) {
            return Err(Error::EdgeRange {
                index: bad,
                edges: m,
            });
        }
        let n = base.vertex_count();
        let in_delta = |e: usize| delta.binary_search(&e).is_ok();
        let mut derived_edges = Vec::with_capacity(m + delta.len());
        for (e, &(a, b)) in base.edges().iter().enumerate() {
            if !in_delta(e) {
                derived_edges.push((a, b));
            }
        }
        for (i, &e) in delta.iter().enumerate() {
            let (a, b) = base.edges()[e];
            let x = n + i;
            derived_edges.push((a, x));
            derived_edges.push((b, x));
        }
        Ok(QuasistableModel {
            base,
            delta,
            derived_edges,
            tilde: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &DualGraph {
        &self.base
    }

    /// Blown-up edge ids, sorted ascending.
    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn is_blown(&self, edge: usize) -> bool {
        self.delta.binary_search(&edge).is_ok()
    }

    /// Vertex count of the derived graph (base vertices then exceptionals).
    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count() + self.delta.len()
    }

    pub fn is_exceptional(&self, v: usize) -> bool {
        v >= self.base.vertex_count()
    }

    /// The base edge that the exceptional vertex `v` subdivides.
    pub fn blown_edge_of(&self, v: usize) -> Option<usize> {
        v.checked_sub(self.base.vertex_count())
            .and_then(|i| self.delta.get(i).copied())
    }

    /// Edges of the derived graph: unblown base edges first (ascending base
    /// id), then the two half-edges of each blown edge (ascending).
    pub fn derived_edges(&self) -> &[Edge] {
        &self.derived_edges
    }

    pub fn derived_valence(&self, v: usize) -> usize {
        self.derived_edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn genus_of(&self, v: usize) -> u64 {
        if self.is_exceptional(v) {
            0
        } else {
            self.base.vertex(v).genus
        }
    }

    /// ω-degree of vertex `v` in the derived graph at exponent `l`.
    /// Exceptional vertices always get 0.
    pub fn omega_degree(&self, l: i64, v: usize) -> i64 {
        l * (2 * self.genus_of(v) as i64 - 2 + self.derived_valence(v) as i64)
    }

    pub fn omega_degrees(&self, l: i64) -> Vec<i64> {
        (0..self.vertex_count())
            .map(|v| self.omega_degree(l, v))
            .collect()
    }

    /// Arithmetic genus of the derived graph; blowing up preserves it.
    pub fn genus(&self) -> u64 {
        self.base.genus()
    }

    pub fn subcurve_omega(&self, l: i64, z: Subcurve) -> i64 {
        z.iter().map(|v| self.omega_degree(l, v)).sum()
    }

    /// `k_Z` in the derived graph.
    pub fn boundary_count(&self, z: Subcurve) -> usize {
        self.derived_edges
            .iter()
            .filter(|&&(a, b)| z.contains(a) != z.contains(b))
            .count()
    }

    /// All non-exceptional vertices as a subcurve (the support of X-tilde).
    pub fn non_exceptional(&self) -> Subcurve {
        Subcurve::from_bits((1u64 << self.base.vertex_count()) - 1)
    }

    /// Nonempty proper subsets of the derived vertex set.
    pub fn subcurves(&self) -> Result<impl Iterator<Item = Subcurve>> {
        subcurves_of(self.vertex_count())
    }

    /// Component decomposition of the base graph minus Δ.
    pub fn tilde(&self) -> &TildeDecomposition {
        self.tilde.get_or_init(|| {
            let n = self.base.vertex_count();
            let kept: Vec<Edge> = self
                .base
                .edges()
                .iter()
                .enumerate()
                .filter(|(e, _)| !self.is_blown(*e))
                .map(|(_, &ab)| ab)
                .collect();
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for &(a, b) in &kept {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
            let mut label = BTreeMap::new();
            let mut component_of = vec![0usize; n];
            for (v, slot) in component_of.iter_mut().enumerate() {
                let root = find(&mut parent, v);
                let next = label.len();
                *slot = *label.entry(root).or_insert(next);
            }
            let components = label.len();
            let betti1 = kept.len() + components - n;
            let t = TildeDecomposition {
                component_of,
                components,
                betti1,
            };
            debug_assert_eq!(
                self.sigma_betti1_raw(&t) + t.betti1,
                self.base.betti1(),
                "b1(Sigma) + b1(tilde) must equal b1(base)"
            );
            t
        })
    }

    fn sigma_betti1_raw(&self, t: &TildeDecomposition) -> usize {
        let sigma_edges: Vec<Edge> = self
            .delta
            .iter()
            .map(|&e| {
                let (a, b) = self.base.edges()[e];
                let (ca, cb) = (t.component_of[a], t.component_of[b]);
                if ca <= cb {
                    (ca, cb)
                } else {
                    (cb, ca)
                }
            })
            .collect();
        let comps = component_count(t.components, &sigma_edges);
        sigma_edges.len() + comps - t.components
    }

    /// Edges of the dual graph Σ of the exceptional locus: one vertex per
    /// component of the base minus Δ, one edge per blown node.
    pub fn sigma_edges(&self) -> Vec<Edge> {
        let t = self.tilde();
        self.delta
            .iter()
            .map(|&e| {
                let (a, b) = self.base.edges()[e];
                let (ca, cb) = (t.component_of[a], t.component_of[b]);
                if ca <= cb {
                    (ca, cb)
                } else {
                    (cb, ca)
                }
            })
            .collect()
    }

    /// First Betti number of Σ.  Always equals
    /// `betti1(base) - betti1(base minus Δ)`.
    pub fn sigma_betti1(&self) -> usize {
        let t = self.tilde().clone();
        self.sigma_betti1_raw(&t)
    }
}

// ---------------------------------------------------------------------------
// JSON wire format and presets
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct WireVertex {
    id: usize,
    genus: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    markings: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
struct WireCurve {
    vertices: Vec<WireVertex>,
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    /// Parses the JSON curve format:
    /// `{"vertices":[{"id":0,"genus":1,"markings":{}},...],"edges":[[0,1],...]}`.
    /// Vertex ids must cover `0..n` exactly; edge ids are array positions.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WireCurve =
            serde_json::from_str(text).map_err(|e| Error::CurveJson(e.to_string()))?;
        let n = wire.vertices.len();
        let mut slots: Vec<Option<VertexData>> = vec![None; n];
        for wv in wire.vertices {
            if wv.id >= n {
                return Err(Error::InvalidCurve(format!(
                    "vertex id {} out of range 0..{n}",
                    wv.id
                )));
            }
            if slots[wv.id].is_some() {
                return Err(Error::InvalidCurve(format!("duplicate vertex id {}", wv.id)));
            }
            slots[wv.id] = Some(VertexData {
                genus: wv.genus,
                markings: wv.markings,
            });
        }
        let vertices = slots
            .into_iter()
            .map(|s| s.expect("all ids covered after range+dup checks"))
            .collect();
        DualGraph::new(vertices, wire.edges)
    }

    /// Serialises to the JSON curve format (stable field order).
    pub fn to_json(&self) -> String {
        let wire = WireCurve {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| WireVertex {
                    id,
                    genus: v.genus,
                    markings: v.markings.clone(),
                })
                .collect(),
            edges: self.edges.clone(),
        };
        serde_json::to_string(&wire).expect("wire structs always serialise")
    }

    /// Named example curves.
    ///
    /// * `example-4.2` / `fibra`: two genus-1 components joined at three
    ///   nodes (a "banana" with three strands), genus 4.
    /// * `compact-chain:g1,g2,...`: a chain of components with the given
    ///   genera, one node between neighbours (compact type).
    pub fn preset(name: &str) -> Result<Self> {
        if let Some(list) = name.strip_prefix("compact-chain:") {
            let genera: Vec<u64> = list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::UnknownPreset(name.to_string()))
                })
                .collect::<Result<_>>()?;
            if genera.is_empty() {
                return Err(Error::UnknownPreset(name.to_string()));
            }
            let edges: Vec<(usize, usize)> = (1..genera.len()).map(|i| (i - 1, i)).collect();
            return DualGraph::from_genera(&genera, &edges);
        }
        match name {
            "example-4.2" | "fibra" => {
                DualGraph::from_genera(&[1, 1], &[(0, 1), (0, 1), (0, 1)])
            }
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }
}
