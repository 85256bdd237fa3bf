//! Simplicial chains of a multigraph with Z/r coefficients.
//!
//! Edges use the graph's canonical orientation (tail -> head).  The
//! boundary of an edge chain adds the coefficient at the head and subtracts
//! it at the tail, so loops vanish; the coboundary of a vertex function
//! takes head-minus-tail differences.  `solve_boundary` inverts the
//! boundary map by parametrising the solution set with one free coefficient
//! per independent cycle (the non-spanning-tree edges).

use num_bigint::BigUint;

use crate::curve_graph::DualGraph;
use crate::{Error, Result};

/// 0-chain: one residue per vertex, tagged with its modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain0 {
    r: u64,
    values: Vec<u64>,
}

/// 1-chain: one residue per edge, tagged with its modulus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chain1 {
    r: u64,
    values: Vec<u64>,
}

fn check_modulus(r: u64) -> Result<()> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    Ok(())
}

impl Chain0 {
    pub fn new(r: u64, values: Vec<u64>) -> Result<Self> {
        check_modulus(r)?;
        if let Some(&v) = values.iter().find(|&&v| v >= r) {
            return Err(Error::ResidueRange {
                value: v as i64,
                r,
            });
        }
        Ok(Chain0 { r, values })
    }

    /// Reduces arbitrary integers into `[0, r)`.
    pub fn from_integers(r: u64, values: &[i64]) -> Result<Self> {
        check_modulus(r)?;
        Ok(Chain0 {
            r,
            values: values.iter().map(|&v| v.rem_euclid(r as i64) as u64).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of all residues mod r; the boundary image is exactly the
    /// kernel of this functional.
    pub fn total(&self) -> u64 {
        self.values.iter().fold(0u64, |a, &v| (a + v) % self.r)
    }
}

impl Chain1 {
    pub fn new(r: u64, values: Vec<u64>) -> Result<Self> {
        check_modulus(r)?;
        if let Some(&v) = values.iter().find(|&&v| v >= r) {
            return Err(Error::ResidueRange {
                value: v as i64,
                r,
            });
        }
        Ok(Chain1 { r, values })
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Edge ids with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(e, _)| e)
            .collect()
    }
}

fn check_graph_chain0(g: &DualGraph, c: &Chain0) -> Result<()> {
    if c.values.len() != g.vertex_count() {
        return Err(Error::ClassLength {
            got: c.values.len(),
            expected: g.vertex_count(),
        });
    }
    Ok(())
}

fn check_graph_chain1(g: &DualGraph, c: &Chain1) -> Result<()> {
    if c.values.len() != g.edge_count() {
        return Err(Error::DegreeLength {
            got: c.values.len(),
            expected: g.edge_count(),
        });
    }
    Ok(())
}

/// Boundary map: edge coefficient u contributes +u at the head and -u at
/// the tail; loops contribute nothing.
pub fn boundary(g: &DualGraph, chain: &Chain1) -> Result<Chain0> {
    check_graph_chain1(g, chain)?;
    let r = chain.r;
    let mut out = vec![0u64; g.vertex_count()];
    for (e, &(tail, head)) in g.edges().iter().enumerate() {
        let u = chain.values[e];
        if tail == head {
            continue;
        }
        out[head] = (out[head] + u) % r;
        out[tail] = (out[tail] + r - u) % r;
    }
    Chain0::new(r, out)
}

/// Coboundary map: the edge value is head-value minus tail-value.
pub fn coboundary(g: &DualGraph, f: &Chain0) -> Result<Chain1> {
    check_graph_chain0(g, f)?;
    let r = f.r;
    let values = g
        .edges()
        .iter()
        .map(|&(tail, head)| (f.values[head] + r - f.values[tail]) % r)
        .collect();
    Chain1::new(r, values)
}

/// Number of 1-cycles mod r: `r^{b1}` as an exact integer.
pub fn h1_count(g: &DualGraph, r: u64) -> Result<BigUint> {
    check_modulus(r)?;
    Ok(BigUint::from(r).pow(g.betti1() as u32))
}

/// All 1-chains with boundary `target`, or the empty list when the target
/// residues do not sum to zero.  When nonempty there are exactly `r^{b1}`
/// solutions, listed by increasing lexicographic order of the coefficients
/// on the non-spanning-tree edges (ascending edge id).
pub fn solve_boundary(g: &DualGraph, target: &Chain0) -> Result<Vec<Chain1>> {
    check_graph_chain0(g, target)?;
    let r = target.r;
    if target.total() != 0 {
        return Ok(Vec::new());
    }

    let n = g.vertex_count();
    let m = g.edge_count();

    // BFS spanning tree from vertex 0, scanning edges in id order.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        adjacency[a].push((e, b));
        if a != b {
            adjacency[b].push((e, a));
        }
    }
    let mut parent_edge = vec![usize::MAX; n];
    let mut in_tree = vec![false; m];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(e, w) in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = e;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "dual graphs are connected");

    let free: Vec<usize> = (0..m).filter(|&e| !in_tree[e]).collect();
    debug_assert_eq!(free.len(), g.betti1());

    let total: u64 = (r as u128).pow(free.len() as u32).try_into().map_err(|_| {
        Error::SizeGate {
            what: "boundary preimage enumeration",
            size: free.len(),
            limit: 64,
        }
    })?;

    let mut solutions = Vec::with_capacity(total as usize);
    let mut coeffs = vec![0u64; m];
    for index in 0..total {
        // Big-endian digits: the smallest free edge id varies slowest, so
        // output order is lexicographic in the free coefficients.
        let mut rem = index;
        for &e in free.iter().rev() {
            coeffs[e] = rem % r;
            rem /= r;
        }
        // Determine tree-edge coefficients leaf-inward: visiting vertices
        // in reverse BFS order, each non-root vertex fixes its parent edge.
        for &v in order.iter().skip(1).rev() {
            let pe = parent_edge[v];
            let (_, head) = g.edges()[pe];
            let mut acc = 0u64; // contribution at v from all other edges
            for &(e, _) in &adjacency[v] {
                if e == pe {
                    continue;
                }
                let (t, h) = g.edges()[e];
                if t == h {
                    continue;
                }
                if h == v {
                    acc = (acc + coeffs[e]) % r;
                } else {
                    acc = (acc + r - coeffs[e]) % r;
                }
            }
            let want = (target.values[v] + r - acc) % r;
            coeffs[pe] = if head == v { want } else { (r - want) % r };
        }
        debug_assert_eq!(
            boundary(g, &Chain1::new(r, coeffs.clone()).unwrap())
                .unwrap()
                .values(),
            target.values(),
        );
        solutions.push(Chain1 {
            r,
            values: coeffs.clone(),
        });
    }
    Ok(solutions)
}

/// Checks `boundary(x) == target` without enumerating.
pub fn is_boundary_of(g: &DualGraph, x: &Chain1, target: &Chain0) -> Result<bool> {
    if x.r != target.r {
        return Err(Error::BadModulus(x.r.min(target.r)));
    }
    Ok(boundary(g, x)?.values() == target.values())
}

/// Exact count of solutions: `r^{b1}` when the target is consistent,
/// zero otherwise.
pub fn solution_count(g: &DualGraph, target: &Chain0) -> Result<BigUint> {
    check_graph_chain0(g, target)?;
    if target.total() != 0 {
        return Ok(BigUint::from(0u32));
    }
    h1_count(g, target.r)
}
