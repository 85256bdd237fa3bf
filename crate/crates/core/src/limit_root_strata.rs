//! Stratification of the fiber of the moduli space of limit r-th roots
//! over a fixed nodal curve.
//!
//! A stratum is an admissible weighted subgraph: an assignment of a weight
//! `u ∈ [1, r-1]` to each edge of a subset Δ such that the two half-edge
//! weights at a node sum to r and the per-vertex weight sums land in a
//! prescribed residue class.  These are exactly the 1-chains solving a
//! boundary equation mod r, so the enumeration is delegated to
//! [`crate::mod_r_homology`].  Each stratum carries an exact point count
//! `r^{2g_nu + b1(Γ∖Δ)}`, a multiplicity `r^{b1(Σ)}` and an automorphism
//! order `r^{γ}`.

use num_bigint::BigUint;

use crate::balanced_degrees::{self, BalancedStatus, Multidegree};
use crate::curve_graph::{DualGraph, QuasistableModel};
use crate::mod_r_homology::{solve_boundary, Chain0, Chain1};
use crate::{Error, Result};

/// Refuse enumerations with more than this many weightings.
pub const MAX_WEIGHTING_ENUMERATION: u128 = 1 << 24;

/// An edge-weight assignment mod r.  Weight 0 means the edge is absent
/// from the support Δ; a present edge carries `u` on its head half and
/// `r - u` on its tail half.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedSubgraph {
    r: u64,
    weights: Vec<u64>,
}

impl WeightedSubgraph {
    pub fn new(r: u64, weights: Vec<u64>) -> Result<Self> {
        if r < 2 {
            return Err(Error::BadModulus(r));
        }
        if let Some(&w) = weights.iter().find(|&&w| w >= r) {
            return Err(Error::ResidueRange {
                value: w as i64,
                r,
            });
        }
        Ok(WeightedSubgraph { r, weights })
    }

    pub fn from_chain(chain: &Chain1) -> Self {
        WeightedSubgraph {
            r: chain.modulus(),
            weights: chain.values().to_vec(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Support Δ: edges with nonzero weight, ascending.
    pub fn delta(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(e, _)| e)
            .collect()
    }

    /// Per support edge, the pair `(u, r-u)` with `u` on the head side and
    /// `r-u` on the tail side of the canonical orientation.
    pub fn weight_pairs(&self) -> Vec<(usize, u64, u64)> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(e, &w)| (e, w, self.r - w))
            .collect()
    }

    /// Sum of the half-edge weights attached to vertex `v`; a blown loop
    /// contributes the full r.
    pub fn vertex_weight_sum(&self, g: &DualGraph, v: usize) -> u64 {
        let mut acc = 0u64;
        for (e, &(tail, head)) in g.edges().iter().enumerate() {
            let u = self.weights[e];
            if u == 0 {
                continue;
            }
            if tail == head {
                if tail == v {
                    acc += self.r;
                }
                continue;
            }
            if head == v {
                acc += u;
            }
            if tail == v {
                acc += self.r - u;
            }
        }
        acc
    }

    /// Support as a bitmask over edges.
    pub fn delta_mask(&self) -> u64 {
        self.weights
            .iter()
            .enumerate()
            .fold(0u64, |m, (e, &w)| if w != 0 { m | 1 << e } else { m })
    }
}

/// Exact count of the form `coeff * r^(2 g_nu + exp_offset)`, where `g_nu`
/// is the total geometric genus of the curve.  Keeping the `2 g_nu` part
/// symbolic lets reports state counts uniformly in the genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredCount {
    pub r: u64,
    pub coeff: BigUint,
    pub exp_offset: u64,
}

impl FactoredCount {
    pub fn new(r: u64, coeff: BigUint, exp_offset: u64) -> Self {
        FactoredCount {
            r,
            coeff,
            exp_offset,
        }
    }

    pub fn one_times(r: u64, exp_offset: u64) -> Self {
        FactoredCount::new(r, BigUint::from(1u32), exp_offset)
    }

    /// The genus-free part `coeff * r^exp_offset`.
    pub fn nu_coeff(&self) -> BigUint {
        &self.coeff * BigUint::from(self.r).pow(self.exp_offset as u32)
    }

    /// Concrete value once the total geometric genus is known.
    pub fn value(&self, nu_genus: u64) -> BigUint {
        &self.coeff * BigUint::from(self.r).pow((2 * nu_genus + self.exp_offset) as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == BigUint::from(0u32)
    }
}

/// Combinatorial data of one stratum.
#[derive(Clone, Debug)]
pub struct StratumData {
    pub weighting: WeightedSubgraph,
    pub delta: Vec<usize>,
    /// Components of Γ∖Δ.
    pub gamma: usize,
    /// First Betti number of Γ∖Δ.
    pub b1_tilde: usize,
    /// First Betti number of Σ (the blow-up locus graph).
    pub b1_sigma: usize,
    /// `r^{2 g_nu + b1(Γ∖Δ)}` limit roots in the stratum.
    pub root_count: FactoredCount,
    /// Scheme multiplicity `r^{b1(Σ)}`.
    pub multiplicity: u128,
    /// Order of the automorphism (gluing) group: `r^{γ}`.
    pub aut_order: u128,
    /// True when the stratum lies in the smooth locus, i.e. multiplicity 1.
    pub smooth: bool,
}

fn pow_u128(r: u64, e: usize) -> u128 {
    (r as u128).pow(e as u32)
}

/// Computes the stratum invariants of one admissible weighting.
pub fn stratum_of(g: &DualGraph, weighting: &WeightedSubgraph) -> Result<StratumData> {
    if weighting.weights().len() != g.edge_count() {
        return Err(Error::DegreeLength {
            got: weighting.weights().len(),
            expected: g.edge_count(),
        });
    }
    let delta = weighting.delta();
    let model = g.blow_up(&delta)?;
    let tilde = model.tilde().clone();
    let b1_sigma = model.sigma_betti1();
    let r = weighting.modulus();
    Ok(StratumData {
        weighting: weighting.clone(),
        delta,
        gamma: tilde.components,
        b1_tilde: tilde.betti1,
        b1_sigma,
        root_count: FactoredCount::one_times(r, tilde.betti1 as u64),
        multiplicity: pow_u128(r, b1_sigma),
        aut_order: pow_u128(r, tilde.components),
        smooth: b1_sigma == 0,
    })
}

/// How the residue class on the vertices is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    /// The zero class (roots of the trivial bundle).
    Zero,
    /// Explicit residues, one per vertex; reduced mod r.
    Explicit(Vec<i64>),
    /// The class of `ω^l`, optionally twisted by the curve's markings
    /// and/or extra marking multiplicities at named vertices.
    Spin {
        l: i64,
        use_curve_markings: bool,
        extra_markings: Vec<(usize, i64)>,
    },
}

impl ClassSpec {
    pub fn spin(l: i64) -> Self {
        ClassSpec::Spin {
            l,
            use_curve_markings: false,
            extra_markings: Vec::new(),
        }
    }

    /// The integer multidegree whose residues define the class, when the
    /// spec is degree-derived (`None` for explicit residue lists).
    pub fn target_degrees(&self, g: &DualGraph) -> Result<Option<Vec<i64>>> {
        match self {
            ClassSpec::Zero | ClassSpec::Explicit(_) => Ok(None),
            ClassSpec::Spin {
                l,
                use_curve_markings,
                extra_markings,
            } => {
                let mut n = g.omega_degrees(*l);
                if *use_curve_markings {
                    for (v, m) in g.marking_sums().iter().enumerate() {
                        n[v] += m;
                    }
                }
                for &(v, c) in extra_markings {
                    if v >= g.vertex_count() {
                        return Err(Error::InvalidCurve(format!(
                            "marking at vertex {v} out of range"
                        )));
                    }
                    n[v] += c;
                }
                Ok(Some(n))
            }
        }
    }

    /// Resolves to a residue class on the vertices, checking spin
    /// divisibility (`r` must divide the total target degree).
    pub fn resolve(&self, g: &DualGraph, r: u64) -> Result<Chain0> {
        match self {
            ClassSpec::Zero => Chain0::new(r, vec![0; g.vertex_count()]),
            ClassSpec::Explicit(values) => {
                if values.len() != g.vertex_count() {
                    return Err(Error::ClassLength {
                        got: values.len(),
                        expected: g.vertex_count(),
                    });
                }
                Chain0::from_integers(r, values)
            }
            ClassSpec::Spin { .. } => {
                let n = self
                    .target_degrees(g)?
                    .expect("spin specs always have target degrees");
                let total: i64 = n.iter().sum();
                let residue = total.rem_euclid(r as i64) as u64;
                if residue != 0 {
                    return Err(Error::SpinDivisibility {
                        value: total,
                        residue,
                        r,
                    });
                }
                Chain0::from_integers(r, &n)
            }
        }
    }
}

/// Residue class of `ω^l` (optionally with the curve's markings added).
/// Errors unless r divides the total degree.
pub fn spin_class(g: &DualGraph, r: u64, l: i64, use_markings: bool) -> Result<Chain0> {
    ClassSpec::Spin {
        l,
        use_curve_markings: use_markings,
        extra_markings: Vec::new(),
    }
    .resolve(g, r)
}

/// All admissible weightings for the class: the boundary preimage of the
/// class in the edge chains mod r.  Empty exactly when the residues do not
/// sum to zero.
pub fn admissible_weightings(
    g: &DualGraph,
    class: &Chain0,
) -> Result<Vec<WeightedSubgraph>> {
    let count = (class.modulus() as u128).pow(g.betti1() as u32);
    if count > MAX_WEIGHTING_ENUMERATION {
        return Err(Error::SizeGate {
            what: "weighting enumeration",
            size: g.betti1(),
            limit: 24,
        });
    }
    Ok(solve_boundary(g, class)?
        .iter()
        .map(WeightedSubgraph::from_chain)
        .collect())
}

/// Limit-root multidegree of a weighting against target degrees `n`:
/// `(n_v - weight_sum_v) / r` on the base vertices, 1 on every exceptional
/// vertex.  Errors when some difference is not divisible by r.
pub fn limit_root_multidegree(
    g: &DualGraph,
    weighting: &WeightedSubgraph,
    n: &[i64],
) -> Result<(QuasistableModel, Multidegree)> {
    if n.len() != g.vertex_count() {
        return Err(Error::ClassLength {
            got: n.len(),
            expected: g.vertex_count(),
        });
    }
    let r = weighting.modulus();
    let delta = weighting.delta();
    let model = g.blow_up(&delta)?;
    let mut values = Vec::with_capacity(model.vertex_count());
    for (v, &n_v) in n.iter().enumerate() {
        let s = weighting.vertex_weight_sum(g, v) as i64;
        let num = n_v - s;
        if num.rem_euclid(r as i64) != 0 {
            return Err(Error::SpinDivisibility {
                value: num,
                residue: num.rem_euclid(r as i64) as u64,
                r,
            });
        }
        values.push(num / r as i64);
    }
    values.extend(std::iter::repeat(1).take(delta.len()));
    let d = Multidegree::new(&model, values)?;
    Ok((model, d))
}

/// Convenience: limit-root multidegree with `n = deg ω^l`.
pub fn limit_root_multidegree_spin(
    g: &DualGraph,
    weighting: &WeightedSubgraph,
    l: i64,
) -> Result<(QuasistableModel, Multidegree)> {
    limit_root_multidegree(g, weighting, &g.omega_degrees(l))
}

/// One stratum as reported by [`fiber_inventory`].
#[derive(Clone, Debug)]
pub struct StratumRecord {
    pub stratum: StratumData,
    /// Limit-root multidegree on the blow-up, when the class came with
    /// target degrees (spin specs).
    pub multidegree: Option<Multidegree>,
    /// Balancedness of that multidegree (needs genus >= 2).
    pub balanced: Option<BalancedStatus>,
}

/// The full fiber stratification for one curve and class.
#[derive(Clone, Debug)]
pub struct FiberReport {
    pub r: u64,
    pub class: Vec<u64>,
    pub genus: u64,
    pub nu_genus: u64,
    /// Target degrees behind the class, for spin-derived classes.
    pub target_degrees: Option<Vec<i64>>,
    pub spin_l: Option<i64>,
    pub strata: Vec<StratumRecord>,
    /// Total length `Σ multiplicity · root_count`; always `r^{2g}`.
    pub total_length: FactoredCount,
}

/// Enumerates the fiber stratification.  Strata are sorted by support
/// bitmask, then by weight vector.  The weighted length identity
/// `Σ mult · count = r^{2g}` is verified on every call.
pub fn fiber_inventory(g: &DualGraph, r: u64, spec: &ClassSpec) -> Result<FiberReport> {
    let class = spec.resolve(g, r)?;
    if class.total() != 0 {
        return Err(Error::InconsistentClass {
            sum: class.total(),
            r,
        });
    }
    let target_degrees = spec.target_degrees(g)?;
    let spin_l = match spec {
        ClassSpec::Spin { l, .. } => Some(*l),
        _ => None,
    };
    let weightings = admissible_weightings(g, &class)?;
    let genus = g.genus();
    let nu_genus: u64 = g.vertices().iter().map(|v| v.genus).sum();

    let mut strata = Vec::with_capacity(weightings.len());
    for w in &weightings {
        let stratum = stratum_of(g, w)?;
        let (multidegree, balanced) = match &target_degrees {
            Some(n) => {
                let (model, d) = limit_root_multidegree(g, w, n)?;
                let status = if genus >= 2 {
                    Some(balanced_degrees::classify(&model, &d)?)
                } else {
                    None
                };
                (Some(d), status)
            }
            None => (None, None),
        };
        strata.push(StratumRecord {
            stratum,
            multidegree,
            balanced,
        });
    }
    strata.sort_by(|a, b| {
        let (wa, wb) = (&a.stratum.weighting, &b.stratum.weighting);
        wa.delta_mask()
            .cmp(&wb.delta_mask())
            .then_with(|| wa.weights().cmp(wb.weights()))
    });

    // Weighted length identity: Σ mult · r^{b1(Γ∖Δ)} = r^{2 b1(Γ)},
    // so materialised Σ mult · count = r^{2g}.
    let b1 = g.betti1();
    let nu_total: BigUint = strata
        .iter()
        .map(|s| BigUint::from(s.stratum.multiplicity) * s.stratum.root_count.nu_coeff())
        .sum();
    assert_eq!(
        nu_total,
        BigUint::from(r).pow(2 * b1 as u32),
        "weighted stratum lengths must sum to r^(2 b1)"
    );
    let total_length = FactoredCount::one_times(r, 2 * b1 as u64);

    Ok(FiberReport {
        r,
        class: class.values().to_vec(),
        genus,
        nu_genus,
        target_degrees,
        spin_l,
        strata,
        total_length,
    })
}
