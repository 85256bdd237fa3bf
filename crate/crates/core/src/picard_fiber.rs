//! The fiber of the closure of the root locus inside the compactified
//! Picard scheme.
//!
//! Points of that fiber are classes M with M^r isomorphic to a twist of
//! ω^l by a twister — a line bundle pulled back from a smoothing of the
//! curve.  Numerically a twister on a blow-up X is a degree vector t with
//! t = r on exceptional components, `t_v ≡ -l w_v (mod r)` elsewhere,
//! total zero, and `2|t_Z| <= k_Z r` on every subcurve.  Each admissible
//! (Δ, t) pair yields a stratum whose root multidegree is
//! `(l w + t)/r`, with exact point counts where the stratum is discrete
//! and dimension bounds where it is not.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::balanced_degrees::{classify, BalancedStatus, Multidegree};
use crate::curve_graph::{DualGraph, QuasistableModel, Subcurve};
use crate::limit_root_strata::{fiber_inventory, ClassSpec, FactoredCount, FiberReport};
use crate::{Error, Result, MAX_MODEL_VERTICES};

/// Refuse per-stratum weighting searches beyond this many candidates.
const MAX_ROOT_CLASS_SEARCH: u128 = 1 << 24;

/// Admissible twister degree vectors on the model, ascending
/// lexicographically.  Entries follow derived vertex order (base vertices
/// then exceptionals, which always carry r).
pub fn twister_candidates(model: &QuasistableModel, r: u64, l: i64) -> Result<Vec<Vec<i64>>> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    let nv = model.vertex_count();
    if nv > MAX_MODEL_VERTICES {
        return Err(Error::SizeGate {
            what: "twister enumeration",
            size: nv,
            limit: MAX_MODEL_VERTICES,
        });
    }
    let n_base = model.base().vertex_count();
    let n_exc = nv - n_base;
    let ri = r as i64;

    // Per-vertex candidate values: the residue class of -l w_v inside the
    // window |t| <= floor(k_v r / 2) given by the singleton subcurves.
    let mut choices: Vec<Vec<i64>> = Vec::with_capacity(n_base);
    for v in 0..n_base {
        let w_v = model.omega_degree(1, v);
        let k_v = model.boundary_count(Subcurve::from_vertices(&[v])) as i64;
        let bound = k_v * ri / 2;
        let residue = (-(l * w_v)).rem_euclid(ri);
        let mut vals = Vec::new();
        let mut t = residue - ((residue + bound) / ri) * ri;
        while t < -bound {
            t += ri;
        }
        while t <= bound {
            vals.push(t);
            t += ri;
        }
        choices.push(vals);
    }

    // Base entries must sum to -r|Δ| so that the full vector sums to zero.
    let target: i64 = -ri * n_exc as i64;
    let mut min_suffix = vec![0i64; n_base + 1];
    let mut max_suffix = vec![0i64; n_base + 1];
    for v in (0..n_base).rev() {
        let lo = choices[v].first().copied().unwrap_or(0);
        let hi = choices[v].last().copied().unwrap_or(0);
        min_suffix[v] = min_suffix[v + 1] + lo;
        max_suffix[v] = max_suffix[v + 1] + hi;
    }

    let mut out = Vec::new();
    let mut current: Vec<i64> = Vec::with_capacity(nv);
    type Sink<'a> = dyn Fn(&[i64], &mut Vec<Vec<i64>>) + 'a;
    fn recurse(
        choices: &[Vec<i64>],
        min_suffix: &[i64],
        max_suffix: &[i64],
        remaining: i64,
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        finish: &Sink,
    ) {
        let i = current.len();
        if i == choices.len() {
            if remaining == 0 {
                finish(current, out);
            }
            return;
        }
        for &v in &choices[i] {
            let rest = remaining - v;
            if rest < min_suffix[i + 1] || rest > max_suffix[i + 1] {
                continue;
            }
            current.push(v);
            recurse(choices, min_suffix, max_suffix, rest, current, out, finish);
            current.pop();
        }
    }
    let finish = |base: &[i64], out: &mut Vec<Vec<i64>>| {
        let mut t = base.to_vec();
        t.extend(std::iter::repeat(ri).take(n_exc));
        // Full subcurve condition 2|t_Z| <= k_Z r.
        let full = (1u64 << nv) - 1;
        for bits in 1..full {
            let z = Subcurve::from_bits(bits);
            let t_z: i64 = z.iter().map(|v| t[v]).sum();
            let k_z = model.boundary_count(z) as i64;
            if 2 * t_z.abs() > k_z * ri {
                return;
            }
        }
        out.push(t);
    };
    recurse(
        &choices,
        &min_suffix,
        &max_suffix,
        target,
        &mut current,
        &mut out,
        &finish,
    );
    Ok(out)
}

/// Exact or bounded stratum dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Exact(u64),
    Bound(u64),
}

impl Dimension {
    pub fn is_exact(&self) -> bool {
        matches!(self, Dimension::Exact(_))
    }

    pub fn value(&self) -> u64 {
        match *self {
            Dimension::Exact(d) | Dimension::Bound(d) => d,
        }
    }
}

/// Witness used by the two-component dimension formula: an integer
/// `s = r j - l w_1` with `k <= |s| < k r / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepWitness {
    pub s: i64,
    pub j: i64,
}

/// Finds the witness with the smallest |s| (positive preferred), if any.
pub fn step2_exists(k: u64, r: u64, lw1: i64) -> Option<StepWitness> {
    let ri = r as i64;
    let ki = k as i64;
    for abs_s in ki.. {
        if 2 * abs_s >= ki * ri {
            return None;
        }
        for s in [abs_s, -abs_s] {
            if (s + lw1).rem_euclid(ri) == 0 {
                return Some(StepWitness {
                    s,
                    j: (s + lw1) / ri,
                });
            }
        }
    }
    unreachable!()
}

/// Outcome of the dimension formula for a two-component curve with k
/// nodes: the fiber has dimension k-1 except in a short list of small
/// cases where it is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiassOutcome {
    pub k: u64,
    pub r: u64,
    /// Residues of l·w on the two components, mod r.
    pub residues: (u64, u64),
    pub dimension: u64,
    /// Which exception fired, when the dimension is 0.
    pub exception: Option<&'static str>,
    /// Witness behind the k-1 case.
    pub witness: Option<StepWitness>,
}

/// Dimension of the root-locus fiber for a curve with two smooth
/// components meeting in `k` nodes, given the residues of l·w mod r.
pub fn riass_dimension(k: u64, r: u64, res1: u64, res2: u64) -> Result<RiassOutcome> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    if k < 1 {
        return Err(Error::RiassRange("k must be at least 1".into()));
    }
    if res1 >= r || res2 >= r {
        return Err(Error::ResidueRange {
            value: res1.max(res2) as i64,
            r,
        });
    }
    if (res1 + res2) % r != 0 {
        return Err(Error::InconsistentClass {
            sum: (res1 + res2) % r,
            r,
        });
    }
    let exception = if r == 2 {
        Some("r=2")
    } else if k == 2 && res1 == 0 && res2 == 0 {
        Some("k=2, l·w ≡ 0")
    } else if k == 3 && r == 4 && res1 == 2 && res2 == 2 {
        Some("k=3, r=4, l·w ≡ (2,2)")
    } else if k == 4 && r == 3 && res1 == 0 && res2 == 0 {
        Some("k=4, r=3, l·w ≡ 0")
    } else {
        None
    };
    let witness = step2_exists(k, r, res1 as i64);
    Ok(RiassOutcome {
        k,
        r,
        residues: (res1, res2),
        dimension: if exception.is_some() { 0 } else { k - 1 },
        exception,
        witness,
    })
}

/// One stratum of the compactified fiber.
#[derive(Clone, Debug)]
pub struct ShatStratum {
    pub delta: Vec<usize>,
    /// Twister degrees in derived vertex order.
    pub twister: Vec<i64>,
    /// Root multidegree `(l w + t)/r` (exceptionals get 1).
    pub multidegree: Multidegree,
    pub status: BalancedStatus,
    /// Weightings with support exactly Δ whose vertex sums equal -t:
    /// the limit-root classes sitting in this numerical stratum.
    pub root_class_count: u64,
    /// `root_class_count · r^{2 g_nu + b1(Γ∖Δ)}`.
    pub point_count: FactoredCount,
    pub dimension: Dimension,
}

/// The full compactified fiber inventory.
#[derive(Clone, Debug)]
pub struct ShatReport {
    pub r: u64,
    pub l: i64,
    pub genus: u64,
    pub nu_genus: u64,
    /// `l (2g-2)/r`.
    pub total_degree: i64,
    pub strata: Vec<ShatStratum>,
    /// Sum of point-count nu-coefficients over the 0-dimensional strata.
    pub zero_dim_nu_coeff: BigUint,
    /// Strata with exact positive dimension.
    pub positive_dim_exact: usize,
    /// Strata whose dimension is only bounded.
    pub bounded_dim: usize,
}

fn count_root_classes(
    g: &DualGraph,
    delta: &[usize],
    t: &[i64],
    r: u64,
) -> Result<u64> {
    if delta.is_empty() {
        let ok = (0..g.vertex_count()).all(|v| t[v] == 0);
        return Ok(ok as u64);
    }
    let span = (r as u128 - 1).pow(delta.len() as u32);
    if span > MAX_ROOT_CLASS_SEARCH {
        return Err(Error::SizeGate {
            what: "root class search",
            size: delta.len(),
            limit: 24,
        });
    }
    let n = g.vertex_count();
    let mut count = 0u64;
    let mut weights = vec![0u64; delta.len()];
    'outer: for index in 0..span {
        let mut rem = index;
        for w in weights.iter_mut().rev() {
            *w = (rem % (r as u128 - 1)) as u64 + 1;
            rem /= r as u128 - 1;
        }
        let mut sums = vec![0i64; n];
        for (i, &e) in delta.iter().enumerate() {
            let (tail, head) = g.edges()[e];
            if tail == head {
                sums[tail] += r as i64;
            } else {
                sums[head] += weights[i] as i64;
                sums[tail] += (r - weights[i]) as i64;
            }
        }
        for v in 0..n {
            if sums[v] != -t[v] {
                continue 'outer;
            }
        }
        count += 1;
    }
    Ok(count)
}

/// True when the base is a two-component curve without loops, the case
/// where the dimension formula is exact.
fn two_component_base(g: &DualGraph) -> bool {
    g.vertex_count() == 2 && g.edges().iter().all(|&(a, b)| a != b)
}

fn stratum_dimension(
    g: &DualGraph,
    model: &QuasistableModel,
    t: &[i64],
    r: u64,
    status: &BalancedStatus,
) -> Dimension {
    let b1 = g.betti1() as u64;
    let n_base = g.vertex_count();
    let trivial_twister = model.delta().is_empty() && t.iter().all(|&x| x == 0);
    if trivial_twister || b1 == 0 || n_base == 1 {
        return Dimension::Exact(0);
    }
    if two_component_base(g) {
        if model.delta().is_empty() {
            let k = g.edge_count() as i64;
            let s = t[0];
            if s.abs() >= k && 2 * s.abs() < k * r as i64 {
                return Dimension::Exact(b1);
            }
            return Dimension::Bound(b1);
        }
        if status.is_stably_balanced() {
            return Dimension::Exact(model.tilde().betti1 as u64);
        }
        return Dimension::Bound(b1);
    }
    Dimension::Bound(b1)
}

/// Enumerates the strata of the compactified fiber over the given curve:
/// every blow-up Δ, every admissible twister t, with root multidegrees,
/// balancedness, point counts and dimensions.
pub fn shat_fiber(g: &DualGraph, r: u64, l: i64, parallel: bool) -> Result<ShatReport> {
    let genus = g.genus();
    if genus < 2 {
        return Err(Error::GenusTooSmall { genus });
    }
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    let deg_total = l * (2 * genus as i64 - 2);
    if deg_total.rem_euclid(r as i64) != 0 {
        return Err(Error::SpinDivisibility {
            value: deg_total,
            residue: deg_total.rem_euclid(r as i64) as u64,
            r,
        });
    }
    let m = g.edge_count();
    if g.vertex_count() + m > MAX_MODEL_VERTICES {
        return Err(Error::SizeGate {
            what: "compactified fiber enumeration",
            size: g.vertex_count() + m,
            limit: MAX_MODEL_VERTICES,
        });
    }

    let masks: Vec<u64> = (0..(1u64 << m)).collect();
    let run = |mask: &u64| -> Result<Vec<ShatStratum>> {
        let delta: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let model = g.blow_up(&delta)?;
        let mut strata = Vec::new();
        for t in twister_candidates(&model, r, l)? {
            let values: Vec<i64> = (0..model.vertex_count())
                .map(|v| {
                    let num = l * model.omega_degree(1, v) + t[v];
                    debug_assert_eq!(num.rem_euclid(r as i64), 0);
                    num / r as i64
                })
                .collect();
            let d = Multidegree::new(&model, values)?;
            let status = classify(&model, &d)?;
            let root_class_count = count_root_classes(g, &delta, &t, r)?;
            let dimension = stratum_dimension(g, &model, &t, r, &status);
            let point_count = FactoredCount::new(
                r,
                BigUint::from(root_class_count),
                model.tilde().betti1 as u64,
            );
            strata.push(ShatStratum {
                delta: delta.clone(),
                twister: t,
                multidegree: d,
                status,
                root_class_count,
                point_count,
                dimension,
            });
        }
        Ok(strata)
    };

    let per_mask: Result<Vec<Vec<ShatStratum>>> = if parallel {
        masks.par_iter().map(run).collect()
    } else {
        masks.iter().map(run).collect()
    };
    let mut strata: Vec<ShatStratum> = per_mask?.into_iter().flatten().collect();
    strata.sort_by(|a, b| {
        let ma: u64 = a.delta.iter().fold(0, |acc, &e| acc | 1 << e);
        let mb: u64 = b.delta.iter().fold(0, |acc, &e| acc | 1 << e);
        ma.cmp(&mb).then_with(|| a.twister.cmp(&b.twister))
    });

    let nu_genus: u64 = g.vertices().iter().map(|v| v.genus).sum();
    let zero_dim_nu_coeff: BigUint = strata
        .iter()
        .filter(|s| s.dimension == Dimension::Exact(0))
        .map(|s| s.point_count.nu_coeff())
        .sum();
    let positive_dim_exact = strata
        .iter()
        .filter(|s| matches!(s.dimension, Dimension::Exact(d) if d > 0))
        .count();
    let bounded_dim = strata
        .iter()
        .filter(|s| matches!(s.dimension, Dimension::Bound(_)))
        .count();

    Ok(ShatReport {
        r,
        l,
        genus,
        nu_genus,
        total_degree: deg_total / r as i64,
        strata,
        zero_dim_nu_coeff,
        positive_dim_exact,
        bounded_dim,
    })
}

/// One unbalanced limit-root stratum, as surfaced by the regularity check.
#[derive(Clone, Debug)]
pub struct UnbalancedStratum {
    pub delta: Vec<usize>,
    pub weights: Vec<u64>,
}

/// Diagnostics for the comparison map from the limit-root moduli space to
/// the compactified Picard fiber.
#[derive(Clone, Debug)]
pub struct ChiReport {
    pub r: u64,
    pub l: i64,
    /// Every limit root balanced: the comparison map is everywhere
    /// defined on this fiber.
    pub regular: bool,
    pub strata_total: usize,
    pub unbalanced: Vec<UnbalancedStratum>,
    /// The compactified fiber has strata of exact positive dimension.
    pub shat_positive_exact: usize,
    /// Strata with only a dimension bound (possible positive dimension).
    pub shat_bounded: usize,
    pub fiber: FiberReport,
    pub shat: ShatReport,
}

/// Runs both fiber enumerations for the spin class of ω^l and reports
/// regularity of the comparison map plus dimension signals.
pub fn chi_diagnostics(g: &DualGraph, r: u64, l: i64, parallel: bool) -> Result<ChiReport> {
    let genus = g.genus();
    if genus < 2 {
        return Err(Error::GenusTooSmall { genus });
    }
    let fiber = fiber_inventory(g, r, &ClassSpec::spin(l))?;
    let mut unbalanced = Vec::new();
    for s in &fiber.strata {
        let balanced = s
            .balanced
            .as_ref()
            .map(|st| st.is_balanced())
            .unwrap_or(true);
        if !balanced {
            unbalanced.push(UnbalancedStratum {
                delta: s.stratum.delta.clone(),
                weights: s.stratum.weighting.weights().to_vec(),
            });
        }
    }
    let shat = shat_fiber(g, r, l, parallel)?;
    Ok(ChiReport {
        r,
        l,
        regular: unbalanced.is_empty(),
        strata_total: fiber.strata.len(),
        unbalanced,
        shat_positive_exact: shat.positive_dim_exact,
        shat_bounded: shat.bounded_dim,
        fiber,
        shat,
    })
}
