//! Balanced and stably balanced multidegrees on quasistable models.
//!
//! A multidegree d on a blow-up X of the base curve is balanced when every
//! exceptional component has degree 1 and every subcurve Z satisfies the
//! basic inequality `|d_Z - d·w_Z/(2g-2)| <= k_Z/2`, evaluated here with
//! cleared denominators in exact integers.  It is stably balanced when, in
//! addition, every subcurve achieving the lower equality contains all
//! non-exceptional components.  These are the numerical (in)stability
//! conditions of the compactified degree-d Picard scheme.

use rayon::prelude::*;

use crate::curve_graph::{DualGraph, GraphTag, QuasistableModel, Subcurve};
use crate::limit_root_strata::{admissible_weightings, limit_root_multidegree_spin, spin_class};
use crate::{Error, Result, MAX_MODEL_VERTICES, MAX_SUBSET_VERTICES};

/// Integer vector on the vertices of one specific model, tagged so it
/// cannot be mixed up with a different graph or blow-up.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Multidegree {
    base_tag: GraphTag,
    delta: Vec<usize>,
    values: Vec<i64>,
}

impl Multidegree {
    pub fn new(model: &QuasistableModel, values: Vec<i64>) -> Result<Self> {
        if values.len() != model.vertex_count() {
            return Err(Error::DegreeLength {
                got: values.len(),
                expected: model.vertex_count(),
            });
        }
        Ok(Multidegree {
            base_tag: model.base().tag(),
            delta: model.delta().to_vec(),
            values,
        })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn total(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn subcurve_sum(&self, z: Subcurve) -> i64 {
        z.iter().map(|v| self.values[v]).sum()
    }

    /// The degrees on the non-exceptional vertices only.
    pub fn base_part(&self, model: &QuasistableModel) -> Vec<i64> {
        self.values[..model.base().vertex_count()].to_vec()
    }

    pub fn check_model(&self, model: &QuasistableModel) -> Result<()> {
        if self.base_tag != model.base().tag() || self.delta != model.delta() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }
}

/// Outcome of the basic inequality on one subcurve, with denominators
/// cleared: `deviation = 2(2g-2) d_Z - 2 d w_Z`, `bound = (2g-2) k_Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasicInequality {
    pub deviation: i64,
    pub bound: i64,
}

impl BasicInequality {
    pub fn holds(&self) -> bool {
        self.deviation.abs() <= self.bound
    }

    pub fn equality_low(&self) -> bool {
        self.deviation == -self.bound
    }

    pub fn equality_high(&self) -> bool {
        self.deviation == self.bound
    }
}

/// Evaluates the basic inequality for `z`.  Needs genus >= 2.
pub fn basic_inequality(
    model: &QuasistableModel,
    d: &Multidegree,
    z: Subcurve,
) -> Result<BasicInequality> {
    d.check_model(model)?;
    let genus = model.genus();
    if genus < 2 {
        return Err(Error::GenusTooSmall { genus });
    }
    let g2 = 2 * genus as i64 - 2;
    let d_total = d.total();
    let d_z = d.subcurve_sum(z);
    let w_z = model.subcurve_omega(1, z);
    let k_z = model.boundary_count(z) as i64;
    Ok(BasicInequality {
        deviation: 2 * g2 * d_z - 2 * d_total * w_z,
        bound: g2 * k_z,
    })
}

/// A witness that a multidegree fails to be balanced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalancedViolation {
    /// An exceptional component with degree != 1.
    ExceptionalDegree { vertex: usize, degree: i64 },
    /// The lexicographically first subcurve violating the inequality.
    Subcurve {
        z: Subcurve,
        d_z: i64,
        w_z: i64,
        k_z: usize,
        deviation: i64,
        bound: i64,
    },
}

/// Balancedness classification of one multidegree on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalancedStatus {
    /// Balanced, and every lower-extremal subcurve contains all
    /// non-exceptional components.
    StablyBalanced,
    /// Balanced, but the listed lower-extremal subcurves do not contain
    /// the whole non-exceptional part.
    Balanced { extremal_failures: Vec<Subcurve> },
    NotBalanced { witness: BalancedViolation },
}

impl BalancedStatus {
    pub fn is_balanced(&self) -> bool {
        !matches!(self, BalancedStatus::NotBalanced { .. })
    }

    pub fn is_stably_balanced(&self) -> bool {
        matches!(self, BalancedStatus::StablyBalanced)
    }
}

/// Full classification: exceptional degrees, then every nonempty proper
/// subcurve in ascending bitmask order (the first violation is reported).
pub fn classify(model: &QuasistableModel, d: &Multidegree) -> Result<BalancedStatus> {
    d.check_model(model)?;
    let genus = model.genus();
    if genus < 2 {
        return Err(Error::GenusTooSmall { genus });
    }
    for v in 0..model.vertex_count() {
        if model.is_exceptional(v) && d.values()[v] != 1 {
            return Ok(BalancedStatus::NotBalanced {
                witness: BalancedViolation::ExceptionalDegree {
                    vertex: v,
                    degree: d.values()[v],
                },
            });
        }
    }
    let non_exc = model.non_exceptional();
    let mut extremal_failures = Vec::new();
    for z in model.subcurves()? {
        let check = basic_inequality(model, d, z)?;
        if !check.holds() {
            return Ok(BalancedStatus::NotBalanced {
                witness: BalancedViolation::Subcurve {
                    z,
                    d_z: d.subcurve_sum(z),
                    w_z: model.subcurve_omega(1, z),
                    k_z: model.boundary_count(z),
                    deviation: check.deviation,
                    bound: check.bound,
                },
            });
        }
        if check.equality_low() && !non_exc.is_subset_of(z) {
            extremal_failures.push(z);
        }
    }
    if extremal_failures.is_empty() {
        Ok(BalancedStatus::StablyBalanced)
    } else {
        Ok(BalancedStatus::Balanced { extremal_failures })
    }
}

pub fn is_balanced(model: &QuasistableModel, d: &Multidegree) -> Result<bool> {
    Ok(classify(model, d)?.is_balanced())
}

pub fn is_stably_balanced(model: &QuasistableModel, d: &Multidegree) -> Result<bool> {
    Ok(classify(model, d)?.is_stably_balanced())
}

/// Balanced multidegrees of one blow-up model: inventory entry.
#[derive(Clone, Debug)]
pub struct ModelInventory {
    pub delta: Vec<usize>,
    pub entries: Vec<(Multidegree, BalancedStatus)>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Integer points of a box with a fixed coordinate sum, ascending lex.
fn lattice_points(bounds: &[(i64, i64)], total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(bounds.len());
    // Suffix sums of the bounds allow pruning partial assignments.
    let n = bounds.len();
    let mut min_suffix = vec![0i64; n + 1];
    let mut max_suffix = vec![0i64; n + 1];
    for i in (0..n).rev() {
        min_suffix[i] = min_suffix[i + 1] + bounds[i].0;
        max_suffix[i] = max_suffix[i + 1] + bounds[i].1;
    }
    fn recurse(
        bounds: &[(i64, i64)],
        min_suffix: &[i64],
        max_suffix: &[i64],
        remaining: i64,
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let i = current.len();
        if i == bounds.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let lo = bounds[i].0.max(remaining - max_suffix[i + 1]);
        let hi = bounds[i].1.min(remaining - min_suffix[i + 1]);
        for v in lo..=hi {
            current.push(v);
            recurse(bounds, min_suffix, max_suffix, remaining - v, current, out);
            current.pop();
        }
    }
    recurse(bounds, &min_suffix, &max_suffix, total, &mut current, &mut out);
    out
}

fn model_inventory(
    g: &DualGraph,
    delta: &[usize],
    total: i64,
    stably_only: bool,
) -> Result<ModelInventory> {
    let model = g.blow_up(delta)?;
    let genus = model.genus();
    let g2 = 2 * genus as i64 - 2;
    let n_base = g.vertex_count();
    let remaining = total - delta.len() as i64;
    // Per-vertex window from the singleton inequality:
    // ceil((2 d w_v - (2g-2) k_v) / (2(2g-2))) <= d_v <= floor(... + ...).
    let bounds: Vec<(i64, i64)> = (0..n_base)
        .map(|v| {
            let w_v = model.omega_degree(1, v);
            let k_v = model.boundary_count(Subcurve::from_vertices(&[v])) as i64;
            let lo = ceil_div(2 * total * w_v - g2 * k_v, 2 * g2);
            let hi = floor_div(2 * total * w_v + g2 * k_v, 2 * g2);
            (lo, hi)
        })
        .collect();
    let mut entries = Vec::new();
    for base_values in lattice_points(&bounds, remaining) {
        let mut values = base_values;
        values.extend(std::iter::repeat(1).take(delta.len()));
        let d = Multidegree::new(&model, values)?;
        let status = classify(&model, &d)?;
        let keep = if stably_only {
            status.is_stably_balanced()
        } else {
            status.is_balanced()
        };
        if keep {
            entries.push((d, status));
        }
    }
    Ok(ModelInventory {
        delta: delta.to_vec(),
        entries,
    })
}

/// Enumerates every balanced (or stably balanced) multidegree of the given
/// total degree on every blow-up of the base graph.  Models with no
/// matching multidegree are omitted.  Deterministic: models ascend by
/// support bitmask, multidegrees lexicographically.
pub fn enumerate_balanced(
    g: &DualGraph,
    total: i64,
    stably_only: bool,
    parallel: bool,
) -> Result<Vec<ModelInventory>> {
    let genus = g.genus();
    if genus < 2 {
        return Err(Error::GenusTooSmall { genus });
    }
    let m = g.edge_count();
    if g.vertex_count() + m > MAX_MODEL_VERTICES {
        return Err(Error::SizeGate {
            what: "balanced multidegree enumeration",
            size: g.vertex_count() + m,
            limit: MAX_MODEL_VERTICES,
        });
    }
    let masks: Vec<u64> = (0..(1u64 << m)).collect();
    let run = |mask: &u64| -> Result<ModelInventory> {
        let delta: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        model_inventory(g, &delta, total, stably_only)
    };
    let inventories: Result<Vec<ModelInventory>> = if parallel {
        masks.par_iter().map(run).collect()
    } else {
        masks.iter().map(run).collect()
    };
    Ok(inventories?
        .into_iter()
        .filter(|inv| !inv.entries.is_empty())
        .collect())
}

/// One failed check from [`r2_identity_check`].
#[derive(Clone, Debug)]
pub struct R2Failure {
    pub delta: Vec<usize>,
    pub subcurve: Vec<usize>,
    pub detail: String,
}

/// Summary of the degree-doubling identities special to r = 2.
#[derive(Clone, Debug)]
pub struct R2Report {
    /// Number of limit-root multidegrees checked.
    pub weightings: usize,
    /// (weighting, subcurve) pairs checked.
    pub cases: usize,
    pub failures: Vec<R2Failure>,
}

/// For r = 2 and the class of ω^l: every limit-root multidegree satisfies
/// `2 d_Z = l w_Z - k'_Z` and `k'_Z ≡ l k_Z (mod 2)` for every subcurve Z
/// of the non-exceptional part, where `k'_Z` counts the points where Z
/// meets exceptional components not in Z; and (genus >= 2) each one is
/// balanced.  Returns the counterexample list, empty when the identities
/// hold.
pub fn r2_identity_check(g: &DualGraph, l: i64) -> Result<R2Report> {
    let class = spin_class(g, 2, l, false)?;
    let weightings = admissible_weightings(g, &class)?;
    let n_base = g.vertex_count();
    if n_base > MAX_SUBSET_VERTICES {
        return Err(Error::SizeGate {
            what: "r2 identity subcurves",
            size: n_base,
            limit: MAX_SUBSET_VERTICES,
        });
    }
    let mut cases = 0usize;
    let mut failures = Vec::new();
    for w in &weightings {
        let (model, d) = limit_root_multidegree_spin(g, w, l)?;
        let delta = model.delta().to_vec();
        let full_derived = model.vertex_count() == n_base;
        for bits in 1..(1u64 << n_base) {
            let z = Subcurve::from_bits(bits);
            if full_derived && z.len() == n_base {
                continue; // proper subcurves only on the unblown model
            }
            cases += 1;
            // k': exceptional intersection points, counted with multiplicity.
            let k_prime: i64 = delta
                .iter()
                .map(|&e| {
                    let (a, b) = g.edges()[e];
                    (z.contains(a) as i64) + (z.contains(b) as i64)
                })
                .sum();
            let d_z = d.subcurve_sum(z);
            let w_z = model.subcurve_omega(l, z);
            let k_z = model.boundary_count(z) as i64;
            if 2 * d_z != w_z - k_prime {
                failures.push(R2Failure {
                    delta: delta.clone(),
                    subcurve: z.to_vec(),
                    detail: format!("2 d_Z = {} but l w_Z - k' = {}", 2 * d_z, w_z - k_prime),
                });
            }
            if (k_prime - l * k_z).rem_euclid(2) != 0 {
                failures.push(R2Failure {
                    delta: delta.clone(),
                    subcurve: z.to_vec(),
                    detail: format!("k' = {k_prime} has wrong parity against l k_Z = {}", l * k_z),
                });
            }
        }
        if model.genus() >= 2 {
            let status = classify(&model, &d)?;
            if !status.is_balanced() {
                failures.push(R2Failure {
                    delta,
                    subcurve: Vec::new(),
                    detail: format!("limit-root multidegree {:?} not balanced", d.values()),
                });
            }
        }
    }
    Ok(R2Report {
        weightings: weightings.len(),
        cases,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_graph::DualGraph;
    use crate::limit_root_strata::WeightedSubgraph;
    use num_traits::Signed;

    fn banana3() -> DualGraph {
        DualGraph::preset("example-4.2").unwrap()
    }

    fn md(model: &QuasistableModel, values: &[i64]) -> Multidegree {
        Multidegree::new(model, values.to_vec()).unwrap()
    }

    #[test]
    fn basic_inequality_on_unblown_banana() {
        let g = banana3();
        let model = g.blow_up(&[]).unwrap();
        let d = md(&model, &[1, -1]);
        let z0 = Subcurve::from_vertices(&[0]);
        let check = basic_inequality(&model, &d, z0).unwrap();
        // 2*(2g-2)*1 - 0 = 12 vs bound (2g-2)*3 = 18.
        assert_eq!(check.deviation, 12);
        assert_eq!(check.bound, 18);
        assert!(check.holds());
        let d2 = md(&model, &[2, -2]);
        assert!(!basic_inequality(&model, &d2, z0).unwrap().holds());
    }

    #[test]
    fn classify_on_unblown_banana_degree_zero() {
        let g = banana3();
        let model = g.blow_up(&[]).unwrap();
        for values in [[1, -1], [0, 0], [-1, 1]] {
            let status = classify(&model, &md(&model, &values)).unwrap();
            assert_eq!(status, BalancedStatus::StablyBalanced, "{values:?}");
        }
        let status = classify(&model, &md(&model, &[2, -2])).unwrap();
        assert!(!status.is_balanced());
    }

    #[test]
    fn exceptional_degree_must_be_one() {
        let g = banana3();
        let model = g.blow_up(&[0]).unwrap();
        let status = classify(&model, &md(&model, &[0, -1, 2])).unwrap();
        match status {
            BalancedStatus::NotBalanced {
                witness: BalancedViolation::ExceptionalDegree { vertex, degree },
            } => {
                assert_eq!((vertex, degree), (2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn first_witness_is_lexicographic() {
        let g = banana3();
        let model = g.blow_up(&[]).unwrap();
        let status = classify(&model, &md(&model, &[3, -3])).unwrap();
        match status {
            BalancedStatus::NotBalanced {
                witness: BalancedViolation::Subcurve { z, .. },
            } => assert_eq!(z.bits(), 0b01),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn balanced_but_not_stable_when_tilde_disconnected() {
        // Fully blown single edge between two genus-2 components: the
        // component {v0} of X-tilde is lower-extremal and proper.
        let g = DualGraph::from_genera(&[2, 2], &[(0, 1)]).unwrap();
        let model = g.blow_up(&[0]).unwrap();
        let (m2, d) = limit_root_multidegree_spin(
            &g,
            &WeightedSubgraph::new(2, vec![1]).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(m2.delta(), model.delta());
        assert_eq!(d.values(), &[1, 1, 1]);
        let status = classify(&m2, &d).unwrap();
        match &status {
            BalancedStatus::Balanced { extremal_failures } => {
                assert!(!extremal_failures.is_empty());
            }
            other => panic!("expected balanced-not-stable, got {other:?}"),
        }
    }

    #[test]
    fn complement_symmetry_of_deviation() {
        let g = DualGraph::from_genera(&[1, 0, 1], &[(0, 1), (1, 2), (0, 2), (0, 1)]).unwrap();
        let model = g.blow_up(&[1]).unwrap();
        let n = model.vertex_count();
        let d = md(&model, &[1, 0, 1, 1]);
        for z in model.subcurves().unwrap() {
            let a = basic_inequality(&model, &d, z).unwrap();
            let b = basic_inequality(&model, &d, z.complement(n)).unwrap();
            assert_eq!(a.deviation, -b.deviation);
            assert_eq!(a.bound, b.bound);
        }
    }

    #[test]
    fn omega_multiples_are_stably_balanced() {
        // d = l·w/r on the unblown model has deviation identically zero.
        let graphs = [
            banana3(),
            DualGraph::from_genera(&[0, 1, 1], &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            DualGraph::from_genera(&[2], &[(0, 0)]).unwrap(),
        ];
        for g in &graphs {
            for (r, l) in [(2u64, 2i64), (3, 3), (2, 4)] {
                let w = g.omega_degrees(l);
                if w.iter().any(|x| x % r as i64 != 0) {
                    continue;
                }
                let model = g.blow_up(&[]).unwrap();
                let d = md(
                    &model,
                    &w.iter().map(|x| x / r as i64).collect::<Vec<_>>(),
                );
                assert_eq!(classify(&model, &d).unwrap(), BalancedStatus::StablyBalanced);
            }
        }
    }

    #[test]
    fn verdict_invariant_under_omega_twist() {
        let g = banana3();
        for delta in [vec![], vec![0], vec![0, 1]] {
            let model = g.blow_up(&delta).unwrap();
            let omega: Vec<i64> = model.omega_degrees(1);
            let base: Vec<i64> = (0..model.vertex_count())
                .map(|v| if model.is_exceptional(v) { 1 } else { -(v as i64) })
                .collect();
            let d0 = md(&model, &base);
            let s0 = classify(&model, &d0).unwrap();
            for t in [-2i64, -1, 1, 2] {
                let twisted: Vec<i64> = base
                    .iter()
                    .zip(&omega)
                    .map(|(&b, &w)| b + t * w)
                    .collect();
                let dt = md(&model, &twisted);
                let st = classify(&model, &dt).unwrap();
                assert_eq!(
                    s0.is_balanced(),
                    st.is_balanced(),
                    "twist {t} changed balancedness"
                );
                assert_eq!(s0.is_stably_balanced(), st.is_stably_balanced());
            }
        }
    }

    #[test]
    fn irreducible_limit_roots_all_stably_balanced() {
        let g = DualGraph::from_genera(&[1], &[(0, 0), (0, 0)]).unwrap();
        for (r, l) in [(2u64, 1i64), (3, 0), (4, 2), (2, 2)] {
            let class = match spin_class(&g, r, l, false) {
                Ok(c) => c,
                Err(_) => continue,
            };
            for w in admissible_weightings(&g, &class).unwrap() {
                let (model, d) = limit_root_multidegree_spin(&g, &w, l).unwrap();
                let status = classify(&model, &d).unwrap();
                assert_eq!(
                    status,
                    BalancedStatus::StablyBalanced,
                    "r={r} l={l} delta={:?}",
                    model.delta()
                );
            }
        }
    }

    #[test]
    fn tilde_components_are_lower_extremal() {
        // For any balanced multidegree, each connected component of the
        // non-exceptional part achieves the lower equality.
        let g = banana3();
        for inv in enumerate_balanced(&g, 0, false, false).unwrap() {
            let model = g.blow_up(&inv.delta).unwrap();
            let tilde = model.tilde().clone();
            for (d, _) in &inv.entries {
                for c in 0..tilde.components {
                    let z = Subcurve::from_vertices(
                        &(0..g.vertex_count())
                            .filter(|&v| tilde.component_of[v] == c)
                            .collect::<Vec<_>>(),
                    );
                    if z.len() == model.vertex_count() {
                        continue; // whole model, not a proper subcurve
                    }
                    let check = basic_inequality(&model, d, z).unwrap();
                    assert!(check.equality_low(), "delta {:?} d {:?}", inv.delta, d.values());
                }
            }
        }
    }

    #[test]
    fn enumerate_balanced_banana_inventory() {
        let g = banana3();
        let inventories = enumerate_balanced(&g, 0, false, false).unwrap();
        let by_delta: std::collections::BTreeMap<Vec<usize>, Vec<Vec<i64>>> = inventories
            .iter()
            .map(|inv| {
                (
                    inv.delta.clone(),
                    inv.entries.iter().map(|(d, _)| d.values().to_vec()).collect(),
                )
            })
            .collect();
        assert_eq!(
            by_delta[&vec![]],
            vec![vec![-1, 1], vec![0, 0], vec![1, -1]]
        );
        for i in 0..3usize {
            let list = &by_delta[&vec![i]];
            assert_eq!(list.len(), 2, "one blown edge {i}");
            assert!(list.contains(&vec![-1, 0, 1]));
            assert!(list.contains(&vec![0, -1, 1]));
        }
        for pair in [vec![0, 1], vec![0, 2], vec![1, 2]] {
            assert_eq!(by_delta[&pair], vec![vec![-1, -1, 1, 1]]);
        }
        // No balanced multidegree on the fully blown model.
        assert!(!by_delta.contains_key(&vec![0, 1, 2]));
        // Everything found is stably balanced here.
        for inv in &inventories {
            for (_, status) in &inv.entries {
                assert!(status.is_stably_balanced());
            }
        }
        // Parallel enumeration agrees.
        let par = enumerate_balanced(&g, 0, false, true).unwrap();
        assert_eq!(par.len(), inventories.len());
        for (a, b) in par.iter().zip(&inventories) {
            assert_eq!(a.delta, b.delta);
            let av: Vec<_> = a.entries.iter().map(|(d, _)| d.values().to_vec()).collect();
            let bv: Vec<_> = b.entries.iter().map(|(d, _)| d.values().to_vec()).collect();
            assert_eq!(av, bv);
        }
    }

    #[test]
    fn omega_shift_bijects_inventories() {
        // Twisting by the dualizing class shifts total degree by 2g - 2 and
        // carries the inventory for degree d onto the one for d + (2g - 2),
        // model by model, preserving every status.
        let g = banana3();
        let shift = 2 * g.genus() as i64 - 2;
        for total in [-2i64, 0, 3] {
            let base = enumerate_balanced(&g, total, false, false).unwrap();
            let shifted = enumerate_balanced(&g, total + shift, false, false).unwrap();
            assert_eq!(base.len(), shifted.len(), "total {total}");
            for (a, b) in base.iter().zip(&shifted) {
                assert_eq!(a.delta, b.delta);
                let model = g.blow_up(&a.delta).unwrap();
                let omega = model.omega_degrees(1);
                assert_eq!(a.entries.len(), b.entries.len(), "delta {:?}", a.delta);
                for ((da, sa), (db, sb)) in a.entries.iter().zip(&b.entries) {
                    let twisted: Vec<i64> = da
                        .values()
                        .iter()
                        .zip(&omega)
                        .map(|(d, w)| d + w)
                        .collect();
                    assert_eq!(twisted, db.values(), "delta {:?}", a.delta);
                    assert_eq!(sa, sb, "delta {:?}", a.delta);
                }
            }
        }
    }

    #[test]
    fn enumeration_box_is_complete() {
        // Widening the per-vertex windows must find nothing new.
        let g = DualGraph::from_genera(&[1, 1], &[(0, 1), (0, 1)]).unwrap();
        let total = 0i64;
        let model = g.blow_up(&[]).unwrap();
        let genus = g.genus() as i64;
        let g2 = 2 * genus - 2;
        let inner: Vec<Vec<i64>> = enumerate_balanced(&g, total, false, false)
            .unwrap()
            .into_iter()
            .find(|inv| inv.delta.is_empty())
            .map(|inv| inv.entries.iter().map(|(d, _)| d.values().to_vec()).collect())
            .unwrap_or_default();
        let mut wide = Vec::new();
        let span = 2 * g2.abs() + 4;
        for d0 in -span..=span {
            let d1 = total - d0;
            let d = md(&model, &[d0, d1]);
            if classify(&model, &d).unwrap().is_balanced() {
                wide.push(vec![d0, d1]);
            }
        }
        assert_eq!(inner, wide);
    }

    #[test]
    fn enumerate_balanced_respects_gates_and_genus() {
        let small = DualGraph::from_genera(&[0], &[(0, 0)]).unwrap();
        assert!(matches!(
            enumerate_balanced(&small, 0, false, false),
            Err(Error::GenusTooSmall { genus: 1 })
        ));
        let wide = DualGraph::from_genera(&[3, 3], &(0..15).map(|_| (0, 1)).collect::<Vec<_>>())
            .unwrap();
        assert!(matches!(
            enumerate_balanced(&wide, 0, false, false),
            Err(Error::SizeGate { .. })
        ));
    }

    #[test]
    fn r2_identities_on_banana() {
        let g = banana3();
        for l in [1i64, 2] {
            let report = r2_identity_check(&g, l).unwrap();
            assert!(report.weightings >= 1);
            assert!(report.cases > 0);
            assert!(
                report.failures.is_empty(),
                "l={l}: {:?}",
                report.failures
            );
        }
    }

    #[test]
    fn r2_identity_reduces_on_unblown_model() {
        // With empty support, k' = 0 and the identity is 2 d_Z = l w_Z.
        let g = DualGraph::from_genera(&[1, 1], &[(0, 1), (0, 1)]).unwrap();
        let class = spin_class(&g, 2, 2, false).unwrap();
        let empty = admissible_weightings(&g, &class)
            .unwrap()
            .into_iter()
            .find(|w| w.delta().is_empty())
            .expect("even class admits the empty weighting");
        let (model, d) = limit_root_multidegree_spin(&g, &empty, 2).unwrap();
        for z in [Subcurve::from_vertices(&[0]), Subcurve::from_vertices(&[1])] {
            assert_eq!(2 * d.subcurve_sum(z), model.subcurve_omega(2, z));
        }
    }

    #[test]
    fn rational_cross_check() {
        // Same verdicts from a direct rational-arithmetic evaluation.
        use num_rational::Ratio;
        let g = DualGraph::from_genera(&[1, 0, 1], &[(0, 1), (1, 2), (0, 2), (0, 1)]).unwrap();
        let genus = g.genus();
        let g2 = 2 * genus as i64 - 2;
        let mut checked = 0usize;
        for mask in 0u64..(1 << g.edge_count()) {
            let delta: Vec<usize> = (0..g.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
            let model = g.blow_up(&delta).unwrap();
            let nv = model.vertex_count();
            for trial in 0..40u64 {
                let values: Vec<i64> = (0..nv)
                    .map(|v| {
                        if model.is_exceptional(v) {
                            1
                        } else {
                            ((trial as i64 * 7 + v as i64 * 13) % 9) - 4
                        }
                    })
                    .collect();
                let d = md(&model, &values);
                let total = d.total();
                let mut rational_ok = true;
                for z in model.subcurves().unwrap() {
                    let lhs = Ratio::new(d.subcurve_sum(z), 1)
                        - Ratio::new(total * model.subcurve_omega(1, z), g2);
                    let bound = Ratio::new(model.boundary_count(z) as i64, 2);
                    if lhs.abs() > bound {
                        rational_ok = false;
                        break;
                    }
                }
                let fast = classify(&model, &d).unwrap().is_balanced();
                assert_eq!(fast, rational_ok, "delta {delta:?} values {:?}", d.values());
                checked += 1;
            }
        }
        assert!(checked >= 500);
    }
}
