//! End-to-end acceptance checks.  Each criterion prints one PASS/FAIL
//! line; the test fails if any criterion does.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use limitroots::balanced_degrees::{enumerate_balanced, r2_identity_check};
use limitroots::curve_graph::{DualGraph, QuasistableModel, Subcurve};
use limitroots::limit_root_strata::{admissible_weightings, fiber_inventory, ClassSpec};
use limitroots::mod_r_homology::{boundary, solve_boundary, Chain0, Chain1};
use limitroots::picard_fiber::{riass_dimension, shat_fiber, twister_candidates, Dimension};

fn banana3() -> DualGraph {
    DualGraph::preset("example-4.2").unwrap()
}

type Outcome = Result<String, String>;

fn check(cond: bool, note: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(note.to_string())
    }
}

/// 1. The worked three-banana fiber for r = 3: stratum counts, root
///    counts, multiplicities, and automorphism orders, in under a second.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = banana3();
    let report = fiber_inventory(&g, 3, &ClassSpec::Zero).map_err(|e| e.to_string())?;
    check(report.strata.len() == 9, "expected 9 strata")?;
    let mut by_delta_len = [0usize; 4];
    for rec in &report.strata {
        let s = &rec.stratum;
        by_delta_len[s.delta.len()] += 1;
        match s.delta.len() {
            0 => {
                check(
                    s.root_count.nu_coeff() == BigUint::from(9u32)
                        && s.multiplicity == 1
                        && s.aut_order == 3
                        && s.smooth,
                    "unblown stratum invariants",
                )?;
            }
            2 => {
                check(
                    s.root_count.nu_coeff() == BigUint::from(1u32)
                        && s.multiplicity == 9
                        && s.aut_order == 3
                        && !s.smooth,
                    "double blow-up stratum invariants",
                )?;
            }
            3 => {
                check(
                    s.root_count.nu_coeff() == BigUint::from(1u32)
                        && s.multiplicity == 9
                        && s.aut_order == 9
                        && !s.smooth,
                    "full blow-up stratum invariants",
                )?;
            }
            _ => return Err("unexpected single-edge stratum".to_string()),
        }
    }
    check(by_delta_len == [1, 0, 6, 2], "stratum count by blow-up size")?;
    check(
        report.total_length.value(report.nu_genus) == BigUint::from(6561u32),
        "total fiber length",
    )?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), "took a second or more")?;
    Ok(format!(
        "9 strata with expected invariants in {:.0?}",
        elapsed
    ))
}

/// Random connected multigraph with bounded size, built from a spanning
/// tree plus extra edges.
fn random_graph(rng: &mut ChaCha8Rng) -> DualGraph {
    let nv = rng.gen_range(1..=5usize);
    let mut edges = Vec::new();
    for v in 1..nv {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    let max_extra = 8usize.saturating_sub(edges.len());
    let extra = rng.gen_range(0..=max_extra.min(4));
    for _ in 0..extra {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        edges.push((a.min(b), a.max(b)));
    }
    if nv == 1 && edges.is_empty() {
        edges.push((0, 0));
    }
    let genera: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..=3u64)).collect();
    DualGraph::from_genera(&genera, &edges).unwrap()
}

/// 2. The degeneration-length identity: over 200 random graphs, the
///    multiplicity-weighted stratum counts sum to r^2g, within 30 seconds.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut cases = 0usize;
    while cases < 200 {
        let g = random_graph(&mut rng);
        let b1 = g.betti1();
        let r: u64 = match b1 {
            0..=4 => [2, 3, 4, 5][rng.gen_range(0..4)],
            5..=6 => [2, 3][rng.gen_range(0..2)],
            _ => 2,
        };
        let report = fiber_inventory(&g, r, &ClassSpec::Zero).map_err(|e| e.to_string())?;
        // Independent recomputation of the identity the inventory asserts.
        let mut total = BigUint::from(0u32);
        for rec in &report.strata {
            total += rec.stratum.root_count.nu_coeff() * BigUint::from(rec.stratum.multiplicity);
        }
        let expected = BigUint::from(r).pow(2 * b1 as u32);
        check(
            total == expected,
            &format!("length identity failed for r={r}, graph {:?}", g.edges()),
        )?;
        cases += 1;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), "took 30 seconds or more")?;
    Ok(format!("identity verified on {cases} graphs in {:.1?}", elapsed))
}

/// 3. Balanced multidegrees of total degree zero on the three-banana:
///    three on the unblown curve, two per single blow-up, one per double
///    blow-up, none on the full blow-up, all stably balanced.
fn criterion_3() -> Outcome {
    let g = banana3();
    let models = enumerate_balanced(&g, 0, false, false).map_err(|e| e.to_string())?;
    let mut seen = [usize::MAX; 8];
    for m in &models {
        let mask: usize = m.delta.iter().fold(0, |acc, &e| acc | 1 << e);
        seen[mask] = m.entries.len();
        for (_, status) in &m.entries {
            check(
                status.is_stably_balanced(),
                &format!("entry on delta {:?} not stably balanced", m.delta),
            )?;
        }
    }
    check(seen[0] == 3, "unblown model should carry 3 multidegrees")?;
    for mask in [1usize, 2, 4] {
        check(
            seen[mask] == 2,
            "single blow-ups should carry 2 multidegrees",
        )?;
    }
    for mask in [3usize, 5, 6] {
        check(
            seen[mask] == 1,
            "double blow-ups should carry 1 multidegree",
        )?;
    }
    check(
        seen[7] == usize::MAX,
        "full blow-up should carry no balanced multidegree",
    )?;
    let total: usize = models.iter().map(|m| m.entries.len()).sum();
    Ok(format!("3+2+2+2+1+1+1 = {total} stably balanced multidegrees"))
}

/// 4. The compactified Picard fiber over the three-banana for r = 3,
///    l = 0: the zero-dimensional strata coefficients sum to 15 and exactly
///    two strata have exact dimension 2.
fn criterion_4() -> Outcome {
    let g = banana3();
    let report = shat_fiber(&g, 3, 0, false).map_err(|e| e.to_string())?;
    check(
        report.zero_dim_nu_coeff == BigUint::from(15u32),
        "zero-dimensional coefficient sum should be 15",
    )?;
    let exact2 = report
        .strata
        .iter()
        .filter(|s| s.dimension == Dimension::Exact(2))
        .count();
    check(exact2 == 2, "expected exactly two dimension-2 strata")?;
    Ok(format!(
        "coefficient sum 15, {} strata, two of dimension 2",
        report.strata.len()
    ))
}

/// 5. The two-component dimension formula: over the whole (k, r, residue)
///    grid, an exceptional case is declared exactly when no step witness
///    exists.
fn criterion_5() -> Outcome {
    let mut cells = 0usize;
    for k in 2..=6u64 {
        for r in 2..=7u64 {
            for res1 in 0..r {
                let res2 = (r - res1) % r;
                let out = riass_dimension(k, r, res1, res2).map_err(|e| e.to_string())?;
                check(
                    out.exception.is_some() == out.witness.is_none(),
                    &format!("exception/witness mismatch at k={k} r={r} res={res1}"),
                )?;
                check(
                    out.dimension == if out.exception.is_some() { 0 } else { k - 1 },
                    &format!("dimension value at k={k} r={r} res={res1}"),
                )?;
                cells += 1;
            }
        }
    }
    Ok(format!("exception list matches witnesses on {cells} cells"))
}

/// All connected multigraphs on `nv` labelled vertices with at most
/// `max_edges` edges, as multiplicity vectors over the possible pairs.
fn connected_multigraphs(nv: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for a in 0..nv {
        for b in a..nv {
            pairs.push((a, b));
        }
    }
    let mut out = Vec::new();
    let mut mult = vec![0usize; pairs.len()];
    fn rec(
        pairs: &[(usize, usize)],
        mult: &mut Vec<usize>,
        i: usize,
        budget: usize,
        nv: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == pairs.len() {
            let mut edges = Vec::new();
            for (j, &m) in mult.iter().enumerate() {
                for _ in 0..m {
                    edges.push(pairs[j]);
                }
            }
            if edges.len() < nv.saturating_sub(1) {
                return;
            }
            // Connectivity over all nv vertices.
            let mut reach = vec![false; nv];
            let mut stack = vec![0usize];
            reach[0] = true;
            while let Some(v) = stack.pop() {
                for &(a, b) in &edges {
                    if a == v && !reach[b] {
                        reach[b] = true;
                        stack.push(b);
                    }
                    if b == v && !reach[a] {
                        reach[a] = true;
                        stack.push(a);
                    }
                }
            }
            if reach.iter().all(|&x| x) {
                out.push(edges);
            }
            return;
        }
        for m in 0..=budget {
            mult[i] = m;
            rec(pairs, mult, i + 1, budget - m, nv, out);
        }
        mult[i] = 0;
    }
    rec(&pairs, &mut mult, 0, max_edges, nv, &mut out);
    out
}

/// Genus assignments with the given total spread over `nv` vertices.
fn genus_assignments(nv: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; nv];
    fn rec(cur: &mut Vec<u64>, i: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(cur, i + 1, left - v, out);
        }
    }
    rec(&mut cur, 0, total, &mut out);
    out
}

/// 6. The square-root case: across every small curve, every limit square
///    root of ω^l is balanced and satisfies the parity identities.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut graphs = 0usize;
    let mut cases = 0usize;
    for nv in 1..=4usize {
        for edges in connected_multigraphs(nv, 6) {
            for total_nu in 0..=2u64 {
                for genera in genus_assignments(nv, total_nu) {
                    let g = match DualGraph::from_genera(&genera, &edges) {
                        Ok(g) => g,
                        Err(_) => continue,
                    };
                    if g.genus() < 2 {
                        continue;
                    }
                    graphs += 1;
                    for l in [1i64, 2] {
                        let report = r2_identity_check(&g, l).map_err(|e| e.to_string())?;
                        if let Some(first) = report.failures.first() {
                            return Err(format!(
                                "r=2 failure: genera {:?}, edges {:?}, l={l}: {:?}",
                                genera, edges, first
                            ));
                        }
                        cases += report.cases;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(cases > 10_000, "suspiciously few subcurve cases")?;
    Ok(format!(
        "{graphs} curves, {cases} subcurve identities, no counterexamples ({:.1?})",
        elapsed
    ))
}

/// Reference solver: enumerate every 1-chain and keep those with the
/// required boundary.
fn brute_boundary(g: &DualGraph, target: &Chain0) -> Vec<Chain1> {
    let r = target.modulus();
    let m = g.edge_count();
    let span = (r as u128).pow(m as u32);
    let mut out = Vec::new();
    for index in 0..span {
        let mut vals = vec![0u64; m];
        let mut rem = index;
        for v in vals.iter_mut().rev() {
            *v = (rem % r as u128) as u64;
            rem /= r as u128;
        }
        let chain = Chain1::new(r, vals).unwrap();
        if boundary(g, &chain).unwrap() == *target {
            out.push(chain);
        }
    }
    out
}

/// Reference twister enumeration over a widened box.
fn brute_twisters(model: &QuasistableModel, r: u64, l: i64) -> Vec<Vec<i64>> {
    let nv = model.vertex_count();
    let n_base = model.base().vertex_count();
    let ri = r as i64;
    let mut out = Vec::new();
    let mut t = vec![0i64; nv];
    t[n_base..].fill(ri);
    fn scan(
        model: &QuasistableModel,
        r: i64,
        l: i64,
        v: usize,
        t: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let n_base = model.base().vertex_count();
        if v == n_base {
            if t.iter().sum::<i64>() != 0 {
                return;
            }
            let nv = model.vertex_count();
            for bits in 1..((1u64 << nv) - 1) {
                let z = Subcurve::from_bits(bits);
                let t_z: i64 = z.iter().map(|u| t[u]).sum();
                if 2 * t_z.abs() > model.boundary_count(z) as i64 * r {
                    return;
                }
            }
            out.push(t.clone());
            return;
        }
        let w_v = model.omega_degree(1, v);
        let k_v = model.boundary_count(Subcurve::from_vertices(&[v])) as i64;
        let widened = k_v * r / 2 + 2 * r;
        for cand in -widened..=widened {
            if (cand + l * w_v).rem_euclid(r) != 0 {
                continue;
            }
            t[v] = cand;
            scan(model, r, l, v + 1, t, out);
        }
        t[v] = 0;
    }
    scan(model, ri, l, 0, &mut t, &mut out);
    out.sort();
    out
}

/// 7. Oracle agreement: the spanning-tree chain solver against exhaustive
///    enumeration, and the boxed twister enumeration against a widened box.
fn criterion_7() -> Outcome {
    let graphs = vec![
        banana3(),
        DualGraph::from_genera(&[1, 1, 1], &[(0, 1), (1, 2), (0, 2)]).unwrap(),
        DualGraph::from_genera(&[2], &[(0, 0), (0, 0)]).unwrap(),
        DualGraph::from_genera(&[1, 0, 1], &[(0, 1), (0, 1), (1, 2), (1, 2)]).unwrap(),
        DualGraph::from_genera(&[1, 1], &[(0, 1)]).unwrap(),
    ];
    let mut chain_cases = 0usize;
    for g in &graphs {
        for r in 2..=5u64 {
            if (r as u128).pow(g.edge_count() as u32) > 1 << 16 {
                continue;
            }
            let mut targets = vec![Chain0::new(r, vec![0; g.vertex_count()]).unwrap()];
            if g.vertex_count() >= 2 {
                let mut vals = vec![0i64; g.vertex_count()];
                vals[0] = 1;
                vals[1] = -1;
                targets.push(Chain0::from_integers(r, &vals).unwrap());
                vals[0] = 1;
                vals[1] = 1;
                targets.push(Chain0::from_integers(r, &vals).unwrap());
            }
            for target in &targets {
                let fast: BTreeSet<Vec<u64>> = solve_boundary(g, target)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|c| c.values().to_vec())
                    .collect();
                let brute: BTreeSet<Vec<u64>> = brute_boundary(g, target)
                    .into_iter()
                    .map(|c| c.values().to_vec())
                    .collect();
                check(
                    fast == brute,
                    &format!("chain solver mismatch on {:?}, r={r}", g.edges()),
                )?;
                chain_cases += 1;
            }
        }
    }
    let mut twister_cases = 0usize;
    for g in &graphs {
        for mask in 0..(1u64 << g.edge_count()) {
            let delta: Vec<usize> = (0..g.edge_count()).filter(|&e| mask >> e & 1 == 1).collect();
            if g.vertex_count() + delta.len() > 6 {
                continue;
            }
            let model = g.blow_up(&delta).unwrap();
            for (r, l) in [(2u64, 1i64), (3, 0), (3, 2), (4, 1)] {
                let fast = twister_candidates(&model, r, l).map_err(|e| e.to_string())?;
                let brute = brute_twisters(&model, r, l);
                check(
                    fast == brute,
                    &format!("twister mismatch on {:?}, delta {delta:?}, r={r} l={l}", g.edges()),
                )?;
                twister_cases += 1;
            }
        }
    }
    Ok(format!(
        "{chain_cases} chain-solver cases, {twister_cases} twister cases agree"
    ))
}

/// 8. Compact-type curves: every class has exactly one weighting, the
///    blow-up locus is empty exactly for the trivial class, and the
///    compactified fiber is everywhere zero-dimensional.
fn criterion_8() -> Outcome {
    let trees = vec![
        DualGraph::preset("compact-chain:1,1").unwrap(),
        DualGraph::preset("compact-chain:1,2,1").unwrap(),
        DualGraph::from_genera(&[2, 0, 1, 1], &[(0, 1), (1, 2), (1, 3)]).unwrap(),
    ];
    let mut classes = 0usize;
    for g in &trees {
        for r in [2u64, 3] {
            // Every consistent residue class on the vertices.
            let nv = g.vertex_count();
            let span = r.pow(nv as u32);
            for code in 0..span {
                let mut vals = vec![0u64; nv];
                let mut rem = code;
                for v in vals.iter_mut().rev() {
                    *v = rem % r;
                    rem /= r;
                }
                if vals.iter().sum::<u64>() % r != 0 {
                    continue;
                }
                let target = Chain0::new(r, vals.clone()).unwrap();
                let solutions = solve_boundary(g, &target).map_err(|e| e.to_string())?;
                check(
                    solutions.len() == 1,
                    &format!("tree class should have one weighting, got {}", solutions.len()),
                )?;
                let trivial = vals.iter().all(|&v| v == 0);
                let delta_empty = solutions[0].support().is_empty();
                check(
                    trivial == delta_empty,
                    "blow-up locus should be empty exactly for the trivial class",
                )?;
                classes += 1;
            }
            // Weightings route: same uniqueness through the public API.
            let ws = admissible_weightings(g, &Chain0::new(r, vec![0; nv]).unwrap())
                .map_err(|e| e.to_string())?;
            check(ws.len() == 1, "unique weighting for the zero class")?;
            // Compactified fiber: discrete everywhere.
            for l in [0i64, 1, 2] {
                match shat_fiber(g, r, l, false) {
                    Ok(report) => {
                        for s in &report.strata {
                            check(
                                s.dimension == Dimension::Exact(0),
                                "tree fiber stratum should be zero-dimensional",
                            )?;
                        }
                    }
                    Err(limitroots::Error::SpinDivisibility { .. }) => continue,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    Ok(format!("{classes} tree classes: unique weightings, discrete fibers"))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 worked fiber table", criterion_1),
        ("2 length identity", criterion_2),
        ("3 balanced inventory", criterion_3),
        ("4 compactified fiber", criterion_4),
        ("5 dimension formula grid", criterion_5),
        ("6 square-root identities", criterion_6),
        ("7 oracle agreement", criterion_7),
        ("8 compact type", criterion_8),
    ];
    let mut failed = 0usize;
    for (name, run) in criteria {
        match run() {
            Ok(note) => println!("criterion {name}: PASS — {note}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL — {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
