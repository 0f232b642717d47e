//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;

use common::{check_layered, shortest_augmenting, BaseWatch, LevelSnapshot, BUDGET};
use mvmatch::augment::{maximum_matching, run_phase, run_phase_observed, PhaseOptions};
use mvmatch::fixtures;
use mvmatch::gen::{random_graph, random_layered, random_matching, random_maximal_matching, rng};
use mvmatch::graph::{validate_matching, Graph};
use mvmatch::oracle::matching::{max_matching_exhaustive, reference_size};
use mvmatch::oracle::paths::{check_structure, Guard, OracleProfile};

type Outcome = Result<String, String>;

fn random_sized(r: &mut impl Rng, n: usize) -> Graph {
    let max_m = n * n.saturating_sub(1) / 2;
    let m = r.gen_range(0..=max_m);
    random_graph(n, m, r)
}

fn exactness() -> Outcome {
    const SUPER: [(usize, usize); 10] =
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2), (0, 3), (1, 4), (2, 5)];
    let mut graphs = Vec::new();
    for mask in 0u32..1 << SUPER.len() {
        let e: Vec<_> = SUPER.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        graphs.push(Graph::from_edges(6, &e).unwrap());
    }
    let mut r = rng(0xC1);
    for k in 0..500 {
        graphs.push(random_sized(&mut r, 1 + k % 14));
    }
    for (k, g) in graphs.iter().enumerate() {
        let want = max_matching_exhaustive(g).map_err(|e| e.to_string())?;
        let sol = maximum_matching(g).map_err(|e| format!("graph {k}: {e}"))?;
        validate_matching(g, &sol.matching).map_err(|e| format!("graph {k}: {e}"))?;
        if sol.matching.len() != want {
            return Err(format!("graph {k}: size {} but maximum is {want}; edges {:?}", sol.matching.len(), g.edges()));
        }
    }
    Ok(format!("{} graphs, 1024 exhaustive subsets + 500 random", graphs.len()))
}

fn level_correctness() -> Outcome {
    let mut r = rng(0xC2);
    let (mut min_exact, mut beyond, mut both_exact, mut at_lm_exact, mut at_lm_open) = (0, 0, 0, 0, 0);
    for k in 0..200 {
        let n = 2 + k % 11;
        let g = random_sized(&mut r, n);
        let m0 = random_maximal_matching(&g, &mut r);
        let p = OracleProfile::build(&g, &m0, Guard::default()).map_err(|e| format!("graph {k}: {e}"))?;
        let mut snap = LevelSnapshot::default();
        run_phase_observed(&g, &m0, PhaseOptions::default(), &mut snap).map_err(|e| format!("graph {k}: {e}"))?;
        let jm = p.lm.map(|l| (l - 1) / 2);
        let case = || format!("graph {k}: edges {:?} matching {:?}", g.edges(), m0.pairs());
        for v in 0..n {
            let (e, o) = snap.0[v];
            let got_min = [e, o].into_iter().flatten().min();
            let got_max = e.zip(o).map(|(a, b)| a.max(b));
            let want_min = p.minlevel(v);
            // Search levels 0..=j_m settle every minlevel up to j_m + 1.
            let covered = match (want_min, jm) {
                (_, None) => true,
                (Some(x), Some(j)) => x <= j + 1,
                (None, Some(_)) => false,
            };
            if covered {
                if got_min != want_min {
                    return Err(format!("{}: minlevel({v}) = {got_min:?}, oracle {want_min:?}", case()));
                }
                min_exact += 1;
            } else {
                if got_min.is_some() {
                    return Err(format!("{}: minlevel({v}) = {got_min:?} beyond the final level", case()));
                }
                beyond += 1;
            }
            let t = p.tenacity(v);
            if p.lm.is_none() || (t.is_some() && t < p.lm) {
                if (e, o) != (p.even[v], p.odd[v]) {
                    return Err(format!("{}: levels({v}) = {:?}, oracle {:?}", case(), (e, o), (p.even[v], p.odd[v])));
                }
                both_exact += 1;
            } else if got_max.is_some_and(|x| Some(x) != p.maxlevel(v)) {
                return Err(format!("{}: maxlevel({v}) = {got_max:?}, oracle {:?}", case(), p.maxlevel(v)));
            } else if t == p.lm {
                if got_max.is_some() {
                    at_lm_exact += 1;
                } else {
                    at_lm_open += 1;
                }
            }
        }
    }
    Ok(format!(
        "minlevel exact on {min_exact} searched vertices ({beyond} beyond the final level left unset); \
         both levels exact on {both_exact} with t < l_m or l_m = inf; t = l_m: {at_lm_exact} exact, \
         {at_lm_open} maxlevels left to free-pair supports"
    ))
}

fn ddfs() -> Outcome {
    let mut r = rng(0xC3);
    let (mut checked, mut skipped) = (0, 0);
    while checked < 500 {
        let h = random_layered(12, 40, &mut r);
        match check_layered(&h) {
            None => skipped += 1,
            Some(Ok(())) => checked += 1,
            Some(Err(e)) => return Err(format!("{e}: {h:?}")),
        }
    }
    Ok(format!("{checked} DAGs agree with brute force within 2|E|; {skipped} over the {BUDGET}-path budget skipped"))
}

fn structure() -> Outcome {
    let mut instances: Vec<(String, Graph, mvmatch::graph::Matching)> =
        fixtures::structural().into_iter().map(|f| (f.name.to_string(), f.graph, f.matching)).collect();
    let mut r = rng(0xC4);
    for k in 0..200 {
        let g = random_sized(&mut r, 2 + k % 9);
        let m0 = if k % 2 == 0 { random_maximal_matching(&g, &mut r) } else { random_matching(&g, &mut r) };
        instances.push((format!("random {k}"), g, m0));
    }
    let (mut checks, mut skipped, mut bud_checks) = (0u64, 0u64, 0u64);
    for (name, g, m0) in &instances {
        let p = OracleProfile::build(g, m0, Guard::default()).map_err(|e| format!("{name}: {e}"))?;
        let rep = check_structure(&p, g, m0, Guard::default()).map_err(|e| format!("{name}: {e}"))?;
        if !rep.passed() {
            return Err(format!("{name}: {:?}", rep.failures.first()));
        }
        checks += rep.checked.values().sum::<u64>();
        skipped += rep.skipped;
        let mut watch = BaseWatch::new(&p);
        run_phase_observed(g, m0, PhaseOptions::default(), &mut watch).map_err(|e| format!("{name}: {e}"))?;
        if let Some(f) = watch.failures.first() {
            return Err(format!("{name}: {f}; edges {:?} matching {:?}", g.edges(), m0.pairs()));
        }
        bud_checks += watch.checked;
    }
    Ok(format!(
        "{} instances, {checks} theorem checks, {bud_checks} bud*=base checks, {skipped} short base chains skipped",
        instances.len()
    ))
}

fn phase_discipline() -> Outcome {
    let mut r = rng(0xC5);
    let mut max_phases = 0;
    for k in 1..=50usize {
        let n = 40 * k;
        let m = n * (1 + k % 5) / 2 + k % 7;
        let g = random_graph(n, m, &mut r);
        let sol = maximum_matching(&g).map_err(|e| format!("graph {k}: {e}"))?;
        let bound = 2 * (n as f64).sqrt().ceil() as usize + 2;
        if sol.phases.len() > bound {
            return Err(format!("graph {k}: {} phases > {bound}", sol.phases.len()));
        }
        max_phases = max_phases.max(sol.phases.len());
        let lms: Vec<u32> = sol.phases.iter().filter_map(|p| p.lm).collect();
        if lms.windows(2).any(|w| w[1] <= w[0]) {
            return Err(format!("graph {k}: l_m sequence {lms:?} not increasing"));
        }
        for (j, p) in sol.phases.iter().enumerate() {
            if p.work() > 8 * g.edge_count() as u64 {
                return Err(format!("graph {k} phase {j}: work {} > 8m = {}", p.work(), 8 * g.edge_count()));
            }
        }
        let want = reference_size(&g).map_err(|e| e.to_string())?;
        if sol.matching.len() != want {
            return Err(format!("graph {k}: size {} but reference finds {want}", sol.matching.len()));
        }
    }
    Ok(format!("50 graphs n = 40..2000, at most {max_phases} phases"))
}

fn maximality() -> Outcome {
    let mut r = rng(0xC6);
    let guard = Guard::default();
    let mut phases = 0;
    for k in 0..100 {
        let n = 2 + k % 11;
        let g = random_sized(&mut r, n);
        let mut m = if k % 2 == 0 { random_matching(&g, &mut r) } else { mvmatch::graph::Matching::empty(n) };
        loop {
            let res = run_phase(&g, &m, PhaseOptions::default()).map_err(|e| format!("graph {k}: {e}"))?;
            let none = vec![false; n];
            let lm = shortest_augmenting(&g, &m, &none, guard);
            let got = res.stats.lm.map(|l| l as usize);
            if got != lm {
                return Err(format!("graph {k}: phase l_m {got:?}, oracle {lm:?}"));
            }
            let Some(l) = lm else { break };
            phases += 1;
            let mut blocked = vec![false; n];
            for p in &res.paths {
                if p.len() != l {
                    return Err(format!("graph {k}: path of length {} in a phase with l_m {l}", p.len()));
                }
                for &v in p.vertices() {
                    if blocked[v] {
                        return Err(format!("graph {k}: paths share vertex {v}"));
                    }
                    blocked[v] = true;
                }
            }
            if let Some(x) = shortest_augmenting(&g, &m, &blocked, guard).filter(|&x| x == l) {
                return Err(format!("graph {k}: a disjoint augmenting path of length {x} was missed"));
            }
            m = res.matching;
        }
    }
    Ok(format!("100 graphs, {phases} phases maximal"))
}

fn throughput() -> Outcome {
    let g = random_graph(100_000, 500_000, &mut rng(0xC7));
    let start = Instant::now();
    let sol = maximum_matching(&g).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    validate_matching(&g, &sol.matching).map_err(|e| e.to_string())?;
    if took > Duration::from_secs(10) {
        return Err(format!("{took:.2?} > 10s"));
    }
    Ok(format!("size {} in {} phases, {took:.2?}", sol.matching.len(), sol.phases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("exactness", exactness),
        ("level correctness", level_correctness),
        ("ddfs bottleneck and work bound", ddfs),
        ("structural theorems", structure),
        ("phase discipline", phase_discipline),
        ("per-phase maximality", maximality),
        ("throughput", throughput),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match res {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{took:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}) [{took:.2?}]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
