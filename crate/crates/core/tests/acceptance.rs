//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udaf::builtin::builtin_script;
use udaf::digraph::flatten_segment;
use udaf::dimension::{
    check_det_compatible, common_refinement_search, dimension_group_invariants, sim_d_equivalent,
    weak_udaf_equivalent, GroupInvariants, VertexMultiset,
};
use udaf::moves::{apply_moves, col_macro, row_macro};
use udaf::search::{find_certificate, SearchBudget, SearchOptions, SearchOutcome};
use udaf::splitting::{in_split, out_split, past_future_digraph, EdgePartition, DEFAULT_PF_VERTEX_CAP};
use udaf::{apply_move, invert_move, verify_script, Digraph, RelatorMatrix};

const SEED: u64 = 20261017;

type Check = Result<String, String>;

/// Name, time limit and check.
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_mean_search() -> Check {
    let golden = common::rel(&[&[0, 1], &[1, -1]]);
    let rose = common::rel(&[&[1]]);
    let opts = |steps| SearchOptions {
        budget: SearchBudget { max_steps: steps, ..SearchBudget::default() },
        ..SearchOptions::default()
    };
    let script = match find_certificate(&golden, &rose, &opts(3)).map_err(|e| e.to_string())? {
        SearchOutcome::Found(s) => s,
        other => return Err(format!("max_steps=3 gave {other:?}")),
    };
    ensure(script.moves.len() == 3, || format!("found {} moves", script.moves.len()))?;
    ensure(verify_script(&script).is_verified(), || "found script does not verify".into())?;
    let short = find_certificate(&golden, &rose, &opts(2)).map_err(|e| e.to_string())?;
    ensure(matches!(short, SearchOutcome::ExhaustedWithinBudget { .. }), || format!("max_steps=2 gave {short:?}"))?;
    let moves: Vec<String> = script.moves.iter().map(|m| m.to_string()).collect();
    Ok(format!("3 moves: {}", moves.join("; ")))
}

fn ashley_chain() -> Check {
    let mut scripts = Vec::new();
    for name in ["script:ashley-to-fourcycle", "script:rose2-to-fourcycle"] {
        let s = builtin_script(name).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let ok = verify_script(&s).is_verified();
        let dt = t.elapsed();
        ensure(ok, || format!("{name} does not verify"))?;
        ensure(dt < Duration::from_secs(1), || format!("{name} took {dt:?}"))?;
        scripts.push(s);
    }
    let chain = scripts[0].concat(&scripts[1].reversed().ok_or("reversal failed")?).ok_or("endpoints differ")?;
    ensure(chain.initial == Digraph::ashley().relator_matrix(), || "chain does not start at Ashley".into())?;
    ensure(chain.claimed_final == common::rel(&[&[1]]), || "chain does not end at the 2-leaf rose".into())?;
    ensure(verify_script(&chain).is_verified(), || "composed chain does not verify".into())?;
    Ok(format!("{} + {} moves, composed chain of {} verifies", scripts[0].moves.len(), scripts[1].moves.len(), chain.moves.len()))
}

fn determinant_parity() -> Check {
    let ashley = Digraph::ashley().relator_matrix();
    ensure(ashley.size() == 8, || "Ashley relator is not 8x8".into())?;
    ensure(ashley.determinant() == BigInt::from(-1), || format!("det = {}", ashley.determinant()))?;
    let rose = common::rel(&[&[1]]);
    ensure(ashley.signed_determinant() == rose.signed_determinant(), || "signed determinants differ".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total_moves = 0;
    for k in 0..1000 {
        let start = common::random_udaf_relator(&mut rng, 6, 3);
        let len = rng.gen_range(1..=10);
        let (moves, visited) = common::random_legal_walk(&mut rng, &start, len, 6, 20);
        total_moves += moves.len();
        let d = start.signed_determinant();
        if let Some(m) = visited.iter().find(|m| m.signed_determinant() != d) {
            return Err(format!("sequence {k}: signed det changed at {m:?}"));
        }
    }
    Ok(format!("det(Ashley) = -1; 1000 sequences, {total_moves} legal moves"))
}

fn rose_separation() -> Check {
    for n in 2..=10 {
        let expected = if n == 2 { vec![] } else { vec![BigInt::from(n - 1)] };
        let g = dimension_group_invariants(&Digraph::rose(n)).map_err(|e| e.to_string())?;
        ensure(g == GroupInvariants { free_rank: 0, invariant_factors: expected }, || format!("R_{n}: {g}"))?;
        for m in 2..=10 {
            let w = weak_udaf_equivalent(&Digraph::rose(n), &Digraph::rose(m)).map_err(|e| e.to_string())?;
            ensure(w == (n == m), || format!("R_{n} vs R_{m}: {w}"))?;
        }
    }
    Ok("81 pairs".into())
}

fn weak_not_strong() -> Check {
    let a = common::rel(&[&[0, 1], &[1, 0]]);
    let b = common::rel(&[&[2, 1], &[1, 1]]);
    let weak = udaf::dimension::weak_udaf_equivalent_relators(&a, &b).map_err(|e| e.to_string())?;
    ensure(weak, || "not weakly equivalent".into())?;
    ensure(!check_det_compatible(&a, &b), || "determinants compatible".into())?;
    Ok(format!("signed dets {} vs {}", a.signed_determinant(), b.signed_determinant()))
}

fn splitting_traces() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..200 {
        let d = common::random_digraph(&mut rng, 5, 10);
        let traces = d.trace_sequence(8);
        let out = EdgePartition::from_blocks(d.edge_count(), common::random_partition(&mut rng, &d, true))
            .map_err(|e| e.to_string())?;
        let inn = EdgePartition::from_blocks(d.edge_count(), common::random_partition(&mut rng, &d, false))
            .map_err(|e| e.to_string())?;
        let os = out_split(&d, &out).map_err(|e| e.to_string())?.0;
        let is = in_split(&d, &inn).map_err(|e| e.to_string())?.0;
        ensure(os.trace_sequence(8) == traces, || format!("digraph {k}: out-splitting traces differ"))?;
        ensure(is.trace_sequence(8) == traces, || format!("digraph {k}: in-splitting traces differ"))?;
        let past = -rng.gen_range(0..=2i64);
        let future = past + rng.gen_range(0..=2i64);
        let (past, future) = if future < 0 { (past - future, 0) } else { (past, future) };
        let pf = past_future_digraph(&d, past, future, DEFAULT_PF_VERTEX_CAP).map_err(|e| e.to_string())?.0;
        ensure(pf.trace_sequence(8) == traces, || format!("digraph {k}: PF({past},{future}) traces differ"))?;
    }
    for k in 0..50 {
        let d = common::random_digraph(&mut rng, 5, 10);
        let pf = past_future_digraph(&d, 0, 0, DEFAULT_PF_VERTEX_CAP).map_err(|e| e.to_string())?.0;
        ensure(pf.is_isomorphic(&d), || format!("digraph {k}: PF(0,0) not isomorphic"))?;
    }
    Ok("200 digraphs with in/out/PF, 50 PF(0,0) isomorphisms".into())
}

/// Some `y` with entries in `[-bound, bound]` and `y * rel = m2 - m1`.
fn bounded_witness(rel: &RelatorMatrix, m1: &VertexMultiset, m2: &VertexMultiset, bound: i64) -> Option<Vec<i64>> {
    let n = rel.size();
    let diff: Vec<i64> = (0..n).map(|j| m2.counts[j] as i64 - m1.counts[j] as i64).collect();
    let mut y = vec![-bound; n];
    loop {
        if (0..n).all(|j| (0..n).map(|i| y[i] * rel.get(i, j)).sum::<i64>() == diff[j]) {
            return Some(y);
        }
        let mut k = 0;
        while k < n && y[k] == bound {
            y[k] = -bound;
            k += 1;
        }
        if k == n {
            return None;
        }
        y[k] += 1;
    }
}

fn random_multiset(rng: &mut ChaCha8Rng, n: usize) -> VertexMultiset {
    loop {
        let m = VertexMultiset::new((0..n).map(|_| rng.gen_range(0..=3)).collect());
        if !m.is_empty() {
            return m;
        }
    }
}

fn refinement_cross_validation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut found, mut bounded, mut equivalent) = (0, 0, 0);
    let mut misses = Vec::new();
    for k in 0..200 {
        let d = common::random_strong_udaf(&mut rng, 4, 8);
        let rel = d.relator_matrix();
        let n = d.vertex_count();
        let m1 = random_multiset(&mut rng, n);
        let m2 = random_multiset(&mut rng, n);
        let sim = sim_d_equivalent(&m1, &m2, &d).map_err(|e| e.to_string())?;
        equivalent += usize::from(sim);
        let common = common_refinement_search(&m1, &m2, &d, 6, 40);
        if common.is_some() {
            found += 1;
            ensure(sim, || format!("pair {k}: common refinement but not equivalent"))?;
        }
        if sim {
            if let Some(y) = bounded_witness(&rel, &m1, &m2, 3) {
                bounded += 1;
                if common.is_none() {
                    misses.push(format!("pair {k}: rel {:?}, {m1} vs {m2}, witness {y:?}", rel.matrix().rows()));
                }
            }
        }
    }
    let summary = format!("200 pairs, {equivalent} equivalent, {found} common refinements, {bounded} bounded witnesses");
    if misses.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; no common refinement within depth 6 for {}", misses.join("; ")))
    }
}

fn flattening_example() -> Check {
    // two loops a and b at one vertex
    let d = Digraph::new(1, [(0, 0), (0, 0)]).unwrap();
    let (a, b) = (0, 1);
    let segment = [d.walk(0, vec![]).unwrap(), d.walk(0, vec![b]).unwrap(), d.walk(0, vec![b, a, b]).unwrap()];
    let (flat, offsets) = flatten_segment(&segment, 0).map_err(|e| e.to_string())?;
    ensure(flat.edges() == [b, b, a, b], || format!("flattened to {:?}", flat.edges()))?;
    ensure(offsets == [0, 0, 1, 4], || format!("offsets {offsets:?}"))?;
    Ok("bbab, offsets [0, 0, 1, 4]".into())
}

fn round_trips_and_macros() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut legal = 0;
    let mut tried = 0;
    while legal < 1000 {
        tried += 1;
        let m = common::random_udaf_relator(&mut rng, 5, 3);
        let mv = common::random_move(&mut rng, &m);
        let Ok(out) = apply_move(&m, &mv) else { continue };
        legal += 1;
        let inv = invert_move(&out.applied, &m);
        let back = apply_move(&out.result, &inv).map_err(|e| format!("inverse of {mv} illegal: {e}"))?.result;
        ensure(back == m, || format!("{mv} on {:?} does not round-trip", m.matrix().rows()))?;
    }
    let mut macros = 0;
    while macros < 100 {
        let d = common::random_strong_udaf(&mut rng, 5, 10);
        let m = d.relator_matrix();
        if m.has_negative_entries() || m.size() < 2 {
            continue;
        }
        macros += 1;
        let n = m.size();
        let target = rng.gen_range(0..n);
        let source = (target + rng.gen_range(1..n)) % n;
        let rows = row_macro(&m, target, source).map_err(|e| e.to_string())?;
        let (r, _) = apply_moves(&m, &rows).map_err(|(k, e)| format!("row macro step {k}: {e}"))?;
        let cols = col_macro(&m, target, source).map_err(|e| e.to_string())?;
        let (c, _) = apply_moves(&m, &cols).map_err(|(k, e)| format!("column macro step {k}: {e}"))?;
        for x in 0..n {
            ensure(r.get(target, x) == m.get(target, x) + m.get(source, x), || "row macro mismatch".into())?;
            ensure(c.get(x, target) == m.get(x, target) + m.get(x, source), || "column macro mismatch".into())?;
            for y in 0..n {
                if x != target {
                    ensure(r.get(x, y) == m.get(x, y), || "row macro touched another row".into())?;
                }
                if y != target {
                    ensure(c.get(x, y) == m.get(x, y), || "column macro touched another column".into())?;
                }
            }
        }
    }
    Ok(format!("1000 legal round trips ({tried} sampled), 100 row and column macros"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden mean to 2-leaf rose in 3 moves", Duration::from_secs(1), golden_mean_search),
        ("Ashley chain certificates", Duration::from_secs(2), ashley_chain),
        ("determinant parity", Duration::from_secs(10), determinant_parity),
        ("rose separation", Duration::from_secs(1), rose_separation),
        ("weak but not strong", Duration::from_secs(1), weak_not_strong),
        ("splitting conjugacy traces", Duration::from_secs(30), splitting_traces),
        ("refinement cross-validation", Duration::from_secs(60), refinement_cross_validation),
        ("flattening example", Duration::from_secs(1), flattening_example),
        ("move round trips and macro fidelity", Duration::from_secs(10), round_trips_and_macros),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let dt = t.elapsed();
        let result = match result {
            Ok(detail) if dt > *limit => Err(format!("{detail}; took {dt:.2?}, limit {limit:?}")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {} {name} ({dt:.2?}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({dt:.2?}): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
