//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic
//! throughout. Runs without the libtest harness so every line is printed.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;
use qschur::convalg::{
    check_relations, closure_dimension, closure_dimension_weighted, extract_idempotents, weight_action_check,
    ConvAlgebra, Generator, GeneratorSet, DEFAULT_MAX_BASIS,
};
use qschur::flagvar::{
    all_strata, count_x_nu, enumerate_flags_type_a, enumerate_x, satisfies_necessary, stratum_count, DimVector,
    QuiverShape, Stratum, DEFAULT_MAX_FLAGS,
};
use qschur::geometry::{degree_matches, dim_y, enumerate_strata, dim_x_stratum, fiber_dim, fiber_dim_hom, stratum_table};
use qschur::reptheory::{
    check_saturation, feasibility_inequality, nat_matrices_with_sum, necessary_but_not_in_pi, pi_set, schur_dimension,
    top_dvec, CartanData, PiElement, Weight,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    /// Failure limited to a sub-check recorded as unattainable.
    documented_gap: bool,
    detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Verdict { pass: true, documented_gap: false, detail: detail.into() }
    }
    fn fail(detail: impl Into<String>) -> Self {
        Verdict { pass: false, documented_gap: false, detail: detail.into() }
    }
    fn check(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(detail)
        } else {
            Self::fail(detail)
        }
    }
}

fn algebra(m: usize, d: usize, q: u64) -> ConvAlgebra {
    ConvAlgebra::new(enumerate_x(QuiverShape::new(m).unwrap(), d, q, DEFAULT_MAX_FLAGS).unwrap())
}

fn d_schur(m: usize, d: usize) -> u64 {
    let c = CartanData::type_d(m);
    let pi = pi_set(&c, &top_dvec(c.rank(), m + 1, d as i64)).unwrap();
    schur_dimension(&c, &pi).unwrap().try_into().unwrap()
}

fn relation_suite() -> Verdict {
    let mut instances = 0;
    let mut bad = Vec::new();
    for (m, d, q) in [(1, 1, 2), (1, 2, 2), (2, 1, 2), (2, 1, 3), (2, 2, 2)] {
        let rep = check_relations(&algebra(m, d, q)).unwrap();
        instances += rep.instances_checked;
        if !rep.is_clean() {
            bad.push(format!("({m},{d},{q}): {} violations", rep.violations.len()));
        }
    }
    Verdict::check(bad.is_empty(), format!("{instances} relation instances over 5 configurations, failures {bad:?}"))
}

fn dimension_identity() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for (m, expect) in [(1, 36u64), (2, 64)] {
        let alg = algebra(m, 1, 2);
        let g = GeneratorSet::build(&alg).unwrap();
        let generic = closure_dimension(&alg, &g.all(), DEFAULT_MAX_BASIS).unwrap() as u64;
        let graded = closure_dimension_weighted(&alg, DEFAULT_MAX_BASIS).unwrap().dimension as u64;
        let rhs = d_schur(m, 1);
        ok &= generic == expect && graded == expect && rhs == expect;
        notes.push(format!("m={m},d=1: closure {generic}/{graded}, sum of squares {rhs}"));
    }
    let rhs = d_schur(2, 2);
    let mut dims = Vec::new();
    for q in [2, 3] {
        let dim = closure_dimension_weighted(&algebra(2, 2, q), DEFAULT_MAX_BASIS).unwrap().dimension as u64;
        dims.push(dim);
        notes.push(format!("m=2,d=2,q={q}: closure {dim}"));
    }
    ok &= dims.iter().all(|&x| x == rhs);
    notes.push(format!("sum of squares {rhs}"));
    Verdict::check(ok, notes.join("; "))
}

fn idempotents() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 1..=2 {
        for d in 0..=2 {
            for q in [2, 3] {
                let alg = algebra(m, d, q);
                let ext = extract_idempotents(&alg).unwrap();
                let again = ext.certificate.evaluate(&alg).unwrap();
                for nu in alg.flags().realized_nus() {
                    checked += 1;
                    let direct = alg.generator(&Generator::One(nu.clone())).unwrap();
                    if ext.reconstructed[&nu] != direct || again[&nu] != direct {
                        bad.push(format!("({m},{d},{q}) {nu}"));
                    }
                }
            }
        }
    }
    Verdict::check(bad.is_empty(), format!("{checked} idempotents reconstructed and re-evaluated, mismatches {bad:?}"))
}

fn weight_action() -> Verdict {
    let mut bad = Vec::new();
    let mut configs = 0;
    for m in 1..=2 {
        for d in 0..=2 {
            for q in [2, 3] {
                configs += 1;
                let v = weight_action_check(&algebra(m, d, q)).unwrap();
                if !v.is_empty() {
                    bad.push(format!("({m},{d},{q}): {}", v.len()));
                }
            }
        }
    }
    Verdict::check(bad.is_empty(), format!("K weight action and E/F support rules over {configs} configurations, violations {bad:?}"))
}

fn box_vectors(len: usize, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn point_counts() -> Verdict {
    let mut problems = Vec::new();
    let mut forward_counterexamples: BTreeSet<String> = BTreeSet::new();
    let mut strata_checked = 0;
    for m in 1..=2 {
        for d in 0..=2 {
            let strata = all_strata(m, d);
            for q in [2, 3, 5] {
                let flags = enumerate_x(QuiverShape::new(m).unwrap(), d, q, DEFAULT_MAX_FLAGS).unwrap();
                for s in &strata {
                    strata_checked += 1;
                    let got = flags.by_stratum().get(s).map_or(0, |r| r.len());
                    if BigUint::from(got) != stratum_count(s, d, q) {
                        problems.push(format!("stratum ({},{:?}) at ({m},{d},{q})", s.nu, s.c));
                    }
                }
                if flags.by_stratum().keys().any(|s| !strata.contains(s)) {
                    problems.push(format!("unlisted stratum at ({m},{d},{q})"));
                }
                for nu in box_vectors(m + 2, 2 * d as i64) {
                    let nu = DimVector(nu);
                    let got = flags.by_nu().get(&nu).map_or(0, |r| r.len());
                    if BigUint::from(got) != count_x_nu(&nu, m, d, q) {
                        problems.push(format!("|X_{nu}| at ({m},{d},{q})"));
                    }
                    let necessary = satisfies_necessary(&nu, m, d);
                    if necessary && got == 0 {
                        problems.push(format!("X_{nu} empty although the condition holds at ({m},{d},{q})"));
                    }
                    if got > 0 && !necessary {
                        forward_counterexamples.insert(format!("m={m},d={d},nu={nu}"));
                    }
                }
            }
        }
    }
    let base = format!(
        "{strata_checked} stratum counts match; |X_nu| = sum over strata; condition => nonempty holds; "
    );
    if !problems.is_empty() {
        return Verdict::fail(format!("{strata_checked} strata checked; problems {problems:?}"));
    }
    if forward_counterexamples.is_empty() {
        return Verdict::pass(format!("{base}nonempty => condition holds"));
    }
    let first: Vec<&String> = forward_counterexamples.iter().take(3).collect();
    Verdict {
        pass: false,
        documented_gap: true,
        detail: format!(
            "{base}nonempty => condition is false: {} realized nu violate it, e.g. {first:?}",
            forward_counterexamples.len()
        ),
    }
}

fn random_stratum(rng: &mut ChaCha8Rng, m: usize, d: usize) -> Stratum {
    let mut u: Vec<i64> = (0..m).map(|_| rng.random_range(0..=d as i64)).collect();
    u.sort_unstable();
    let mut c: Vec<i64> = (0..m).map(|_| rng.random_range(0..=u[0])).collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    let ni = rng.random_range(c[0]..=u[0]);
    let nk = rng.random_range(c[0]..=u[0]);
    let mut nu = vec![ni, nk];
    nu.extend((0..m).map(|b| u[b] + c[b]));
    Stratum { nu: DimVector(nu), c }
}

fn dimension_suite() -> Verdict {
    let mut problems = Vec::new();
    let mut degree_checks = 0;
    for m in 1..=2 {
        for d in 0..=2 {
            for row in stratum_table(m, d, &[2, 3, 5, 7, 11], DEFAULT_MAX_FLAGS).unwrap() {
                degree_checks += 1;
                if !degree_matches(&row) {
                    problems.push(format!("degree at ({},{:?})", row.stratum.nu, row.stratum.c));
                }
                if row.polynomial.eval(13) != stratum_count(&row.stratum, d, 13).into() {
                    problems.push(format!("held-out prime at ({},{:?})", row.stratum.nu, row.stratum.c));
                }
            }
        }
    }
    let mut exhaustive = 0;
    for m in 1..=3 {
        for d in 0..=4 {
            let nus: BTreeSet<DimVector> = all_strata(m, d).into_iter().map(|s| s.nu).collect();
            for nu in nus {
                exhaustive += 1;
                let y = dim_y(&nu, m, d).unwrap();
                if !y.is_c_independent() {
                    problems.push(format!("dim Y depends on c at nu={nu}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2010);
    for _ in 0..200 {
        let m = rng.random_range(3..=6);
        let d = rng.random_range(4..=9);
        let s = random_stratum(&mut rng, m, d);
        let others = enumerate_strata(&s.nu, m, d);
        if !others.contains(&s) {
            problems.push(format!("sampled stratum not listed: {:?}", s));
            continue;
        }
        let t = &others[rng.random_range(0..others.len())];
        let total = |x: &Stratum| dim_x_stratum(x, d).unwrap() + fiber_dim(x, d).unwrap();
        if total(&s) != total(t) || fiber_dim(&s, d).unwrap() != fiber_dim_hom(&s, d).unwrap() {
            problems.push(format!("random pair {:?} / {:?}", s, t.c));
        }
    }
    Verdict::check(
        problems.is_empty(),
        format!(
            "{degree_checks} strata with degree = dim_X (primes 2..11, held-out 13); {exhaustive} nu c-independent; 200 random pairs; problems {problems:?}"
        ),
    )
}

fn pi_machinery() -> Verdict {
    let d4 = CartanData::type_d(2);
    let mut problems = Vec::new();
    let one = pi_set(&d4, &top_dvec(4, 3, 1)).unwrap();
    if one != vec![PiElement { lambda: Weight::fundamental(4, 3), nu: vec![0; 4] }] {
        problems.push("pi(D4, d=1)".to_string());
    }
    let mut sets = 0;
    let mut scans = 0;
    for m in 1..=3 {
        let c = CartanData::type_d(m);
        for d in 0..=3 {
            let dvec = top_dvec(c.rank(), m + 1, d);
            let pi = pi_set(&c, &dvec).unwrap();
            sets += 1;
            if !check_saturation(&c, &pi) {
                problems.push(format!("saturation m={m} d={d}"));
            }
            if pi.iter().any(|e| !satisfies_necessary(&DimVector(e.nu.clone()), m, d as usize)) {
                problems.push(format!("pi member violates the necessary condition m={m} d={d}"));
            }
            for nu in box_vectors(m + 2, 3) {
                scans += 1;
                if feasibility_inequality(&dvec, &nu, &c) != c.weight_of(&dvec, &nu).is_dominant() {
                    problems.push(format!("feasibility m={m} d={d} nu={nu:?}"));
                }
            }
        }
    }
    let witness = necessary_but_not_in_pi(2, 2);
    if !witness.contains(&vec![0, 0, 1, 1]) {
        problems.push("no witness for necessary-but-not-in-pi".into());
    }
    Verdict::check(
        problems.is_empty(),
        format!("pi(D4,1) = {{omega_j2}}; {sets} saturated sets; {scans} feasibility scans; witness (0,0,1,1); problems {problems:?}"),
    )
}

fn type_a() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for q in [2, 3] {
        for n in [2, 3] {
            let alg = ConvAlgebra::new(enumerate_flags_type_a(n - 1, 2, q, DEFAULT_MAX_FLAGS).unwrap());
            let g = GeneratorSet::build(&alg).unwrap();
            let clean = check_relations(&alg).unwrap().is_clean();
            let dim = closure_dimension(&alg, &g.all(), DEFAULT_MAX_BASIS).unwrap() as u64;
            let oracle = nat_matrices_with_sum(n, 2);
            ok &= clean && dim == oracle;
            notes.push(format!("S_q({n},2) at q={q}: {dim} (oracle {oracle})"));
        }
    }
    notes.push("the stated value 21 for S_q(3,2) contradicts its own matrix-count definition (45)".into());
    Verdict::check(ok, notes.join("; "))
}

fn determinism_and_faults() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_qschur");
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |args: &[&str], out: &str| -> (i32, Vec<u8>) {
        let path = dir.path().join(out);
        let status = Command::new(exe)
            .args(args)
            .arg("--out")
            .arg(&path)
            .arg("--cache-dir")
            .arg(&cache)
            .status()
            .unwrap();
        (status.code().unwrap_or(-1), fs::read(&path).unwrap_or_default())
    };
    let commands: [&[&str]; 9] = [
        &["enumerate", "--m", "1", "--d", "2", "--q", "3"],
        &["check-relations", "--m", "2", "--d", "1", "--q", "2"],
        &["idempotents", "--m", "1", "--d", "1", "--q", "3"],
        &["dim-check", "--m", "2", "--d", "1", "--q", "2"],
        &["pi", "--type", "D", "--m", "2", "--d", "2", "--orbits"],
        &["weight-check", "--m", "2", "--d", "1", "--q", "3"],
        &["strata", "--m", "1", "--d", "2"],
        &["count", "--m", "2", "--d", "2", "--q", "2", "--enumerate"],
        &["typeA-baseline", "--n", "2", "--d", "2", "--q", "3"],
    ];
    let mut problems = Vec::new();
    for args in commands {
        let (c1, cold) = run(args, "a");
        let (c2, warm) = run(args, "b");
        if c1 != 0 || c2 != 0 || cold != warm || cold.is_empty() {
            problems.push(format!("{} exit {c1}/{c2}, identical {}", args[0], cold == warm));
        }
    }
    let a = enumerate_x(QuiverShape::new(2).unwrap(), 2, 2, DEFAULT_MAX_FLAGS).unwrap().to_json();
    let b = enumerate_x(QuiverShape::new(2).unwrap(), 2, 2, DEFAULT_MAX_FLAGS).unwrap().to_json();
    if a.to_string() != b.to_string() {
        problems.push("in-process enumeration differs".into());
    }
    for g in ["E:j1", "F:i", "K:j2", "Kinv:k"] {
        let (code, body) = run(&["check-relations", "--m", "2", "--d", "1", "--q", "2", "--perturb", g], "fault");
        let report: serde_json::Value = serde_json::from_slice(&body).unwrap_or_default();
        let caught = report["violations"].as_array().is_some_and(|v| !v.is_empty());
        if code != 1 || !caught {
            problems.push(format!("perturbing {g}: exit {code}, caught {caught}"));
        }
    }
    Verdict::check(
        problems.is_empty(),
        format!("9 subcommands byte-identical cold/warm cache; 4 perturbed generators exit 1; problems {problems:?}"),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Verdict); 9] = [
        (1, "relation suite", relation_suite),
        (2, "dimension identity", dimension_identity),
        (3, "idempotent extraction", idempotents),
        (4, "weight action", weight_action),
        (5, "point counts", point_counts),
        (6, "dimension suite", dimension_suite),
        (7, "pi machinery", pi_machinery),
        (8, "type A baseline", type_a),
        (9, "determinism and fault injection", determinism_and_faults),
    ];
    // A panicking criterion is reported as FAIL instead of aborting the run.
    panic::set_hook(Box::new(|_| {}));
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (n, name, f) in criteria {
        let start = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Verdict::fail(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = match (v.pass, v.documented_gap) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        println!("criterion {n} {tag} [{name}] {} ({:.1}s)", v.detail, start.elapsed().as_secs_f64());
        if v.pass {
            passed += 1;
        } else if !v.documented_gap {
            unexpected.push(n);
        }
    }
    println!("acceptance: {passed}/9 pass, unexpected failures {unexpected:?}");
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
