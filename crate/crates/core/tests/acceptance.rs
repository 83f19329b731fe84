//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every criterion reports even when an earlier one fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pfl::bdd::{Bdd, BddManager, Var};
use pfl::fault_tree::{FaultTree, ProbVector};
use pfl::fixtures;
use pfl::langpfl::{lower_query, parse_query, Lowered};
use pfl::logic::{sugar_mps, Cmp, Connectives, Formula1, Formula2, Formula3};
use pfl::prob::{bdd_probability, eval_layer3, satisfaction_set, symbolic_polynomial, Layer2, DEFAULT_EQ_TOLERANCE};
use pfl::region::{box_extrema, check_forall, partition, Forall, RegionConfig, RegionQuery};
use pfl::translate::Translator;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn a(n: &str) -> Formula1 {
    Formula1::atom(n)
}

fn worked_example() -> Outcome {
    let oracle = 0.015 * (1.0 - (1.0 - 0.0023) * (1.0 - 0.0015) * (1.0 - 0.002));
    let dir = std::env::temp_dir().join(format!("pfl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let tree = dir.join("mec.ft");
    std::fs::write(&tree, fixtures::MEDIUM_CORROSION).map_err(|e| e.to_string())?;
    let tree = tree.display().to_string();
    let query = "assume: setp H2S = 0.0023 setp WW = 0.015 check: P[MeC] <= 0.0001";
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let args = [
        "pfl", "check", "--tree", &tree, "--query-text", query, "-p", "WW=0.002", "-p", "H2S=0.001", "-p",
        "O2=0.0015", "-p", "CO2=0.002",
    ];
    let code = pfl::cli::run(args, &mut out, &mut err);
    let _ = std::fs::remove_dir_all(&dir);
    let out = String::from_utf8_lossy(&out).to_string();
    ensure(code == 0 && out == "true\n", || format!("check printed {out:?} with exit {code}"))?;

    let ft = fixtures::medium_corrosion();
    let rho = ProbVector::new(vec![0.002, 0.001, 0.0015, 0.002]).map_err(|e| e.to_string())?;
    let xi = Formula3::pr(a("MeC")).setp("H2S", 0.0023).setp("WW", 0.015);
    let v = eval_layer3(&ft, &xi, &rho).map_err(|e| e.to_string())?.value().ok_or("undefined")?;
    ensure((v - oracle).abs() <= 1e-9, || format!("P = {v}, oracle {oracle}"))?;
    ensure((v - 8.68343e-5).abs() <= 1e-9, || format!("P = {v}"))?;
    ensure(format!("{v:.6}") == "0.000087", || format!("{v:.6}"))?;
    Ok(format!("P = {v:.6e}, oracle {oracle:.6e}"))
}

fn layer_one_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut vectors = 0usize;
    for round in 0..500 {
        let gt = common::random_tree(&mut rng, 10, 5);
        let ft = gt.tree();
        let order = common::order_of(&ft);
        let n = order.len();
        let mut tr = Translator::new(ft);
        let depth = rng.gen_range(1..=4);
        let phi = common::random_formula(&mut rng, &gt.events(), &gt.basics, depth);
        let f = tr.translate_formula(&phi).map_err(|e| e.to_string())?;
        let table = common::truth_table(&gt, &order, &phi);
        for (m, &want) in table.iter().enumerate() {
            let got = tr.manager().eval_vector(f, &common::vector(m, n)).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("round {round}: `{phi}` at {m:b} on\n{}", gt.text))?;
            vectors += 1;
        }
    }
    Ok(format!("500 tree/formula pairs, {vectors} vectors, 0 mismatches"))
}

fn cut_and_path_sets() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for round in 0..200 {
        let gt = common::random_tree(&mut rng, 10, 5);
        let ft = gt.tree();
        let order = common::order_of(&ft);
        let top = a(&gt.top);
        let mut mcs = satisfaction_set(&ft, &top.clone().mcs()).map_err(|e| e.to_string())?;
        let mut mps = satisfaction_set(&ft, &sugar_mps(top)).map_err(|e| e.to_string())?;
        mcs.sort_by(|x, y| x.0.cmp(&y.0));
        mps.sort_by(|x, y| x.0.cmp(&y.0));
        ensure(mcs == common::minimal_cut_sets(&gt, &order), || format!("round {round}: cut sets of\n{}", gt.text))?;
        ensure(mps == common::minimal_path_sets(&gt, &order), || format!("round {round}: path sets of\n{}", gt.text))?;
    }
    Ok("200 trees, cut and path sets exact".into())
}

fn probability_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let (mut worst_sum, mut worst_poly) = (0.0f64, 0.0f64);
    for round in 0..200 {
        let gt = common::random_tree(&mut rng, 10, 5);
        let ft = gt.tree();
        let order = common::order_of(&ft);
        let n = order.len();
        let mut tr = Translator::new(ft);
        let depth = rng.gen_range(1..=4);
        let phi = common::random_formula(&mut rng, &gt.events(), &gt.basics, depth);
        let f = tr.translate_formula(&phi).map_err(|e| e.to_string())?;
        let rho: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let got = bdd_probability(tr.manager(), f, &rho).map_err(|e| e.to_string())?;
        let want = common::direct_sum(&common::truth_table(&gt, &order, &phi), &rho);
        worst_sum = worst_sum.max((got - want).abs());
        ensure((got - want).abs() <= 1e-10, || format!("round {round}: {got} vs {want} for `{phi}`"))?;
        let poly = symbolic_polynomial(tr.manager(), f).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let r: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            let (p, b) = (poly.eval(&r), bdd_probability(tr.manager(), f, &r).map_err(|e| e.to_string())?);
            worst_poly = worst_poly.max((p - b).abs());
            ensure((p - b).abs() <= 1e-12, || format!("round {round}: polynomial {p} vs {b}"))?;
        }
    }
    Ok(format!("worst |bdd - sum| = {worst_sum:.1e}, worst |poly - bdd| = {worst_poly:.1e}"))
}

fn shannon(m: &mut BddManager, table: u8, level: usize, prefix: usize) -> Bdd {
    if level == 3 {
        return m.constant(table >> prefix & 1 == 1);
    }
    let low = shannon(m, table, level + 1, prefix);
    let high = shannon(m, table, level + 1, prefix | 1 << level);
    m.node(Var::plain(level), low, high).expect("ordered")
}

fn minterms(m: &mut BddManager, table: u8) -> Result<Bdd, String> {
    let mut f = m.zero();
    for row in 0..8usize {
        if table >> row & 1 == 0 {
            continue;
        }
        let mut term = m.one();
        for i in 0..3 {
            let x = m.var(Var::plain(i)).map_err(|e| e.to_string())?;
            let lit = if row >> i & 1 == 1 { x } else { m.negate(x).map_err(|e| e.to_string())? };
            term = m.and(term, lit).map_err(|e| e.to_string())?;
        }
        f = m.or(f, term).map_err(|e| e.to_string())?;
    }
    Ok(f)
}

fn canonicity() -> Outcome {
    let mut m = BddManager::new(3);
    for table in 0..=255u8 {
        let s = shannon(&mut m, table, 0, 0);
        let f = minterms(&mut m, table)?;
        ensure(s == f, || format!("function {table:08b}: {s:?} vs {f:?}"))?;
    }
    Ok(format!("256 functions, {} nodes", m.num_nodes()))
}

fn vertex_extrema() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut done = 0;
    let mut points = 0usize;
    let mut tries = 0;
    while done < 50 {
        tries += 1;
        if tries > 5000 {
            return Err(format!("only {done} usable instances"));
        }
        let gt = common::random_tree(&mut rng, 6, 4);
        let ft = gt.tree();
        let order = common::order_of(&ft);
        let n = order.len();
        let events = gt.events();
        let phi = common::random_formula(&mut rng, &events, &gt.basics, 2);
        let cond = common::random_formula(&mut rng, &events, &gt.basics, 2);
        let joint = common::truth_table(&gt, &order, &phi.clone().and(cond.clone()));
        let given = common::truth_table(&gt, &order, &cond);
        // Dimensions either table depends on.
        let dims: Vec<usize> = (0..n)
            .filter(|&i| (0..1usize << n).any(|m| joint[m] != joint[m ^ 1 << i] || given[m] != given[m ^ 1 << i]))
            .collect();
        let d = dims.len();
        if d == 0 || d > 4 {
            continue;
        }
        let max_width = match d {
            1 | 2 => 100,
            3 => 25,
            _ => 10,
        };
        let mut bounds = vec![(0.5, 0.5); n];
        for &i in &dims {
            let w = rng.gen_range(1..=max_width);
            let l = rng.gen_range(0..=100 - w);
            bounds[i] = (l as f64 / 100.0, (l + w) as f64 / 100.0);
        }
        let named: Vec<(&str, f64, f64)> = order.iter().zip(&bounds).map(|(o, &(l, u))| (o.as_str(), l, u)).collect();
        let Some((lo, hi)) = box_extrema(&ft, &phi, Some(&cond), &named, 20).map_err(|e| e.to_string())? else {
            continue;
        };
        let steps: Vec<usize> = dims.iter().map(|&i| ((bounds[i].1 - bounds[i].0) * 100.0).round() as usize).collect();
        let total: usize = steps.iter().map(|s| s + 1).product();
        let mut rho: Vec<f64> = bounds.iter().map(|b| b.0).collect();
        let (mut gmin, mut gmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for mut k in 0..total {
            for (j, &i) in dims.iter().enumerate() {
                let s = k % (steps[j] + 1);
                k /= steps[j] + 1;
                rho[i] = (bounds[i].0 + s as f64 * 0.01).min(bounds[i].1);
            }
            let den = common::direct_sum(&given, &rho);
            if den == 0.0 {
                continue;
            }
            let v = common::direct_sum(&joint, &rho) / den;
            gmin = gmin.min(v);
            gmax = gmax.max(v);
            points += 1;
        }
        ensure(gmin >= lo - 1e-12 && gmax <= hi + 1e-12, || {
            format!("grid [{gmin}, {gmax}] outside vertex [{lo}, {hi}] for `{phi}` given `{cond}` on\n{}", gt.text)
        })?;
        done += 1;
    }
    Ok(format!("50 instances, {points} grid points, 0 violations"))
}

fn partition_soundness() -> Outcome {
    let queries: Vec<(FaultTree, Formula2)> = vec![
        (fixtures::medium_corrosion(), Formula2::pr(Cmp::Ge, 0.1, a("AcM"))),
        (fixtures::medium_corrosion(), Formula2::pr(Cmp::Ge, 0.3, a("WW").and(a("H2S").not()))),
        (fixtures::medium_corrosion(), Formula2::pr(Cmp::Le, 0.05, a("MeC")).setp("O2", 0.1)),
        (fixtures::covid_workplace(), Formula2::pr(Cmp::Ge, 0.25, a("IO"))),
        (fixtures::covid_workplace(), Formula2::pr(Cmp::Le, 0.1, a("OS"))),
        (fixtures::covid_workplace(), Formula2::pr_given(Cmp::Ge, 0.5, a("CT"), a("IT"))),
        (fixtures::gas_pipeline(), Formula2::pr(Cmp::Ge, 0.4, a("GH"))),
        (fixtures::gas_pipeline(), Formula2::pr(Cmp::Le, 0.6, a("DoP"))),
        (
            fixtures::gas_pipeline(),
            Formula2::pr(Cmp::Ge, 0.2, a("TPI")).and(Formula2::pr(Cmp::Le, 0.7, a("Exc"))),
        ),
        (fixtures::gas_pipeline(), Formula2::pr(Cmp::Ge, 0.5, a("SCC")).not()),
    ];
    let mut rng = StdRng::seed_from_u64(7);
    let mut samples = 0usize;
    for (qi, (ft, psi)) in queries.iter().enumerate() {
        for eps in [0.1, 0.05] {
            let cfg = RegionConfig::with_epsilon(eps);
            let q = RegionQuery::new(ft, psi, &cfg).map_err(|e| e.to_string())?;
            ensure(q.dims().len() <= 3, || format!("query {qi} has {} dims", q.dims().len()))?;
            let p = partition(ft, psi, &cfg).map_err(|e| e.to_string())?;
            ensure(p.vol_maybe <= eps, || format!("query {qi}: vol_maybe {} > {eps}", p.vol_maybe))?;
            let sum = p.vol_yes + p.vol_no + p.vol_maybe;
            ensure((sum - 1.0).abs() <= 1e-9, || format!("query {qi}: volumes sum to {sum}"))?;
            let l2 = Layer2::compile(ft, psi).map_err(|e| e.to_string())?;
            for (want, boxes) in [(true, &p.yes), (false, &p.no)] {
                for bx in boxes {
                    for _ in 0..100 {
                        let coords: Vec<f64> =
                            bx.lower.iter().zip(&bx.upper).map(|(&l, &u)| l + (u - l) * rng.gen::<f64>()).collect();
                        let mut rho = vec![0.5; ft.num_basic()];
                        for (&d, &x) in q.dims().iter().zip(&coords) {
                            rho[d] = x;
                        }
                        let rho = ProbVector::new(rho).map_err(|e| e.to_string())?;
                        let got = l2.check(&rho, DEFAULT_EQ_TOLERANCE).map_err(|e| e.to_string())?;
                        ensure(got == want, || format!("query {qi}: sample {coords:?} in a {want} box"))?;
                        samples += 1;
                    }
                }
            }
        }
    }
    Ok(format!("20 partitions, {samples} samples, 0 violations"))
}

fn lowered(text: &str, ft: &FaultTree) -> Result<Lowered, String> {
    let q = parse_query(text).map_err(|e| format!("{text}: {e}"))?;
    lower_query(&q, ft).map_err(|e| format!("{text}: {e}"))
}

fn table_round_trip() -> Outcome {
    let covid = fixtures::covid_workplace();
    let pipe = fixtures::gas_pipeline();
    let rows: Vec<(&str, &FaultTree, Lowered)> = vec![
        (
            "assume: computeall: MCS[MoT] and H4 and H5",
            &covid,
            Lowered::ComputeAll(a("MoT").mcs().and(a("H4")).and(a("H5"))),
        ),
        (
            "assume: setp PP = 1 check: P[IWoS] \\leq 0.03",
            &covid,
            Lowered::Check(Formula2::pr(Cmp::Le, 0.03, a("IWoS")).setp("PP", 1.0)),
        ),
        (
            "assume: setp IW = 0.25 compute: P[IWoS]",
            &covid,
            Lowered::Compute(Formula3::pr(a("IWoS")).setp("IW", 0.25)),
        ),
        (
            "assume: setp CP = 1 setp VW = 1 check: P[IWoS] \\geq 0.15",
            &covid,
            Lowered::Check(Formula2::pr(Cmp::Ge, 0.15, a("IWoS")).setp("CP", 1.0).setp("VW", 1.0)),
        ),
        (
            "computeall: MPS [Rup] and not WW and not H_2S and not O_2 and not CO_2",
            &pipe,
            Lowered::ComputeAll(
                sugar_mps(a("Rup"))
                    .and(a("WW").not())
                    .and(a("H_2S").not())
                    .and(a("O_2").not())
                    .and(a("CO_2").not()),
            ),
        ),
        (
            "assume: setp H_2S = 0.0025 setp WW = 0.02 setp PS = 0.01 compute: P[Cor]",
            &pipe,
            Lowered::Compute(Formula3::pr(a("Cor")).setp("H_2S", 0.0025).setp("WW", 0.02).setp("PS", 0.01)),
        ),
        (
            "assume: setp AcM = 0.005 setp MaD = 0.02 check: P[O/GPF] \\leq 0.012",
            &pipe,
            Lowered::Check(Formula2::pr(Cmp::Le, 0.012, a("O/GPF")).setp("AcM", 0.005).setp("MaD", 0.02)),
        ),
    ];
    for (text, ft, want) in &rows {
        let got = lowered(text, ft)?;
        ensure(&got == want, || format!("{text}\n got {got:?}\nwant {want:?}"))?;
    }
    // The row-four premise form agrees with the assignment form wherever the
    // premises hold.
    let premise = Formula2::pr(Cmp::Eq, 1.0, a("CP"))
        .and(Formula2::pr(Cmp::Eq, 1.0, a("VW")))
        .implies(Formula2::pr(Cmp::Ge, 0.15, a("IWoS")));
    let Lowered::Check(assigned) = &rows[3].2 else { unreachable!() };
    let (lp, la) = (
        Layer2::compile(&covid, &premise).map_err(|e| e.to_string())?,
        Layer2::compile(&covid, assigned).map_err(|e| e.to_string())?,
    );
    let (cp, vw) = (covid.be_index_of("CP").unwrap(), covid.be_index_of("VW").unwrap());
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..200 {
        let mut rho: Vec<f64> = (0..covid.num_basic()).map(|_| rng.gen::<f64>() * 0.6).collect();
        rho[cp] = 1.0;
        rho[vw] = 1.0;
        let rho = ProbVector::new(rho).map_err(|e| e.to_string())?;
        let (x, y) = (
            lp.check(&rho, DEFAULT_EQ_TOLERANCE).map_err(|e| e.to_string())?,
            la.check(&rho, DEFAULT_EQ_TOLERANCE).map_err(|e| e.to_string())?,
        );
        ensure(x == y, || format!("row four forms disagree at {:?}", rho.as_slice()))?;
    }
    Ok("7 rows lowered as encoded; row four agrees on its premise slice".into())
}

fn forall_desk_scale() -> Outcome {
    let cfg = RegionConfig::default();
    let and = FaultTree::parse("T and a b;").map_err(|e| e.to_string())?;
    let valid = check_forall(&and, &Formula2::pr(Cmp::Ge, 0.0, a("T")), &cfg).map_err(|e| e.to_string())?;
    ensure(valid == Forall::Valid, || format!("Pr>=0(T): {valid:?}"))?;
    let psi = Formula2::pr(Cmp::Ge, 0.5, a("a").and(a("b")));
    let Forall::Counterexample(rho) = check_forall(&and, &psi, &cfg).map_err(|e| e.to_string())? else {
        return Err("Pr>=0.5(a and b) was not refuted".into());
    };
    let holds = pfl::prob::check_layer2(&and, &psi, &rho, DEFAULT_EQ_TOLERANCE).map_err(|e| e.to_string())?;
    ensure(!holds, || format!("counterexample {:?} satisfies the formula", rho.as_slice()))?;
    let single = FaultTree::single("e");
    let eq = check_forall(&single, &Formula2::pr(Cmp::Eq, 0.5, a("e")), &cfg).map_err(|e| e.to_string())?;
    ensure(matches!(eq, Forall::Unknown { .. }), || format!("Pr=0.5(e): {eq:?}"))?;
    Ok(format!("valid, counterexample {:?}, unknown", rho.as_slice()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked medium-corrosion example", Duration::from_secs(1), worked_example),
        ("layer-one oracle equivalence", Duration::from_secs(60), layer_one_oracle),
        ("cut and path set correctness", Duration::from_secs(30), cut_and_path_sets),
        ("probability oracle equivalence", Duration::from_secs(60), probability_oracle),
        ("BDD canonicity", Duration::from_secs(5), canonicity),
        ("vertex extrema property", Duration::from_secs(60), vertex_extrema),
        ("epsilon-partition soundness", Duration::from_secs(120), partition_soundness),
        ("query language round trip", Duration::from_secs(1), table_round_trip),
        ("forall at desk scale", Duration::from_secs(10), forall_desk_scale),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed <= *limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?} ({msg})"))
            }
        });
        match result {
            Ok(msg) => println!("PASS {}: {name} [{elapsed:.2?}] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name} [{elapsed:.2?}] {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
