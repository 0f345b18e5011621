//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line per
//! criterion; run with `--nocapture` to see them.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use cliquenet::analysis::{
    check_multiplicity, diameter, empirical_digraph, neighbourhood, network_diameter,
    predicted_diameter, random_configuration, semantic_digraph, verify_decides_k_parity,
    verify_synchronises, Mode, VerifyOptions,
};
use cliquenet::builder::{build_ct, extend_even, make_plan, project, to_synchroniser, PlanShape};
use cliquenet::engine::{convergence_time, find_limit, simulate, Classification};
use cliquenet::network::{Configuration, Dynamics, NetworkSpec, TruthTableNetwork};
use cliquenet::render::{flatten, render_pgm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    println!(
        "[{}] criterion {id}: {name} ({:.1} ms) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64() * 1e3
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn cfg(s: &str) -> Configuration {
    Configuration::parse(s, 2).unwrap()
}

fn shapes() -> Vec<PlanShape> {
    let mut v = vec![PlanShape::Line, PlanShape::Star];
    v.extend((1..=5).map(PlanShape::Random));
    v
}

/// Every network named by criterion 2: k=2 with n in {3,5,7,9,11}, k=3 with
/// n in {4,7,10}, k=4 with n in {5,9}; Line, Star and five random seeds each.
fn criterion_two_networks() -> Vec<NetworkSpec> {
    let sizes: [(usize, &[usize]); 3] = [(2, &[3, 5, 7, 9, 11]), (3, &[4, 7, 10]), (4, &[5, 9])];
    let mut out = Vec::new();
    for (k, ns) in sizes {
        for &n in ns {
            for shape in shapes() {
                let plan = make_plan(k, (n - 1) / k, shape).unwrap();
                out.push(build_ct(&plan).unwrap());
            }
        }
    }
    out
}

fn small_maps_hold(parity: &NetworkSpec, sync: &NetworkSpec) -> bool {
    let expected = [
        ("000", "000"),
        ("001", "111"),
        ("010", "111"),
        ("011", "000"),
        ("100", "111"),
        ("101", "000"),
        ("110", "000"),
        ("111", "111"),
    ];
    let mut ok = expected
        .iter()
        .all(|(x, y)| parity.step(&cfg(x)).unwrap() == cfg(y));
    for idx in 0..8 {
        let x = Configuration::from_index(idx, 3, 2);
        let r = find_limit(sync, &x, 4).unwrap();
        let cycle: Vec<String> = r.cycle.iter().map(|c| c.format(2)).collect();
        ok &= r.transient_length <= 1
            && r.cycle_length == 2
            && cycle.contains(&"000".to_string())
            && cycle.contains(&"111".to_string());
    }
    ok &= sync.step(&cfg("000")).unwrap() == cfg("111") && sync.step(&cfg("111")).unwrap() == cfg("000");
    ok
}

#[test]
fn c01_small_dynamics_match_reference_maps() {
    let parity = build_ct(&make_plan(2, 1, PlanShape::Line).unwrap()).unwrap();
    let sync = to_synchroniser(&parity).unwrap();
    // Best of five runs, so scheduler noise from parallel tests does not count.
    let mut ok = true;
    let mut elapsed = Duration::MAX;
    for _ in 0..5 {
        let start = Instant::now();
        ok &= small_maps_hold(&parity, &sync);
        elapsed = elapsed.min(start.elapsed());
    }
    verdict(
        1,
        "three-automaton parity and sync maps",
        ok && elapsed < Duration::from_millis(1),
        elapsed,
        "limit < 1 ms",
    );
}

#[test]
fn c02_parity_exhaustive() {
    let opts = VerifyOptions::default();
    let nets = criterion_two_networks();
    let start = Instant::now();
    let mut ok = true;
    let mut total = 0;
    for net in &nets {
        let d = network_diameter(net).unwrap();
        let r = verify_decides_k_parity(net, Mode::Exhaustive, &opts).unwrap();
        ok &= r.pass && r.max_transient_observed <= d;
        ok &= r.configs_checked == (net.k() as u64).pow(net.n() as u32);
        total += r.configs_checked;
    }
    let elapsed = start.elapsed();
    verdict(
        2,
        "k-parity decided exhaustively within the diameter",
        ok && elapsed < Duration::from_secs(10),
        elapsed,
        &format!("{} networks, {total} configurations, limit < 10 s", nets.len()),
    );
}

#[test]
fn c03_sync_exhaustive() {
    let opts = VerifyOptions::default();
    let start = Instant::now();
    let mut ok = true;
    let mut count = 0;
    for net in criterion_two_networks() {
        let s = to_synchroniser(&net).unwrap();
        let r = verify_synchronises(&s, Mode::Exhaustive, &opts).unwrap();
        ok &= r.pass;
        // The cycle from 0^n is exactly 0^n, 1^n, .., (k-1)^n.
        let lim = find_limit(&s, &Configuration::uniform(0, s.n()), 2 * s.k()).unwrap();
        let expected: Vec<Configuration> = (0..s.k())
            .map(|v| Configuration::uniform(v as u8, s.n()))
            .collect();
        ok &= lim.cycle == expected;
        count += 1;
    }
    let three = build_ct(&make_plan(2, 1, PlanShape::Line).unwrap()).unwrap();
    let even = extend_even(&to_synchroniser(&three).unwrap(), 0).unwrap();
    let r = verify_synchronises(&even, Mode::Exhaustive, &opts).unwrap();
    ok &= r.pass && r.configs_checked == 16;
    let elapsed = start.elapsed();
    verdict(
        3,
        "synchronisers cycle through uniform configurations in order",
        ok,
        elapsed,
        &format!("{count} synchronisers + size-4 extension"),
    );
}

#[test]
fn c04_line_diameter_formula() {
    let start = Instant::now();
    let mut ok = true;
    for k in 2..=5 {
        for c in 1..=20 {
            let net = build_ct(&make_plan(k, c, PlanShape::Line).unwrap()).unwrap();
            let d = diameter(&semantic_digraph(&net)).unwrap();
            ok &= d == (net.n() - 1) / k && d == c && predicted_diameter(k, net.n()).unwrap() == d;
        }
    }
    ok &= predicted_diameter(2, 289).unwrap() == 144;
    ok &= predicted_diameter(3, 289).unwrap() == 96;
    ok &= predicted_diameter(4, 289).unwrap() == 72;
    let elapsed = start.elapsed();
    verdict(
        4,
        "line diameter equals (n-1)/k",
        ok && elapsed < Duration::from_secs(5),
        elapsed,
        "k in 2..=5, cliques in 1..=20; 289 -> 144/96/72; limit < 5 s",
    );
}

#[test]
fn c05_full_size_runs() {
    let line2 = build_ct(&make_plan(2, 144, PlanShape::Line).unwrap()).unwrap();
    let sync2 = to_synchroniser(&line2).unwrap();
    let fast = project(&build_ct(&make_plan(4, 72, PlanShape::Line).unwrap()).unwrap(), 2).unwrap();
    let start = Instant::now();
    let x0 = Configuration::single(289, 0, 1).unwrap();

    let traj = simulate(&line2, &x0, 144).unwrap();
    let mut ok = traj.last() == &Configuration::uniform(1, 289);
    ok &= convergence_time(&line2, &x0, 144).unwrap() == 144;

    let lim = find_limit(&sync2, &x0, 144 + 3).unwrap();
    ok &= lim.transient_length <= 144 && lim.cycle_length == 2 && lim.is_increasing_uniform_cycle(2);

    ok &= convergence_time(&fast, &x0, 72).unwrap() == 72;
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_configuration(&mut rng, 289, 2);
        let r = find_limit(&fast, &x, 72 + 3).unwrap();
        ok &= r.transient_length <= 72
            && r.classification
                == Classification::UniformFixedPoint(cliquenet::reference_k_parity(&x, 2));
    }
    let elapsed = start.elapsed();
    verdict(
        5,
        "size-289 parity/sync/projected runs",
        ok && elapsed < Duration::from_secs(2),
        elapsed,
        "144 exact, sync by 144, projected <= 72 on 200 seeds; limit < 2 s",
    );
}

#[test]
fn c06_radius_claim_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let start = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    for _ in 0..500 {
        let k = [2, 3, 4][rng.gen_range(0..3)];
        let cliques = rng.gen_range(1..=10);
        let shape = match rng.gen_range(0..3) {
            0 => PlanShape::Line,
            1 => PlanShape::Star,
            _ => PlanShape::Random(rng.gen()),
        };
        let net = build_ct(&make_plan(k, cliques, shape).unwrap()).unwrap();
        let g = semantic_digraph(&net);
        let d = diameter(&g).unwrap();
        let x = random_configuration(&mut rng, net.n(), k);
        let r = rng.gen_range(0..=d);
        let y = simulate(&net, &x, r).unwrap();
        for i in 0..net.n() {
            let ball = neighbourhood(&g, i, r).unwrap();
            let sum: usize = ball.iter().map(|&j| x.symbols()[j] as usize).sum();
            ok &= y.last().symbols()[i] as usize == sum % k;
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    verdict(
        6,
        "after r steps each automaton holds the sum over its radius-r ball",
        ok,
        elapsed,
        &format!("{checked} (network, x, r) triples, exact"),
    );
}

#[test]
fn c07_multiplicity() {
    let start = Instant::now();
    let mut ok = true;
    for net in criterion_two_networks() {
        ok &= check_multiplicity(&semantic_digraph(&net), net.k()).unwrap().is_none();
    }
    let elapsed = start.elapsed();
    verdict(7, "multiplicity is 1 mod k", ok, elapsed, "all criterion-2 networks");
}

fn example_one() -> TruthTableNetwork {
    // f0 = !x1 | x2, f1 = x0, f2 = x1 (0-based)
    TruthTableNetwork::from_fn(2, vec![vec![1, 2], vec![0], vec![1]], |i, v| match i {
        0 => ((v[0] == 0) || (v[1] == 1)) as u8,
        _ => v[0],
    })
    .unwrap()
}

#[test]
fn c08_digraph_consistency() {
    let start = Instant::now();
    let mut ok = true;
    let mut compared = 0;
    for net in criterion_two_networks() {
        if net.n() <= 9 && net.k() <= 3 {
            ok &= empirical_digraph(&net).unwrap() == semantic_digraph(&net);
            compared += 1;
        }
    }
    let fixture = example_one();
    let g = empirical_digraph(&fixture).unwrap();
    ok &= g.edges().collect::<Vec<_>>() == vec![(0, 1), (1, 0), (1, 2), (2, 0)];

    // Attractors by exhaustive enumeration.
    let mut attractors: Vec<Vec<String>> = Vec::new();
    for idx in 0..8 {
        let r = find_limit(&fixture, &Configuration::from_index(idx, 3, 2), 16).unwrap();
        let mut cycle: Vec<String> = r.cycle.iter().map(|c| c.format(2)).collect();
        cycle.sort();
        if !attractors.contains(&cycle) {
            attractors.push(cycle);
        }
    }
    attractors.sort();
    ok &= attractors == vec![vec!["011", "101", "110"], vec!["111"]];
    let three = find_limit(&fixture, &cfg("110"), 8).unwrap();
    ok &= three.cycle == vec![cfg("110"), cfg("011"), cfg("101")];
    let elapsed = start.elapsed();
    verdict(
        8,
        "empirical and semantic digraphs agree; non-linear fixture",
        ok,
        elapsed,
        &format!("{compared} networks compared"),
    );
}

#[test]
fn c09_projection_exhaustive() {
    let opts = VerifyOptions::default();
    let start = Instant::now();
    let a = project(&build_ct(&make_plan(4, 2, PlanShape::Line).unwrap()).unwrap(), 2).unwrap();
    let ra = verify_decides_k_parity(&a, Mode::Exhaustive, &opts).unwrap();
    let b = project(&build_ct(&make_plan(6, 1, PlanShape::Line).unwrap()).unwrap(), 3).unwrap();
    let rb = verify_decides_k_parity(&b, Mode::Exhaustive, &opts).unwrap();
    let ok = ra.pass
        && ra.configs_checked == 512
        && ra.max_transient_observed <= 2
        && rb.pass
        && rb.configs_checked == 2187
        && rb.max_transient_observed <= 1;
    let elapsed = start.elapsed();
    verdict(
        9,
        "projected networks decide on the smaller alphabet",
        ok,
        elapsed,
        &format!(
            "4->2 n=9: {} configs, max transient {}; 6->3 n=7: {} configs, max transient {}",
            ra.configs_checked, ra.max_transient_observed, rb.configs_checked, rb.max_transient_observed
        ),
    );
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Line network, random initial configuration from seed 7, run for one
/// diameter, rendered with the plan's flatten order.
fn scenario(k: usize, cliques: usize, project_to: Option<usize>) -> Vec<u8> {
    let mut net = build_ct(&make_plan(k, cliques, PlanShape::Line).unwrap()).unwrap();
    if let Some(t) = project_to {
        net = project(&net, t).unwrap();
    }
    let d = network_diameter(&net).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x0 = random_configuration(&mut rng, net.n(), net.alphabet());
    let traj = simulate(&net, &x0, d).unwrap();
    render_pgm(&traj, &flatten(net.plan().unwrap())).unwrap()
}

#[test]
fn c10_rendering_goldens() {
    let cases = [
        ("parity_k2_n289.pgm", scenario(2, 144, None), 145),
        ("parity_k3_n289.pgm", scenario(3, 96, None), 97),
        ("parity_k4to2_n289.pgm", scenario(4, 72, Some(2)), 73),
    ];
    let start = Instant::now();
    let bless = std::env::var_os("CLIQUENET_BLESS").is_some();
    let mut ok = true;
    let mut details = Vec::new();
    for (name, img, rows) in &cases {
        let path = golden_dir().join(name);
        if bless {
            std::fs::write(&path, img).unwrap();
        }
        let golden = std::fs::read(&path).unwrap_or_default();
        let header = format!("P5\n289 {rows}\n255\n");
        let last = &img[img.len() - 289..];
        let same = &golden == img;
        let dims = img.starts_with(header.as_bytes()) && img.len() == header.len() + 289 * rows;
        let uniform = last.iter().all(|&p| p == last[0]);
        ok &= same && dims && uniform;
        details.push(format!("{name}: golden={same} 289x{rows}={dims} uniform-last-row={uniform}"));
    }
    verdict(10, "space-time images match goldens", ok, start.elapsed(), &details.join("; "));
}
