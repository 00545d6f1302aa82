use ntu_core::circuits::max_circuit_weight;
use ntu_core::oracle::{brute_ip, BruteBudget};
use ntu_core::pipeline::{solve_equality, Status, Trace};
use ntu_core::proximity::EqualityInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Incidence matrix of a random connected digraph, last row dropped.
fn incidence(rng: &mut ChaCha8Rng, vertices: usize, edges: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; edges]; vertices];
    for e in 0..edges {
        let (a, b) = if e + 1 < vertices {
            (e + 1, rng.gen_range(0..=e))
        } else {
            let a = rng.gen_range(0..vertices);
            let mut b = rng.gen_range(0..vertices);
            while b == a {
                b = rng.gen_range(0..vertices);
            }
            (a, b)
        };
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        m[a][e] = 1;
        m[b][e] = -1;
    }
    m.pop();
    m
}

fn random_instance(rng: &mut ChaCha8Rng, k: usize, delta: i64) -> EqualityInstance {
    loop {
        let vertices = rng.gen_range(2..=4);
        let n = rng.gen_range(vertices..=6);
        let a = incidence(rng, vertices, n);
        let w: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let l: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=0)).collect();
        let u: Vec<i64> = (0..n).map(|j| l[j] + rng.gen_range(0..=3)).collect();
        let x0: Vec<i64> = (0..n).map(|j| rng.gen_range(l[j]..=u[j])).collect();
        let mul = |r: &Vec<i64>| r.iter().zip(&x0).map(|(a, b)| a * b).sum::<i64>();
        let b: Vec<i64> = a.iter().map(mul).collect();
        let mut d: Vec<i64> = w.iter().map(mul).collect();
        if rng.gen_bool(0.2) {
            d[0] += 1;
        }
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let inst = EqualityInstance::new(p, &a, b, w, d, l, u, delta).unwrap();
        if max_circuit_weight(&inst.a, &inst.w).unwrap() <= delta {
            return inst;
        }
    }
}

#[test]
fn equality_pipeline_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut trees, mut dp_nodes, mut feasible) = (0, 0, 0);
    for round in 0..120 {
        let k = 1 + round % 2;
        let delta = 1 + (round / 2) as i64 % 2;
        let inst = random_instance(&mut rng, k, delta);
        let a: Vec<Vec<i64>> = (0..inst.a.dim()).map(|i| (0..inst.n()).map(|j| inst.a.int().unwrap().get(i, j)).collect()).collect();
        let want = brute_ip(&inst.p, &a, &inst.b, inst.w.rows(), &inst.d, &inst.l, &inst.u, &BruteBudget::default()).unwrap();
        let mut trace = Trace::default();
        let got = solve_equality(&inst, &mut trace).unwrap();
        trees += trace.stats.trees;
        dp_nodes += trace.stats.dp.nodes;
        if want.value().is_some() {
            feasible += 1;
        }
        let got_value = match &got {
            Status::Optimal { value, .. } => Some(*value),
            _ => None,
        };
        assert_eq!(got_value, want.value(), "round {round}: {inst:?}");
    }
    eprintln!("trees {trees}, dp nodes {dp_nodes}, feasible {feasible}");
    assert!(trees > 20 && feasible > 60);
}
