use qttkit::algebra::{add_tt, mpo_apply, add_tt_matrix};
use qttkit::decompose::{tt_round, tt_round_matrix, TruncationPolicy};
use qttkit::dynamics::*;
use qttkit::tensor::{Shape, TtMatrix, TtTensor};

fn main() {
    let text = std::fs::read_to_string("data/models/cascade_d5.txt").unwrap();
    let net = ReactionNetwork::parse(&text).unwrap();
    let shape = net.state_shape().unwrap();
    let y0 = TtTensor::unit(&shape, &vec![0; 5]).unwrap();
    eprintln!("parsing done");
    let a_species = cme_assemble(&net).unwrap();
    eprintln!("assembled: bonds {:?}", a_species.bond_ranks());
    let a = a_species.quantize(2).unwrap();
    eprintln!("quantized: bonds {:?}", a.bond_ranks());
    let a = tt_round_matrix(&a, &TruncationPolicy::with_epsilon(1e-13)).unwrap();
    println!("A bonds: {:?}", a.bond_ranks());
    let mut h = a.clone();
    h.scale(-1.0);

    let nt = 32usize;
    let tau = 15.0 / nt as f64;
    let id = TtMatrix::identity(a.col_shape());
    let mut hp = h.clone(); hp.scale(tau / 2.0);
    let m_solve = tt_round_matrix(&add_tt_matrix(&id, &hp).unwrap(), &TruncationPolicy::with_epsilon(1e-13)).unwrap();
    let mut hm = h.clone(); hm.scale(-tau / 2.0);
    let m_rhs = tt_round_matrix(&add_tt_matrix(&id, &hm).unwrap(), &TruncationPolicy::with_epsilon(1e-13)).unwrap();

    let solver = SolveOptions { tol: 1e-9, max_sweeps: 30, kick_rank: 2, max_rank: 40, galerkin: true };
    let mut y = quantize_state(&y0).unwrap();
    let mut slices: Vec<TtTensor> = Vec::new();
    let t0 = std::time::Instant::now();
    for k in 0..nt {
        let rhs = tt_round(&mpo_apply(&m_rhs, &y).unwrap(), &TruncationPolicy::with_epsilon(1e-12)).unwrap();
        let (ynew, rep) = tt_linsolve_with_guess(&m_solve, &rhs, Some(&y), &solver).unwrap();
        y = tt_round(&ynew, &TruncationPolicy::with_epsilon(1e-10)).unwrap();
        if k % 8 == 0 || k == nt - 1 {
            println!("step {k}: spatial rank {} residual {:.2e}", y.max_bond_rank(), rep.residual);
        }
        slices.push(y.clone());
    }
    println!("sequential stepping: {:.1}s", t0.elapsed().as_secs_f64());
    let mass = qttkit::algebra::scalar_product_tt(&y, &TtTensor::ones(y.shape())).unwrap();
    println!("mass at T0: {:.9}", mass);

    // Stack slices into the (x,t) tensor: sum of slice ⊗ e_k.
    let mut acc: Option<TtTensor> = None;
    for (k, s) in slices.iter().enumerate() {
        let digits: Vec<Vec<f64>> = (0..5).map(|p| {
            let mut v = vec![0.0, 0.0];
            v[(k >> p) & 1] = 1.0;
            v
        }).collect();
        let e_k = TtTensor::rank_one(&digits).unwrap();
        let term = s.tensor_product(&e_k);
        acc = Some(match acc {
            None => term,
            Some(prev) => tt_round(&add_tt(&prev, &term).unwrap(), &TruncationPolicy::with_epsilon(1e-9)).unwrap(),
        });
    }
    let xt = acc.unwrap();
    for eps in [1e-5f64, 1e-6, 1e-7] {
        let r = tt_round(&xt, &TruncationPolicy::with_epsilon(eps)).unwrap();
        println!("(x,t) tensor at eps={eps:.0e}: max rank {} bonds {:?}", r.max_bond_rank(), r.bond_ranks());
    }
    let _ = Shape::new(vec![2]).unwrap();
}
