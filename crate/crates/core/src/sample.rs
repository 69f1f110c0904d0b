//! Seeded pseudo-random inputs for validation sweeps and benchmarks.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gambler::GamblerSpec;
use crate::kernel::Kernel;
use crate::matrix::Matrix;
use crate::poset::{lattice_tuples, Poset};
use crate::rational::{int, q, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A feasible spec with small-denominator rational tables.
///
/// Coordinate `j` gets a share `b_j` of the unit move budget and interior
/// probabilities `p = b_j·a/6`, `q = b_j·c/6` with `a, c ≥ 1`, `a + c ≤ 6`,
/// so `Σ_k (p_k + q_k) ≤ 1` holds at every state.
pub fn random_spec(rng: &mut impl Rng, capitals: &[usize]) -> GamblerSpec {
    let weights: Vec<i64> = capitals.iter().map(|_| rng.random_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    let mut p = Vec::with_capacity(capitals.len());
    let mut qq = Vec::with_capacity(capitals.len());
    for (&n, &w) in capitals.iter().zip(&weights) {
        let share = q(w, total);
        let (mut pj, mut qj) = (Vec::new(), Vec::new());
        for _ in 1..n {
            let a = rng.random_range(1..=5);
            let c = rng.random_range(1..=6 - a);
            pj.push(&share * q(a, 6));
            qj.push(&share * q(c, 6));
        }
        p.push(pj);
        qq.push(qj);
    }
    GamblerSpec::new(capitals.to_vec(), p, qq).expect("generated spec is well formed")
}

/// Every shape `N ∈ {2,3,4}^d` for `d ∈ {1,2,3}`, `per_shape` random specs each.
pub fn acceptance_grid(seed: u64, per_shape: usize) -> Vec<GamblerSpec> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for d in 1..=3 {
        for shape in lattice_tuples(&vec![3; d]) {
            let capitals: Vec<usize> = shape.iter().map(|i| i + 1).collect();
            for _ in 0..per_shape {
                out.push(random_spec(&mut rng, &capitals));
            }
        }
    }
    out
}

/// A random poset on `m ≥ 1` elements with a unique maximal element.
pub fn random_poset(rng: &mut impl Rng, m: usize) -> Poset {
    assert!(m >= 1);
    let labels: Vec<String> = (0..m).map(|i| format!("e{i}")).collect();
    let top = m - 1;
    let mut covers = Vec::new();
    let mut has_succ = vec![false; m];
    for i in 0..top {
        for j in i + 1..top {
            if rng.random_bool(0.3) {
                covers.push((labels[i].clone(), labels[j].clone()));
                has_succ[i] = true;
            }
        }
    }
    for i in 0..top {
        if !has_succ[i] || rng.random_bool(0.2) {
            covers.push((labels[i].clone(), labels[top].clone()));
        }
    }
    let mut shuffled = labels;
    shuffled.shuffle(rng);
    Poset::from_covers(&shuffled, &covers).expect("acyclic by construction")
}

/// A random substochastic kernel on the poset elements whose maximum is absorbing.
pub fn random_substochastic(rng: &mut impl Rng, poset: &Poset) -> Kernel {
    let m = poset.len();
    let top = poset.unique_max().expect("poset has a unique maximum");
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        if i == top {
            k[(i, i)] = Q::from_integer(1.into());
            continue;
        }
        let weights: Vec<i64> = (0..m).map(|_| rng.random_range(0..=3)).collect();
        let deficit: i64 = rng.random_range(0..=3);
        let total: i64 = weights.iter().sum::<i64>() + deficit;
        if total == 0 {
            k[(i, i)] = int(1);
            continue;
        }
        for (j, &w) in weights.iter().enumerate() {
            if w > 0 {
                k[(i, j)] = q(w, total);
            }
        }
    }
    debug_assert!(k.entries().all(|(_, _, v)| *v >= Q::zero()));
    Kernel::classify(poset.elements().to_vec(), k).expect("substochastic by construction")
}
