//! Exact kernels over labeled states: classification, powers, invariant
//! signed measures, the first-step-analysis absorption solver, and Monte Carlo.

mod simulate;

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Q;

pub use simulate::{simulate, SimulationEstimate, SimulationOptions, DEFAULT_MAX_STEPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelClass {
    /// Nonnegative entries, unit row sums.
    Stochastic,
    /// Nonnegative entries, row sums at most one.
    Substochastic,
    /// Unit row sums, some entries negative.
    Quasi,
}

impl KernelClass {
    pub fn name(self) -> &'static str {
        match self {
            KernelClass::Stochastic => "stochastic",
            KernelClass::Substochastic => "substochastic",
            KernelClass::Quasi => "quasi",
        }
    }

    pub fn has_unit_rows(self) -> bool {
        matches!(self, KernelClass::Stochastic | KernelClass::Quasi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    states: Vec<String>,
    matrix: Matrix,
    class: KernelClass,
}

impl Kernel {
    /// Assigns the first matching class out of stochastic, substochastic, quasi.
    pub fn classify<S: Into<String>>(states: Vec<S>, matrix: Matrix) -> Result<Kernel> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if !matrix.is_square() || matrix.rows() != states.len() {
            return Err(Error::Shape(format!(
                "{} states but a {}x{} matrix",
                states.len(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = states.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::DuplicateLabel(dup.clone()));
        }

        let nonneg = matrix.entries().all(|(_, _, v)| !v.is_negative());
        let sums: Vec<Q> = (0..matrix.rows()).map(|i| matrix.row_sum(i)).collect();
        let unit = sums.iter().all(One::is_one);
        let class = if nonneg && unit {
            KernelClass::Stochastic
        } else if nonneg && sums.iter().all(|s| *s <= Q::one()) {
            KernelClass::Substochastic
        } else if unit {
            KernelClass::Quasi
        } else {
            let bad = (0..sums.len())
                .find(|&i| !sums[i].is_one() && (!nonneg || sums[i] > Q::one()))
                .expect("some row violates every class");
            return Err(Error::NotAKernel {
                row: states[bad].clone(),
                sum: sums[bad].clone(),
            });
        };
        Ok(Kernel {
            states,
            matrix,
            class,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn class(&self) -> KernelClass {
        self.class
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn entry(&self, from: &str, to: &str) -> Result<&Q> {
        Ok(&self.matrix[(self.index_of(from)?, self.index_of(to)?)])
    }

    /// Entries below zero as `(row, col, value)`, in row-major order.
    pub fn negative_entries(&self) -> Vec<(String, String, Q)> {
        self.matrix
            .entries()
            .filter(|(_, _, v)| v.is_negative())
            .map(|(i, j, v)| (self.states[i].clone(), self.states[j].clone(), v.clone()))
            .collect()
    }

    /// The same kernel with states listed in `order`.
    pub fn reordered(&self, order: &[String]) -> Result<Kernel> {
        if order.len() != self.len() {
            return Err(Error::StateMismatch(format!(
                "expected {} states, got {}",
                self.len(),
                order.len()
            )));
        }
        let idx = order
            .iter()
            .map(|s| self.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel {
            states: order.to_vec(),
            matrix: self.matrix.permuted(&idx),
            class: self.class,
        })
    }

    fn is_point_mass(&self, i: usize) -> bool {
        self.matrix.row(i).iter().enumerate().all(|(j, v)| {
            if i == j {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    }
}

/// A stochastic kernel with a winning and a losing (coffin) absorbing state.
/// The coffin is always the last state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbingChain {
    kernel: Kernel,
    win: usize,
}

impl AbsorbingChain {
    pub fn new(kernel: Kernel, win: &str, coffin: &str) -> Result<AbsorbingChain> {
        if win == coffin {
            return Err(Error::WinIsCoffin(win.to_owned()));
        }
        if kernel.class != KernelClass::Stochastic {
            let bad = (0..kernel.len())
                .find(|&i| !kernel.matrix.row_sum(i).is_one())
                .unwrap_or(0);
            if let Some((row, col, value)) = kernel.negative_entries().into_iter().next() {
                return Err(Error::NegativeEntry { row, col, value });
            }
            return Err(Error::RowSum {
                row: kernel.states[bad].clone(),
                sum: kernel.matrix.row_sum(bad),
            });
        }
        kernel.index_of(win)?;
        kernel.index_of(coffin)?;
        let order: Vec<String> = kernel
            .states
            .iter()
            .filter(|s| *s != coffin)
            .cloned()
            .chain(std::iter::once(coffin.to_owned()))
            .collect();
        let kernel = kernel.reordered(&order)?;
        let win = kernel.index_of(win)?;
        let coffin_idx = kernel.len() - 1;
        for i in [win, coffin_idx] {
            if !kernel.is_point_mass(i) {
                return Err(Error::NotAbsorbing(kernel.states[i].clone()));
            }
        }
        let absorbing: Vec<usize> = (0..kernel.len()).filter(|&i| kernel.is_point_mass(i)).collect();
        let reach = backward_reachable(&kernel.matrix, &absorbing);
        if let Some(stuck) = (0..kernel.len()).find(|&i| !reach[i]) {
            return Err(Error::NoAbsorption(kernel.states[stuck].clone()));
        }
        Ok(AbsorbingChain { kernel, win })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn states(&self) -> &[String] {
        &self.kernel.states
    }

    pub fn win(&self) -> &str {
        &self.kernel.states[self.win]
    }

    pub fn win_index(&self) -> usize {
        self.win
    }

    pub fn coffin(&self) -> &str {
        self.kernel.states.last().expect("chain has a coffin")
    }

    pub fn coffin_index(&self) -> usize {
        self.kernel.len() - 1
    }

    /// States other than the coffin, in chain order.
    pub fn live_states(&self) -> &[String] {
        &self.kernel.states[..self.coffin_index()]
    }
}

/// Exact vector over states summing to one; entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMeasure {
    pub states: Vec<String>,
    pub values: Vec<Q>,
}

impl SignedMeasure {
    pub fn get(&self, label: &str) -> Option<&Q> {
        self.states
            .iter()
            .position(|s| s == label)
            .map(|i| &self.values[i])
    }

    pub fn total(&self) -> Q {
        self.values.iter().sum()
    }
}

/// Winning probabilities indexed by the non-coffin states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuinVector {
    pub states: Vec<String>,
    pub values: Vec<Q>,
}

impl RuinVector {
    pub fn get(&self, label: &str) -> Option<&Q> {
        self.states
            .iter()
            .position(|s| s == label)
            .map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Q)> {
        self.states.iter().map(String::as_str).zip(&self.values)
    }
}

/// Drops the coffin row and column, leaving a substochastic kernel on the live states.
pub fn remove_coffin(chain: &AbsorbingChain) -> Kernel {
    let n = chain.coffin_index();
    Kernel::classify(
        chain.live_states().to_vec(),
        chain.kernel.matrix.leading_block(n),
    )
    .expect("sub-block of a stochastic kernel is substochastic")
}

/// Unique `π` with `π·K = π`, `Σπ = 1`.
pub fn invariant_measure(k: &Kernel) -> Result<SignedMeasure> {
    if let Some(i) = (0..k.len()).find(|&i| !k.matrix.row_sum(i).is_one()) {
        return Err(Error::RowSum {
            row: k.states[i].clone(),
            sum: k.matrix.row_sum(i),
        });
    }
    let n = k.len();
    // (K - I)ᵀ x = 0
    let system = Matrix::from_fn(n, n, |i, j| {
        let v = k.matrix[(j, i)].clone();
        if i == j {
            v - Q::one()
        } else {
            v
        }
    });
    let basis = system.null_space();
    if basis.len() != 1 {
        return Err(Error::InvariantMeasure {
            dimension: basis.len(),
        });
    }
    let v = basis.into_iter().next().unwrap();
    let total: Q = v.iter().sum();
    if total.is_zero() {
        return Err(Error::UnnormalizableMeasure);
    }
    Ok(SignedMeasure {
        states: k.states.clone(),
        values: v.into_iter().map(|x| x / &total).collect(),
    })
}

/// First-step analysis: `ρ(e) = Σ P(e, e')ρ(e')`, `ρ(win) = 1`, `ρ(coffin) = 0`.
/// States that cannot reach `win` get 0; the rest form a nonsingular system.
pub fn absorption_oracle(chain: &AbsorbingChain) -> Result<RuinVector> {
    let p = chain.kernel.matrix();
    let win = chain.win;
    let reach = backward_reachable(p, &[win]);
    let unknowns: Vec<usize> = (0..chain.coffin_index())
        .filter(|&i| i != win && reach[i])
        .collect();
    let a = Matrix::from_fn(unknowns.len(), unknowns.len(), |r, c| {
        let v = p[(unknowns[r], unknowns[c])].clone();
        if r == c {
            Q::one() - v
        } else {
            -v
        }
    });
    let b: Vec<Q> = unknowns.iter().map(|&i| p[(i, win)].clone()).collect();
    let x = a.solve(&b).ok_or(Error::SingularSystem)?;

    let mut values = vec![Q::zero(); chain.coffin_index()];
    values[win] = Q::one();
    for (&i, v) in unknowns.iter().zip(x) {
        values[i] = v;
    }
    Ok(RuinVector {
        states: chain.live_states().to_vec(),
        values,
    })
}

pub fn matrix_power(k: &Kernel, n: u64) -> Kernel {
    Kernel::classify(k.states.clone(), k.matrix.pow(n))
        .expect("powers of a kernel stay in a kernel class")
}

/// Marks every state with a positive-probability path into `targets`.
fn backward_reachable(p: &Matrix, targets: &[usize]) -> Vec<bool> {
    let n = p.rows();
    let mut reach = vec![false; n];
    let mut queue: VecDeque<usize> = targets.iter().copied().collect();
    for &t in targets {
        reach[t] = true;
    }
    while let Some(t) = queue.pop_front() {
        for s in 0..n {
            if !reach[s] && p[(s, t)].is_positive() {
                reach[s] = true;
                queue.push_back(s);
            }
        }
    }
    reach
}
