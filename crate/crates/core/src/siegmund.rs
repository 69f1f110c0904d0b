//! Siegmund dual and antidual transforms relative to a partial order, and the
//! ruin pipeline built on them.
//!
//! With `C` the zeta matrix of the order, a kernel `P_X` and a substochastic
//! `P_Z` are Siegmund dual when `P_X · C = C · P_Zᵀ`. Going from `P_X` to
//! `P_Z = (C⁻¹ P_X C)ᵀ` needs that matrix to be nonnegative (Möbius
//! monotonicity); going back, `P_X = C P_Zᵀ C⁻¹` always has unit row sums
//! but may have negative entries.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{
    invariant_measure, remove_coffin, AbsorbingChain, Kernel, KernelClass, RuinVector,
};
use crate::matrix::Matrix;
use crate::par::Execution;
use crate::poset::Poset;
use crate::rational::Q;

/// Label given to the coffin state appended by [`dual`].
pub const COFFIN: &str = "-inf";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub power: u64,
    /// `e_i`: row of `P_Xⁿ`, up-set base on the dual side.
    pub row: String,
    /// `e_j`: down-set base on the original side, row of `P_Z'ⁿ`.
    pub col: String,
    /// `P_Xⁿ(e_i, {e_j}↓)`
    pub lhs: Q,
    /// `P_Z'ⁿ(e_j, {e_i}↑)`
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub poset: Poset,
    pub max_power_checked: u64,
    pub holds: bool,
    /// Smallest violation in `(n, i, j)` order, `i`/`j` in poset order.
    pub first_violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub monotone: bool,
    /// First negative entry `(row, col, value)` of `(C⁻¹ P_X C)ᵀ`.
    pub witness: Option<(String, String, Q)>,
}

fn aligned(k: &Kernel, poset: &Poset) -> Result<Kernel> {
    if k.len() != poset.len() || poset.elements().iter().any(|e| k.index_of(e).is_err()) {
        return Err(Error::StateMismatch(format!(
            "kernel states [{}] vs poset elements [{}]",
            k.states().join(", "),
            poset.elements().join(", ")
        )));
    }
    k.reordered(poset.elements())
}

/// `P_X = C · P_Zᵀ · C⁻¹`, in poset element order.
pub fn antidual(pz: &Kernel, poset: &Poset) -> Result<Kernel> {
    if pz.class() == KernelClass::Quasi {
        return Err(Error::InvalidArgument(
            "antidual needs a stochastic or substochastic kernel".into(),
        ));
    }
    let top = poset.unique_max()?;
    let pz = aligned(pz, poset)?;
    let top_row = pz.matrix().row(top);
    if !top_row.iter().enumerate().all(|(j, v)| {
        if j == top {
            v.is_one()
        } else {
            v.is_zero()
        }
    }) {
        return Err(Error::NotAbsorbing(poset.elements()[top].clone()));
    }
    let c = poset.zeta_matrix();
    let mu = poset.mobius_matrix();
    let px = c.matrix().mul(&pz.matrix().transpose()).mul(mu.matrix());
    let px = Kernel::classify(poset.elements().to_vec(), px)?;
    debug_assert!(px.class().has_unit_rows());
    Ok(px)
}

/// `(C⁻¹ · P_X · C)ᵀ` in poset order, without any sign check.
pub fn dual_matrix(px: &Kernel, poset: &Poset) -> Result<Matrix> {
    let px = aligned(px, poset)?;
    let c = poset.zeta_matrix();
    let mu = poset.mobius_matrix();
    Ok(mu.matrix().mul(px.matrix()).mul(c.matrix()).transpose())
}

pub fn mobius_monotonicity(px: &Kernel, poset: &Poset) -> Result<MonotonicityReport> {
    let d = dual_matrix(px, poset)?;
    let witness = d.entries().find(|(_, _, v)| v.is_negative()).map(|(i, j, v)| {
        (
            poset.elements()[i].clone(),
            poset.elements()[j].clone(),
            v.clone(),
        )
    });
    Ok(MonotonicityReport {
        monotone: witness.is_none(),
        witness,
    })
}

/// Siegmund dual of `px` with a coffin state [`COFFIN`] appended last.
///
/// `px` may be quasi (unit rows, negative entries); what matters is that the
/// dual matrix is nonnegative and substochastic.
pub fn dual(px: &Kernel, poset: &Poset) -> Result<AbsorbingChain> {
    if !px.class().has_unit_rows() {
        return Err(Error::InvalidArgument(
            "dual needs a kernel with unit row sums".into(),
        ));
    }
    if poset.index_of(COFFIN).is_ok() {
        return Err(Error::DuplicateLabel(COFFIN.into()));
    }
    let top = poset.unique_max()?;
    let d = dual_matrix(px, poset)?;
    if let Some((i, j, v)) = d.entries().find(|(_, _, v)| v.is_negative()) {
        return Err(Error::NotMobiusMonotone {
            row: poset.elements()[i].clone(),
            col: poset.elements()[j].clone(),
            value: v.clone(),
        });
    }
    let m = poset.len();
    let full = Matrix::from_fn(m + 1, m + 1, |i, j| match (i < m, j < m) {
        (true, true) => d[(i, j)].clone(),
        (true, false) => Q::one() - d.row_sum(i),
        (false, true) => Q::zero(),
        (false, false) => Q::one(),
    });
    if let Some(i) = (0..m).find(|&i| full[(i, m)].is_negative()) {
        return Err(Error::NotMobiusMonotone {
            row: poset.elements()[i].clone(),
            col: COFFIN.into(),
            value: full[(i, m)].clone(),
        });
    }
    let states: Vec<String> = poset
        .elements()
        .iter()
        .cloned()
        .chain(std::iter::once(COFFIN.to_owned()))
        .collect();
    let kernel = Kernel::classify(states, full)?;
    AbsorbingChain::new(kernel, &poset.elements()[top], COFFIN)
}

/// Checks `P_Xⁿ(e_i, {e_j}↓) = P_Z'ⁿ(e_j, {e_i}↑)` for `n = 0..=max_power`.
pub fn verify_duality(
    px: &Kernel,
    chain: &AbsorbingChain,
    poset: &Poset,
    max_power: u64,
) -> Result<DualityReport> {
    verify_duality_with(px, chain, poset, max_power, Execution::default())
}

pub fn verify_duality_with(
    px: &Kernel,
    chain: &AbsorbingChain,
    poset: &Poset,
    max_power: u64,
    exec: Execution,
) -> Result<DualityReport> {
    let px = aligned(px, poset)?;
    let live = remove_coffin(chain);
    aligned(&live, poset)?;
    let m = poset.len();
    let to_chain: Vec<usize> = poset
        .elements()
        .iter()
        .map(|e| chain.kernel().index_of(e))
        .collect::<Result<_>>()?;
    let c = poset.zeta_matrix();
    let ct = c.matrix().transpose();

    let mut x_pow = Matrix::identity(m);
    let mut z_pow = Matrix::identity(chain.states().len());
    for n in 0..=max_power {
        if n > 0 {
            x_pow = x_pow.mul_with(px.matrix(), exec);
            z_pow = z_pow.mul_with(chain.kernel().matrix(), exec);
        }
        // lhs(i, j) = Σ_{e ⪯ e_j} Xⁿ(i, e);  rhs_t(j, i) = Σ_{e_i ⪯ e, e ∈ E} Z'ⁿ(j, e)
        let lhs = x_pow.mul_with(c.matrix(), exec);
        let z_live = Matrix::from_fn(m, m, |a, b| z_pow[(to_chain[a], to_chain[b])].clone());
        let rhs_t = z_live.mul_with(&ct, exec);
        let hit = exec.position_first(m * m, |k| {
            let (i, j) = (k / m, k % m);
            lhs[(i, j)] != rhs_t[(j, i)]
        });
        if let Some(k) = hit {
            let (i, j) = (k / m, k % m);
            return Ok(DualityReport {
                poset: poset.clone(),
                max_power_checked: max_power,
                holds: false,
                first_violation: Some(Violation {
                    power: n,
                    row: poset.elements()[i].clone(),
                    col: poset.elements()[j].clone(),
                    lhs: lhs[(i, j)].clone(),
                    rhs: rhs_t[(j, i)].clone(),
                }),
            });
        }
    }
    Ok(DualityReport {
        poset: poset.clone(),
        max_power_checked: max_power,
        holds: true,
        first_violation: None,
    })
}

/// Winning probabilities through the antidual:
/// remove the coffin, form `P_X`, take its invariant signed measure `π`,
/// and sum `π` over each principal down-set.
pub fn ruin_via_duality(chain: &AbsorbingChain, poset: &Poset) -> Result<RuinVector> {
    let top = poset.unique_max()?;
    if chain.win() != poset.elements()[top] {
        return Err(Error::StateMismatch(format!(
            "chain wins at `{}` but the poset maximum is `{}`",
            chain.win(),
            poset.elements()[top]
        )));
    }
    let pz = remove_coffin(chain);
    let px = antidual(&pz, poset)?;
    let pi = invariant_measure(&px)?;
    let mut values = Vec::with_capacity(chain.live_states().len());
    for state in chain.live_states() {
        let e = poset.index_of(state)?;
        let rho: Q = (0..poset.len())
            .filter(|&x| poset.leq(x, e))
            .map(|x| &pi.values[x])
            .sum();
        if rho.is_negative() || rho > Q::one() {
            return Err(Error::OutOfRange {
                state: state.clone(),
                value: rho,
            });
        }
        values.push(rho);
    }
    Ok(RuinVector {
        states: chain.live_states().to_vec(),
        values,
    })
}
