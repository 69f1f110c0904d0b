//! The generalized gambler's ruin game against `d` opponents.
//!
//! State `(i_1..i_d)` holds our fortune against each opponent, `1 ≤ i_j ≤ N_j`.
//! Against opponent `j` we win a dollar with probability `p_j(i_j)`, lose one
//! with `q_j(i_j)`, otherwise nothing happens. Dropping to zero against anyone
//! loses the game (coffin); reaching `(N_1..N_d)` wins it.
//!
//! Tables are given for interior fortunes `1..N_j - 1`; `p_j` and `q_j` are
//! zero at `0` and `N_j` by convention and that is never stored.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{AbsorbingChain, Kernel, RuinVector, SignedMeasure};
use crate::matrix::Matrix;
use crate::poset::{lattice_tuples, tuple_label};
use crate::rational::{int, Q};
use crate::siegmund::COFFIN;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GamblerSpec {
    capitals: Vec<usize>,
    p: Vec<Vec<Q>>,
    q: Vec<Vec<Q>>,
}

impl GamblerSpec {
    /// Checks shapes and strict positivity of the interior tables. Feasibility
    /// of the total move probability is checked by [`GamblerSpec::check_feasible`].
    pub fn new(capitals: Vec<usize>, p: Vec<Vec<Q>>, q: Vec<Vec<Q>>) -> Result<Self> {
        let d = capitals.len();
        if d == 0 {
            return Err(Error::InvalidSpec("need at least one opponent".into()));
        }
        if p.len() != d || q.len() != d {
            return Err(Error::InvalidSpec(format!(
                "{d} capitals but {} p tables and {} q tables",
                p.len(),
                q.len()
            )));
        }
        for j in 0..d {
            let n = capitals[j];
            if n < 1 {
                return Err(Error::InvalidSpec(format!("N[{j}] must be at least 1")));
            }
            for (name, table) in [("p", &p[j]), ("q", &q[j])] {
                if table.len() != n - 1 {
                    return Err(Error::InvalidSpec(format!(
                        "{name}[{j}] has {} entries, expected N[{j}] - 1 = {}",
                        table.len(),
                        n - 1
                    )));
                }
                if let Some(i) = table.iter().position(|v| *v <= Q::zero()) {
                    return Err(Error::InvalidSpec(format!(
                        "{name}[{j}] at fortune {} is {}, must be positive",
                        i + 1,
                        table[i]
                    )));
                }
            }
        }
        Ok(GamblerSpec { capitals, p, q })
    }

    /// Same `p_j`, `q_j` at every interior fortune of coordinate `j`.
    pub fn homogeneous(capitals: Vec<usize>, p: Vec<Q>, q: Vec<Q>) -> Result<Self> {
        if p.len() != capitals.len() || q.len() != capitals.len() {
            return Err(Error::InvalidSpec("one p and one q per coordinate".into()));
        }
        let expand = |vals: Vec<Q>| -> Vec<Vec<Q>> {
            vals.into_iter()
                .zip(&capitals)
                .map(|(v, &n)| vec![v; n.saturating_sub(1)])
                .collect()
        };
        let (p, q) = (expand(p), expand(q));
        GamblerSpec::new(capitals, p, q)
    }

    pub fn dimension(&self) -> usize {
        self.capitals.len()
    }

    pub fn capitals(&self) -> &[usize] {
        &self.capitals
    }

    pub fn p_table(&self, j: usize) -> &[Q] {
        &self.p[j]
    }

    pub fn q_table(&self, j: usize) -> &[Q] {
        &self.q[j]
    }

    /// `p_j(i)`, zero at the boundary fortunes.
    pub fn p(&self, j: usize, i: usize) -> Q {
        boundary(&self.p[j], i)
    }

    /// `q_j(i)`, zero at the boundary fortunes.
    pub fn q(&self, j: usize, i: usize) -> Q {
        boundary(&self.q[j], i)
    }

    /// Lattice states, first coordinate slowest.
    pub fn states(&self) -> Vec<Vec<usize>> {
        lattice_tuples(&self.capitals)
    }

    pub fn state_count(&self) -> usize {
        self.capitals.iter().product()
    }

    pub fn index_of(&self, state: &[usize]) -> Result<usize> {
        self.check_state(state)?;
        let mut idx = 0;
        for (&i, &n) in state.iter().zip(&self.capitals) {
            idx = idx * n + (i - 1);
        }
        Ok(idx)
    }

    fn check_state(&self, state: &[usize]) -> Result<()> {
        if state.len() != self.dimension()
            || state
                .iter()
                .zip(&self.capitals)
                .any(|(&i, &n)| i < 1 || i > n)
        {
            return Err(Error::StateOutOfRange(tuple_label(state)));
        }
        Ok(())
    }

    /// `Σ_k (p_k(i_k) + q_k(i_k)) ≤ 1` at every lattice state.
    pub fn check_feasible(&self) -> Result<()> {
        for state in self.states() {
            let total: Q = state
                .iter()
                .enumerate()
                .map(|(j, &i)| self.p(j, i) + self.q(j, i))
                .sum();
            if total > Q::one() {
                return Err(Error::Infeasible {
                    state: tuple_label(&state),
                    total,
                });
            }
        }
        Ok(())
    }

    /// `Π_{r < i} q_j(r) / p_j(r)`.
    fn weight(&self, j: usize, i: usize) -> Q {
        (1..i).fold(Q::one(), |acc, r| acc * &self.q[j][r - 1] / &self.p[j][r - 1])
    }

    /// `Σ_{n=1}^{i} Π_{r<n} q_j(r)/p_j(r)`.
    fn partial_sum(&self, j: usize, i: usize) -> Q {
        let mut w = Q::one();
        let mut sum = Q::zero();
        for n in 1..=i {
            if n > 1 {
                w = w * &self.q[j][n - 2] / &self.p[j][n - 2];
            }
            sum += &w;
        }
        sum
    }
}

fn boundary(table: &[Q], i: usize) -> Q {
    if i == 0 {
        Q::zero()
    } else {
        table.get(i - 1).cloned().unwrap_or_else(Q::zero)
    }
}

/// The absorbing chain of the game: lattice states in lexicographic order,
/// then the coffin.
pub fn build_chain(spec: &GamblerSpec) -> Result<AbsorbingChain> {
    spec.check_feasible()?;
    let states = spec.states();
    let m = states.len();
    let d = spec.dimension();
    let mut p = Matrix::zeros(m + 1, m + 1);
    for (idx, state) in states.iter().enumerate() {
        let mut moved = Q::zero();
        for j in 0..d {
            let i = state[j];
            let (up, down) = (spec.p(j, i), spec.q(j, i));
            if !up.is_zero() {
                let mut next = state.clone();
                next[j] += 1;
                p[(idx, spec.index_of(&next)?)] += &up;
            }
            if !down.is_zero() {
                if i == 1 {
                    p[(idx, m)] += &down;
                } else {
                    let mut next = state.clone();
                    next[j] -= 1;
                    p[(idx, spec.index_of(&next)?)] += &down;
                }
            }
            moved += up + down;
        }
        p[(idx, idx)] += Q::one() - moved;
    }
    p[(m, m)] = Q::one();
    let labels: Vec<String> = states
        .iter()
        .map(|s| tuple_label(s))
        .chain(std::iter::once(COFFIN.to_owned()))
        .collect();
    let win = tuple_label(spec.capitals());
    AbsorbingChain::new(Kernel::classify(labels, p)?, &win, COFFIN)
}

/// Product-form winning probability from `state`.
pub fn ruin_closed_form(spec: &GamblerSpec, state: &[usize]) -> Result<Q> {
    spec.check_state(state)?;
    Ok((0..spec.dimension())
        .map(|j| coordinate_ruin(spec, j, state[j]))
        .product())
}

/// Winning probability when every coordinate but `j` is already at its capital:
/// `S_j(i) / S_j(N_j)` with `S_j` the partial sums of ratio products.
pub fn coordinate_ruin(spec: &GamblerSpec, j: usize, i: usize) -> Q {
    spec.partial_sum(j, i) / spec.partial_sum(j, spec.capitals[j])
}

/// [`ruin_closed_form`] at every lattice state.
pub fn closed_form_vector(spec: &GamblerSpec) -> RuinVector {
    let states = spec.states();
    RuinVector {
        values: states
            .iter()
            .map(|s| ruin_closed_form(spec, s).expect("lattice state"))
            .collect(),
        states: states.iter().map(|s| tuple_label(s)).collect(),
    }
}

/// The antidual kernel in closed form: from `(i)`, move up in coordinate `j`
/// with `q_j(i_j)`, down with `p_j(i_j - 1)`, hold with the complement
/// `1 - Σ_k (p_k(i_k - 1) + q_k(i_k))`, which can be negative.
pub fn antidual_closed_form(spec: &GamblerSpec) -> Kernel {
    let states = spec.states();
    let m = states.len();
    let mut px = Matrix::zeros(m, m);
    for (idx, state) in states.iter().enumerate() {
        let mut moved = Q::zero();
        for (j, &i) in state.iter().enumerate() {
            let up = spec.q(j, i);
            let down = spec.p(j, i - 1);
            if i < spec.capitals[j] {
                let mut next = state.clone();
                next[j] += 1;
                px[(idx, spec.index_of(&next).expect("in lattice"))] = up.clone();
            }
            if i > 1 {
                let mut next = state.clone();
                next[j] -= 1;
                px[(idx, spec.index_of(&next).expect("in lattice"))] = down.clone();
            }
            moved += up + down;
        }
        px[(idx, idx)] = Q::one() - moved;
    }
    Kernel::classify(states.iter().map(|s| tuple_label(s)).collect(), px)
        .expect("unit row sums by construction")
}

/// Product-form invariant measure of the closed network with `d` independent
/// servers: `π(i) ∝ Π_j Π_{r < i_j} q_j(r) / p_j(r)`.
pub fn network_stationary(spec: &GamblerSpec) -> SignedMeasure {
    let states = spec.states();
    let norm: Q = (0..spec.dimension())
        .map(|j| spec.partial_sum(j, spec.capitals[j]))
        .product();
    SignedMeasure {
        values: states
            .iter()
            .map(|s| {
                let w: Q = s.iter().enumerate().map(|(j, &i)| spec.weight(j, i)).product();
                w / &norm
            })
            .collect(),
        states: states.iter().map(|s| tuple_label(s)).collect(),
    }
}

/// Winning probability for coordinate-wise constant tables:
/// `Π_j (1 - r_j^{i_j}) / (1 - r_j^{N_j})` with `r_j = q_j / p_j`, replaced by
/// `i_j / N_j` for coordinates where `p_j = q_j`.
pub fn homogeneous_ruin(spec: &GamblerSpec, state: &[usize]) -> Result<Q> {
    spec.check_state(state)?;
    let mut out = Q::one();
    for (j, &i) in state.iter().enumerate() {
        let (p, q) = (spec.p_table(j), spec.q_table(j));
        if p.iter().any(|v| *v != p[0]) || q.iter().any(|v| *v != q[0]) {
            return Err(Error::NotHomogeneous(j));
        }
        let n = spec.capitals[j];
        if n == 1 {
            continue;
        }
        let factor = if p[0] == q[0] {
            int(i as i64) / int(n as i64)
        } else {
            let r = &q[0] / &p[0];
            (Q::one() - power(&r, i)) / (Q::one() - power(&r, n))
        };
        out *= factor;
    }
    Ok(out)
}

fn power(base: &Q, exp: usize) -> Q {
    (0..exp).fold(Q::one(), |acc, _| acc * base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{absorption_oracle, remove_coffin, KernelClass};
    use crate::poset::product_order;
    use crate::rational::q;
    use crate::siegmund::antidual;

    fn spec(caps: &[usize], p: &[&[(i64, i64)]], qq: &[&[(i64, i64)]]) -> GamblerSpec {
        let t = |tabs: &[&[(i64, i64)]]| -> Vec<Vec<Q>> {
            tabs.iter()
                .map(|r| r.iter().map(|&(a, b)| q(a, b)).collect())
                .collect()
        };
        GamblerSpec::new(caps.to_vec(), t(p), t(qq)).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GamblerSpec::new(vec![], vec![], vec![]).is_err());
        assert!(GamblerSpec::new(vec![3], vec![vec![q(1, 2)]], vec![vec![q(1, 2)]]).is_err());
        assert!(GamblerSpec::new(vec![2], vec![vec![q(0, 1)]], vec![vec![q(1, 2)]]).is_err());
        assert!(GamblerSpec::new(vec![0], vec![vec![]], vec![vec![]]).is_err());
        let s = spec(&[2, 2], &[&[(1, 2)], &[(1, 2)]], &[&[(1, 4)], &[(1, 4)]]);
        assert_eq!(
            s.check_feasible().unwrap_err(),
            Error::Infeasible {
                state: "(1,1)".into(),
                total: q(3, 2)
            }
        );
        assert!(build_chain(&s).is_err());
    }

    #[test]
    fn boundary_convention() {
        let s = spec(&[3], &[&[(1, 3), (1, 4)]], &[&[(1, 5), (1, 6)]]);
        assert_eq!(s.p(0, 0), Q::zero());
        assert_eq!(s.q(0, 3), Q::zero());
        assert_eq!(s.p(0, 2), q(1, 4));
    }

    #[test]
    fn one_dimensional_chain() {
        let s = spec(&[2], &[&[(1, 3)]], &[&[(1, 6)]]);
        let chain = build_chain(&s).unwrap();
        assert_eq!(chain.states(), ["(1)", "(2)", COFFIN]);
        let p = chain.kernel().matrix();
        assert_eq!(p[(0, 1)], q(1, 3));
        assert_eq!(p[(0, 2)], q(1, 6));
        assert_eq!(p[(0, 0)], q(1, 2));
        assert_eq!(chain.win(), "(2)");
        let pz = remove_coffin(&chain);
        assert_eq!(pz.matrix().row(0), [q(1, 2), q(1, 3)]);
        assert_eq!(pz.matrix().row(1), [Q::zero(), Q::one()]);
    }

    #[test]
    fn two_dimensional_coffin_mass() {
        let s = spec(&[2, 2], &[&[(1, 4)], &[(1, 4)]], &[&[(1, 4)], &[(1, 4)]]);
        let chain = build_chain(&s).unwrap();
        assert_eq!(chain.states().len(), 5);
        assert_eq!(chain.kernel().entry("(1,1)", COFFIN).unwrap(), &q(1, 2));
        assert_eq!(chain.kernel().entry("(1,2)", COFFIN).unwrap(), &q(1, 4));
        assert_eq!(chain.kernel().entry("(1,1)", "(1,1)").unwrap(), &Q::zero());
    }

    #[test]
    fn closed_form_values() {
        let s = spec(&[5], &[&[(1, 3); 4]], &[&[(1, 3); 4]]);
        assert_eq!(ruin_closed_form(&s, &[2]).unwrap(), q(2, 5));
        assert_eq!(ruin_closed_form(&s, &[5]).unwrap(), Q::one());
        assert!(ruin_closed_form(&s, &[6]).is_err());
        assert!(ruin_closed_form(&s, &[0]).is_err());
        assert!(ruin_closed_form(&s, &[1, 1]).is_err());
    }

    #[test]
    fn mixed_tables_against_oracle() {
        // coordinate 1 ratios 2, 1/2 → partial sums 1, 3, 4; coordinate 2 → 1, 2
        let s = spec(
            &[3, 2],
            &[&[(1, 6), (1, 6)], &[(1, 8)]],
            &[&[(1, 3), (1, 12)], &[(1, 8)]],
        );
        assert_eq!(ruin_closed_form(&s, &[2, 1]).unwrap(), q(3, 8));
        let oracle = absorption_oracle(&build_chain(&s).unwrap()).unwrap();
        assert_eq!(oracle.get("(2,1)"), Some(&q(3, 8)));
        assert_eq!(closed_form_vector(&s), oracle);
    }

    #[test]
    fn antidual_closed_form_small() {
        let s = spec(&[3], &[&[(1, 4), (1, 4)]], &[&[(1, 4), (1, 4)]]);
        let expected = Matrix::from_rows(vec![
            vec![q(3, 4), q(1, 4), q(0, 1)],
            vec![q(1, 4), q(1, 2), q(1, 4)],
            vec![q(0, 1), q(1, 4), q(3, 4)],
        ])
        .unwrap();
        let closed = antidual_closed_form(&s);
        assert_eq!(closed.matrix(), &expected);
        let mechanical = antidual(
            &remove_coffin(&build_chain(&s).unwrap()),
            &product_order(s.capitals()).unwrap(),
        )
        .unwrap();
        assert_eq!(mechanical, closed);
    }

    #[test]
    fn antidual_boundary_two_states() {
        let s = spec(&[2], &[&[(1, 3)]], &[&[(1, 6)]]);
        let k = antidual_closed_form(&s);
        assert_eq!(k.matrix().row(0), [q(5, 6), q(1, 6)]);
        assert_eq!(k.matrix().row(1), [q(1, 3), q(2, 3)]);
    }

    #[test]
    fn quasi_antidual_reports_negative_hold() {
        let t = |n: usize| vec![q(3, 10); n];
        let s = GamblerSpec::new(vec![3, 3], vec![t(2), t(2)], vec![t(2), t(2)]).unwrap();
        s.check_feasible().unwrap_err();
        // infeasible for the game, but the kernel formula is still defined
        let k = antidual_closed_form(&s);
        assert_eq!(k.class(), KernelClass::Quasi);
        let neg = k.negative_entries();
        assert!(neg.contains(&("(2,2)".into(), "(2,2)".into(), q(-1, 5))));
    }

    #[test]
    fn network_measure() {
        let s = spec(&[2], &[&[(1, 3)]], &[&[(1, 6)]]);
        let pi = network_stationary(&s);
        // ∝ (1, 1/2)
        assert_eq!(pi.values, vec![q(2, 3), q(1, 3)]);
        let k = antidual_closed_form(&s);
        assert_eq!(k.matrix().left_mul(&pi.values), pi.values);
    }

    #[test]
    fn homogeneous_cases() {
        let s = GamblerSpec::homogeneous(vec![3], vec![q(2, 5)], vec![q(1, 5)]).unwrap();
        assert_eq!(homogeneous_ruin(&s, &[2]).unwrap(), q(6, 7));
        assert_eq!(ruin_closed_form(&s, &[2]).unwrap(), q(6, 7));

        let fair = GamblerSpec::homogeneous(vec![4, 3], vec![q(1, 5), q(1, 7)], vec![q(1, 5), q(1, 7)])
            .unwrap();
        assert_eq!(homogeneous_ruin(&fair, &[3, 2]).unwrap(), q(3, 4) * q(2, 3));

        let bumpy = spec(&[3], &[&[(1, 4), (1, 5)]], &[&[(1, 4), (1, 4)]]);
        assert_eq!(homogeneous_ruin(&bumpy, &[1]).unwrap_err(), Error::NotHomogeneous(0));
    }

    #[test]
    fn trivial_lattice() {
        let s = GamblerSpec::new(vec![1, 1], vec![vec![], vec![]], vec![vec![], vec![]]).unwrap();
        let chain = build_chain(&s).unwrap();
        assert_eq!(chain.live_states(), ["(1,1)"]);
        assert_eq!(ruin_closed_form(&s, &[1, 1]).unwrap(), Q::one());
        assert_eq!(homogeneous_ruin(&s, &[1, 1]).unwrap(), Q::one());
        assert_eq!(absorption_oracle(&chain).unwrap().values, vec![Q::one()]);
    }
}
