//! Finite partial orders, their zeta and Möbius matrices, and principal
//! down-/up-sets.
//!
//! Elements are always stored in a linear extension of the order, so the zeta
//! matrix is unit upper triangular and the Möbius matrix can be filled in by
//! the usual triangular recursion.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major `leq[a * len + b]` iff `elements[a] ⪯ elements[b]`.
    leq: Vec<bool>,
}

/// `C(e, e') = 1` iff `e ⪯ e'`, in poset element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaMatrix(Matrix);

/// Inverse of the zeta matrix; integer valued.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMatrix(Matrix);

impl ZetaMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

impl MobiusMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

impl Poset {
    /// Builds the reflexive-transitive closure of `covers` (pairs `(lower, upper)`)
    /// and re-sorts `elements` into a linear extension, breaking ties by input order.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut input_index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if input_index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |s: &S| {
            input_index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownLabel(s.as_ref().to_owned()))
        };
        let m = labels.len();
        let mut succ = vec![Vec::new(); m];
        let mut pred = vec![Vec::new(); m];
        for (lo, hi) in covers {
            let (lo, hi) = (lookup(lo)?, lookup(hi)?);
            succ[lo].push(hi);
            pred[hi].push(lo);
        }

        // Kahn's algorithm, always taking the earliest input label that is ready.
        let mut indegree: Vec<usize> = pred.iter().map(Vec::len).collect();
        let mut placed = vec![false; m];
        let mut order = Vec::with_capacity(m);
        while order.len() < m {
            let Some(next) = (0..m).find(|&i| !placed[i] && indegree[i] == 0) else {
                return Err(Error::Cycle(find_cycle(&pred, &placed, &labels)));
            };
            placed[next] = true;
            order.push(next);
            for &s in &succ[next] {
                indegree[s] -= 1;
            }
        }

        let mut position = vec![0; m];
        for (pos, &orig) in order.iter().enumerate() {
            position[orig] = pos;
        }
        let mut leq = vec![false; m * m];
        for pos in (0..m).rev() {
            leq[pos * m + pos] = true;
            for &s in &succ[order[pos]] {
                let sp = position[s];
                for k in 0..m {
                    if leq[sp * m + k] {
                        leq[pos * m + k] = true;
                    }
                }
            }
        }
        let elements = order.into_iter().map(|i| labels[i].clone()).collect();
        Ok(Poset::from_parts(elements, leq))
    }

    /// Trusted constructor: `elements` already in a linear extension and `leq` a
    /// valid partial order.
    pub(crate) fn from_parts(elements: Vec<String>, leq: Vec<bool>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let poset = Poset {
            elements,
            index,
            leq,
        };
        debug_assert!(poset.is_valid());
        poset
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// `elements[a] ⪯ elements[b]`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn leq_labels(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| a == b || !self.leq(a, b)))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| a == b || !self.leq(b, a)))
            .collect()
    }

    /// Index of the unique maximal element.
    pub fn unique_max(&self) -> Result<usize> {
        match self.maximal().as_slice() {
            [top] => Ok(*top),
            tops => Err(Error::NoUniqueMaximum(
                tops.iter().map(|&i| self.elements[i].clone()).collect(),
            )),
        }
    }

    pub fn zeta_matrix(&self) -> ZetaMatrix {
        let m = self.len();
        ZetaMatrix(Matrix::from_fn(m, m, |a, b| {
            if self.leq(a, b) {
                Q::one()
            } else {
                Q::zero()
            }
        }))
    }

    /// `μ(x, x) = 1`, `μ(x, y) = -Σ_{x ⪯ z ≺ y} μ(x, z)`; exactly the inverse of
    /// the zeta matrix.
    pub fn mobius_matrix(&self) -> MobiusMatrix {
        let m = self.len();
        let mut mu = Matrix::zeros(m, m);
        for x in 0..m {
            mu[(x, x)] = Q::one();
            for y in x + 1..m {
                if !self.leq(x, y) {
                    continue;
                }
                let mut acc = Q::zero();
                for z in x..y {
                    if self.leq(x, z) && self.leq(z, y) && !mu[(x, z)].is_zero() {
                        acc += &mu[(x, z)];
                    }
                }
                mu[(x, y)] = -acc;
            }
        }
        MobiusMatrix(mu)
    }

    /// `{e' : e' ⪯ e}` in element order.
    pub fn down_set(&self, label: &str) -> Result<Vec<String>> {
        let e = self.index_of(label)?;
        Ok(self.collect(|x| self.leq(x, e)))
    }

    /// `{e' : e ⪯ e'}` in element order.
    pub fn up_set(&self, label: &str) -> Result<Vec<String>> {
        let e = self.index_of(label)?;
        Ok(self.collect(|x| self.leq(e, x)))
    }

    fn collect(&self, keep: impl Fn(usize) -> bool) -> Vec<String> {
        (0..self.len())
            .filter(|&x| keep(x))
            .map(|x| self.elements[x].clone())
            .collect()
    }

    /// Covering pairs `(a, b)`: `a ≺ b` with nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(String, String)> {
        let m = self.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if self.leq(a, b) && !(a + 1..b).any(|c| self.leq(a, c) && self.leq(c, b)) {
                    out.push((self.elements[a].clone(), self.elements[b].clone()));
                }
            }
        }
        out
    }

    /// Reflexive, antisymmetric, transitive, and element order is a linear extension.
    pub fn is_valid(&self) -> bool {
        let m = self.len();
        for a in 0..m {
            if !self.leq(a, a) {
                return false;
            }
            for b in 0..m {
                if a != b && self.leq(a, b) && (self.leq(b, a) || b < a) {
                    return false;
                }
                if self.leq(a, b) && (0..m).any(|c| self.leq(b, c) && !self.leq(a, c)) {
                    return false;
                }
            }
        }
        true
    }
}

fn find_cycle(pred: &[Vec<usize>], placed: &[bool], labels: &[String]) -> Vec<String> {
    // Every unplaced node still has an unplaced predecessor; walk back until a repeat.
    let start = (0..placed.len()).find(|&i| !placed[i]).expect("unplaced node");
    let mut seen = vec![None; placed.len()];
    let mut path = Vec::new();
    let mut cur = start;
    while seen[cur].is_none() {
        seen[cur] = Some(path.len());
        path.push(cur);
        cur = *pred[cur]
            .iter()
            .find(|&&p| !placed[p])
            .expect("unplaced predecessor");
    }
    let mut cycle: Vec<usize> = path[seen[cur].unwrap()..].to_vec();
    cycle.reverse();
    cycle.push(cycle[0]);
    cycle.into_iter().map(|i| labels[i].clone()).collect()
}

/// `"(i_1,..,i_d)"`.
pub fn tuple_label(t: &[usize]) -> String {
    let inner: Vec<String> = t.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

/// Coordinate-wise order on `∏ {1..N_j}`, elements in lexicographic order with
/// the first coordinate varying slowest.
pub fn product_order(factors: &[usize]) -> Result<Poset> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("product order needs at least one factor".into()));
    }
    if let Some(bad) = factors.iter().find(|&&n| n < 1) {
        return Err(Error::InvalidArgument(format!(
            "chain length must be at least 1, got {bad}"
        )));
    }
    let tuples = lattice_tuples(factors);
    let m = tuples.len();
    let mut leq = vec![false; m * m];
    for (a, ta) in tuples.iter().enumerate() {
        for (b, tb) in tuples.iter().enumerate().skip(a) {
            leq[a * m + b] = ta.iter().zip(tb).all(|(x, y)| x <= y);
        }
    }
    Ok(Poset::from_parts(
        tuples.iter().map(|t| tuple_label(t)).collect(),
        leq,
    ))
}

/// All tuples `(i_1..i_d)` with `1 ≤ i_j ≤ N_j`, first coordinate slowest.
pub fn lattice_tuples(factors: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=n).map(move |i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Closed-form Möbius function of a product of chains:
/// `(-1)^{Σ r_k}` when `upper = lower + r` with every `r_k ∈ {0, 1}`, else 0.
pub fn product_mobius(lower: &[usize], upper: &[usize]) -> i64 {
    let mut flips = 0;
    for (&a, &b) in lower.iter().zip(upper) {
        match b.checked_sub(a) {
            Some(0) => {}
            Some(1) => flips += 1,
            _ => return 0,
        }
    }
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}
