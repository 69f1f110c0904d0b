//! Exact absorption ("ruin") probabilities for finite absorbing Markov chains.
//!
//! The central route goes through Siegmund duality on a partially ordered
//! state space: strip the losing (coffin) state, form the antidual kernel
//! `C · P_Zᵀ · C⁻¹` with the zeta matrix `C` of the order, take its invariant
//! signed measure `π`, and read the winning probability from state `e` as the
//! down-set sum `π({e}↓)`. Every step is carried out over exact rationals.
//!
//! The same answers are available from an independent first-step-analysis
//! solver ([`kernel::absorption_oracle`]) and from seeded Monte Carlo
//! ([`kernel::simulate`]), and for the multidimensional generalized gambler's
//! ruin game from the product-form closed expressions in [`gambler`].
//!
//! ```
//! use ruin_core::gambler::{GamblerSpec, build_chain, ruin_closed_form};
//! use ruin_core::kernel::absorption_oracle;
//! use ruin_core::rational::q;
//!
//! let half = q(1, 2);
//! let spec = GamblerSpec::new(vec![4], vec![vec![half.clone(); 3]], vec![vec![half; 3]]).unwrap();
//! let chain = build_chain(&spec).unwrap();
//! let oracle = absorption_oracle(&chain).unwrap();
//! assert_eq!(ruin_closed_form(&spec, &[1]).unwrap(), q(1, 4));
//! assert_eq!(oracle.get("(1)"), Some(&q(1, 4)));
//! ```

pub mod doc;
pub mod error;
pub mod gambler;
pub mod kernel;
pub mod matrix;
pub mod par;
pub mod poset;
pub mod rational;
pub mod sample;
pub mod siegmund;

pub use error::{Error, Result};
pub use rational::Q;
