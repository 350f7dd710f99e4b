//! JSON description of a pure state, as accepted on the command line.
//!
//! ```json
//! {"kind": "ghz", "n": 4, "d": 2}
//! {"kind": "product", "n": 3, "d": 3, "j": 2}
//! {"kind": "bell_product", "n": 5, "d": 3}
//! {"kind": "random", "n": 3, "d": 2, "seed": 7}
//! {"kind": "amplitudes", "n": 1, "d": 2, "re": [0.6, 0.8], "im": [0, 0]}
//! {"kind": "tensor", "factors": [{"kind": "ghz", "n": 3, "d": 3}, {"kind": "ghz", "n": 2, "d": 3}]}
//! ```
//!
//! Amplitudes are renormalized on load; an input norm further than `1e-6`
//! from 1 is rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{
    make_bell_product, make_ghz, make_product, random_state, tensor, PureState, LOAD_NORM_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Ghz {
        n: usize,
        d: usize,
    },
    Product {
        n: usize,
        d: usize,
        j: usize,
    },
    BellProduct {
        n: usize,
        d: usize,
    },
    Random {
        n: usize,
        d: usize,
        seed: u64,
    },
    Amplitudes {
        n: usize,
        d: usize,
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<f64>>,
    },
    Tensor {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
        factors: Vec<StateSpec>,
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad state specification: {e}")))
    }

    /// Exact amplitudes of an existing state.
    pub fn from_state(state: &PureState) -> Self {
        StateSpec::Amplitudes {
            n: state.n_parties(),
            d: state.local_dim(),
            re: state.amplitudes().iter().map(|a| a.re).collect(),
            im: Some(state.amplitudes().iter().map(|a| a.im).collect()),
        }
    }

    pub fn build(&self) -> Result<PureState> {
        match self {
            StateSpec::Ghz { n, d } => make_ghz(*n, *d),
            StateSpec::Product { n, d, j } => make_product(*n, *d, *j),
            StateSpec::BellProduct { n, d } => make_bell_product(*n, *d),
            StateSpec::Random { n, d, seed } => random_state(*n, *d, *seed),
            StateSpec::Amplitudes { n, d, re, im } => {
                let im = match im {
                    Some(v) if v.len() != re.len() => {
                        return Err(Error::Input(format!(
                            "'re' has {} entries but 'im' has {}",
                            re.len(),
                            v.len()
                        )))
                    }
                    Some(v) => v.clone(),
                    None => vec![0.0; re.len()],
                };
                let amps = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
                PureState::normalized(*n, *d, amps, LOAD_NORM_TOL)
            }
            StateSpec::Tensor { n, d, factors } => {
                let mut iter = factors.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| Error::Input("tensor needs at least one factor".into()))?;
                let mut acc = first.build()?;
                for f in iter {
                    acc = tensor(&acc, &f.build()?)?;
                }
                if n.is_some_and(|n| n != acc.n_parties()) || d.is_some_and(|d| d != acc.local_dim()) {
                    return Err(Error::Input(format!(
                        "tensor declares n = {n:?}, d = {d:?} but factors give n = {}, d = {}",
                        acc.n_parties(),
                        acc.local_dim()
                    )));
                }
                Ok(acc)
            }
        }
    }
}
