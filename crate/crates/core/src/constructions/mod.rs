//! Valuations on projective limits: the ep-system formula, products via
//! lifts, and the route through uniform tightness.

mod ep_limit;
mod product;
mod prohorov;

use std::fmt;

use thiserror::Error;

use crate::order::{OrderError, UpSet};
use crate::projective::{CylinderOpen, LimitSpace, SystemError, ValuedSystem};
use crate::valuation::{first_difference, Threshold, Valuation, ValuationError, Witness};
use crate::value::ExtNonneg;

pub use ep_limit::{ep_limit_valuation, ep_sup_value};
pub use product::{
    dk_product, pointed_product_valuation, sub_product, subset_label, MarginalFamily, ProductValuation, MAX_FACTORS,
};
pub use prohorov::{
    loccomp_certificate, prohorov_limit, q_chain_from_base, uniform_tightness_check, QChain, Supplier,
    UniformTightness, UniformWitness,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("factor {0} has no least element")]
    NotPointed(String),
    #[error("not uniformly tight at index {index}, open {open:?}, threshold {threshold}")]
    NotUniformlyTight {
        index: String,
        open: Witness,
        threshold: String,
    },
    #[error("no witness: {r} is not way below {value}")]
    NoWitness { r: ExtNonneg, value: ExtNonneg },
    #[error("marginal at index {index} differs on open {open:?}")]
    MarginalMismatch { index: String, open: Witness },
    #[error("constructions disagree on {0}")]
    Disagreement(String),
    #[error("expected an explicit-prefix chain")]
    NotAChain,
    #[error("space {0} is not sober")]
    NotSober(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    EpLimit,
    PointedProduct,
    Kolmogorov,
    Prohorov,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::EpLimit => "ep-limit",
            Method::PointedProduct => "pointed-product",
            Method::Kolmogorov => "kolmogorov",
            Method::Prohorov => "prohorov",
        })
    }
}

/// A valuation on the materialized limit of a valued system.
#[derive(Debug, Clone)]
pub struct LimitValuation {
    limit: LimitSpace,
    valuation: Valuation,
    method: Method,
    tightness: Option<UniformTightness>,
}

impl LimitValuation {
    pub fn limit(&self) -> &LimitSpace {
        &self.limit
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// The uniform tightness certificate, when built by the Prohorov route.
    pub fn tightness(&self) -> Option<&UniformTightness> {
        self.tightness.as_ref()
    }

    /// Whether some mass is infinite; such results are outside the range
    /// where the finite threshold scheme has been exercised.
    pub fn experimental(&self) -> bool {
        self.valuation.has_infinite_weight()
    }

    pub fn eval(&self, u: &UpSet) -> ExtNonneg {
        self.valuation.eval(u)
    }

    pub fn eval_cylinder(&self, c: &CylinderOpen) -> ExtNonneg {
        self.valuation.eval(&self.limit.denote(c))
    }

    /// `p_i[ν]`.
    pub fn marginal(&self, i: usize) -> Valuation {
        self.valuation
            .image(self.limit.projection(i))
            .expect("projections start at the limit space")
    }

    /// Verifies `p_i[ν] = ν_i` on every open of every level.
    pub fn check_marginals(&self, vs: &ValuedSystem, max_opens: usize) -> Result<(), ConstructionError> {
        let sys = vs.system();
        for i in 0..sys.len() {
            if let Some(u) = first_difference(&self.marginal(i), vs.valuation(i), max_opens)? {
                return Err(ConstructionError::MarginalMismatch {
                    index: sys.index().label(i).to_string(),
                    open: sys.space(i).set_labels(&u).into_iter().map(String::from).collect(),
                });
            }
        }
        Ok(())
    }

    /// The first cylinder (level by level, bases in canonical order) on
    /// which two limit valuations over the same system differ.
    pub fn first_disagreement(&self, other: &LimitValuation) -> Result<Option<CylinderOpen>, ConstructionError> {
        let sys = self.limit.system();
        for level in 0..sys.len() {
            for base in sys.space(level).opens()? {
                let c = CylinderOpen { level, base };
                if self.eval_cylinder(&c) != other.eval_cylinder(&c) {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }
}

pub(crate) fn threshold_label(t: &Threshold) -> String {
    t.to_string()
}
