use std::sync::Arc;

use super::{ConstructionError, LimitValuation, Method};
use crate::order::{EpPair, OrderError};
use crate::pointset::PointSet;
use crate::projective::{limit_ep_structure, materialize_limit, EpSystem, ValuedSystem};
use crate::valuation::{Valuation, ValuationError};
use crate::value::ExtNonneg;

/// `sup_i ν_i(e_i⁻¹(U))` for a set `U` of threads.
pub fn ep_sup_value(vs: &ValuedSystem, pairs: &[EpPair], u: &PointSet) -> ExtNonneg {
    pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| vs.valuation(i).eval(&pair.embedding().preimage(u)))
        .max()
        .unwrap_or_else(ExtNonneg::zero)
}

/// The valuation on the limit of an ep-system given by
/// `ν(U) = sup_i ν_i(e_i⁻¹(U))`.
///
/// Weights are read off the formula on `↑t` and `↑t \ {t}` for each
/// thread `t`; the formula is then compared with the weights on every open
/// of the limit (when enumerable) and the marginals are verified.
pub fn ep_limit_valuation(
    vs: &ValuedSystem,
    ep: &EpSystem,
    max_points: usize,
    max_opens: usize,
) -> Result<LimitValuation, ConstructionError> {
    if !Arc::ptr_eq(vs.system(), ep.system()) && vs.system().spaces() != ep.system().spaces() {
        return Err(ConstructionError::Disagreement("ep-system and valued system differ".into()));
    }
    vs.check_compatibility(max_opens)?;
    let limit = materialize_limit(vs.system(), max_points)?;
    let pairs = limit_ep_structure(ep, &limit)?;
    let space = limit.space().clone();
    let weights = (0..space.len())
        .map(|t| {
            let up = space.up_of(t);
            let mut rest = up.clone();
            rest.remove(t);
            let hi = ep_sup_value(vs, &pairs, up);
            let lo = ep_sup_value(vs, &pairs, &rest);
            hi.checked_sub(&lo).ok_or_else(|| {
                if hi.is_infinite() {
                    ValuationError::Indeterminate(space.label(t).to_string())
                } else {
                    ValuationError::NotSimple(format!("negative weight at {}", space.label(t)))
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let valuation = Valuation::new(space.clone(), weights)?;
    match space.opens_bounded(max_opens) {
        Ok(opens) => {
            if let Some(u) = opens.iter().find(|u| ep_sup_value(vs, &pairs, u) != valuation.eval(u)) {
                return Err(ConstructionError::Disagreement(format!(
                    "sup formula and weights on {:?}",
                    space.set_labels(u)
                )));
            }
        }
        Err(OrderError::SizeLimit { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    let lv = LimitValuation {
        limit,
        valuation,
        method: Method::EpLimit,
        tightness: None,
    };
    lv.check_marginals(vs, max_opens)?;
    Ok(lv)
}
