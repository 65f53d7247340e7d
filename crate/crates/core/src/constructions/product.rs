use std::sync::Arc;

use super::{ep_limit_valuation, ConstructionError, LimitValuation, Method};
use crate::order::{lift_with_inclusion, product_space, FiniteSpace, MonotoneMap, OrderError, DEFAULT_MAX_POINTS};
use crate::pointset::PointSet;
use crate::projective::{DirectedIndex, EpSystem, ProjectiveSystem, ValuedSystem};
use crate::valuation::{first_difference, Valuation, ValuationError};
use crate::value::ExtNonneg;

/// At most this many factors; the index is the lattice of all subsets.
pub const MAX_FACTORS: usize = 6;

fn coords(mask: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|&k| mask >> k & 1 == 1).collect()
}

fn decode(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut t = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        t[k] = idx % sizes[k];
        idx /= sizes[k];
    }
    t
}

fn encode(t: &[usize], sizes: &[usize]) -> usize {
    t.iter().zip(sizes).fold(0, |acc, (&x, &s)| acc * s + x)
}

/// The label of the subset with bitmask `mask` of `m` factors, like `{0,2}`.
pub fn subset_label(mask: usize, m: usize) -> String {
    let parts: Vec<String> = coords(mask, m).iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// The sub-product `X_J` for the subset with bitmask `mask`. A single
/// coordinate is the factor itself, labels included.
pub fn sub_product(factors: &[Arc<FiniteSpace>], mask: usize) -> Result<Arc<FiniteSpace>, OrderError> {
    let fs: Vec<Arc<FiniteSpace>> = coords(mask, factors.len()).iter().map(|&k| factors[k].clone()).collect();
    match fs.as_slice() {
        [f] => Ok(f.clone()),
        _ => product_space(&fs, DEFAULT_MAX_POINTS).map(|(s, _)| s),
    }
}

/// The system of finite sub-products `X_J = ∏_{j∈J} X_j` over all subsets
/// `J` (index `k` is the bitmask of `J`), with coordinate projections.
fn subset_system(factors: &[Arc<FiniteSpace>]) -> Result<ProjectiveSystem, ConstructionError> {
    let m = factors.len();
    if m > MAX_FACTORS {
        return Err(OrderError::SizeLimit {
            what: "product factors",
            limit: MAX_FACTORS,
        }
        .into());
    }
    let n = 1usize << m;
    let names = (0..n).map(|mask| subset_label(mask, m)).collect();
    let index = DirectedIndex::new(Arc::new(FiniteSpace::from_le_fn(names, |a, b| a & !b == 0)))?;
    let spaces = (0..n).map(|mask| sub_product(factors, mask)).collect::<Result<Vec<_>, _>>()?;
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut bonds = Vec::new();
    for small in 0..n {
        for big in (0..n).filter(|&b| b != small && small & !b == 0) {
            let cb = coords(big, m);
            let cs = coords(small, m);
            let sb: Vec<usize> = cb.iter().map(|&k| sizes[k]).collect();
            let ss: Vec<usize> = cs.iter().map(|&k| sizes[k]).collect();
            let keep: Vec<usize> = cs.iter().map(|k| cb.iter().position(|c| c == k).expect("J is inside J'")).collect();
            let graph = (0..spaces[big].len())
                .map(|y| {
                    let t = decode(y, &sb);
                    let s: Vec<usize> = keep.iter().map(|&p| t[p]).collect();
                    encode(&s, &ss)
                })
                .collect();
            bonds.push((small, big, MonotoneMap::new(spaces[big].clone(), spaces[small].clone(), graph)?));
        }
    }
    Ok(ProjectiveSystem::new(index, spaces, bonds)?)
}

/// A family `ν_J` of valuations on the finite sub-products of some factors,
/// one for every subset `J` (indexed by bitmask).
#[derive(Debug, Clone)]
pub struct MarginalFamily {
    factors: Vec<Arc<FiniteSpace>>,
    valued: ValuedSystem,
}

impl MarginalFamily {
    pub fn new(factors: Vec<Arc<FiniteSpace>>, vals: Vec<Valuation>) -> Result<Self, ConstructionError> {
        let system = Arc::new(subset_system(&factors)?);
        let valued = ValuedSystem::new(system, vals)?;
        Ok(MarginalFamily { factors, valued })
    }

    /// All marginals of one valuation on the full product.
    pub fn from_joint(factors: Vec<Arc<FiniteSpace>>, joint: &Valuation) -> Result<Self, ConstructionError> {
        let system = Arc::new(subset_system(&factors)?);
        let full = system.top();
        if **joint.space() != **system.space(full) {
            return Err(ValuationError::SpaceMismatch.into());
        }
        let joint = Valuation::new(system.space(full).clone(), joint.weights().to_vec())?;
        let valued = ValuedSystem::from_top(system, &joint)?;
        Ok(MarginalFamily { factors, valued })
    }

    /// The family of the independent product of finite one-factor valuations.
    pub fn independent(factors: Vec<Arc<FiniteSpace>>, singles: &[Valuation]) -> Result<Self, ConstructionError> {
        let system = subset_system(&factors)?;
        let full = system.space(system.top()).clone();
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let weights = (0..full.len())
            .map(|t| {
                decode(t, &sizes).iter().enumerate().try_fold(ExtNonneg::one(), |acc, (k, &x)| {
                    let w = singles[k].weight(x).as_rational()?;
                    acc.scale(w)
                })
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ValuationError::NotSimple("independent products need finite weights".into()))?;
        Self::from_joint(factors, &Valuation::new(full, weights)?)
    }

    pub fn factors(&self) -> &[Arc<FiniteSpace>] {
        &self.factors
    }

    pub fn valued_system(&self) -> &ValuedSystem {
        &self.valued
    }

    pub fn system(&self) -> &Arc<ProjectiveSystem> {
        self.valued.system()
    }

    /// `ν_J` for the subset with bitmask `mask`.
    pub fn marginal(&self, mask: usize) -> &Valuation {
        self.valued.valuation(mask)
    }

    /// The full product `X_I`.
    pub fn product(&self) -> &Arc<FiniteSpace> {
        let sys = self.system();
        sys.space(sys.top())
    }

    pub fn check(&self, max_opens: usize) -> Result<(), ConstructionError> {
        Ok(self.valued.check_compatibility(max_opens)?)
    }
}

/// For pointed factors: the ep-system over finite sub-products whose
/// embeddings pad missing coordinates with `⊥`, fed to the ep-limit formula.
pub fn pointed_product_valuation(
    family: &MarginalFamily,
    max_points: usize,
    max_opens: usize,
) -> Result<LimitValuation, ConstructionError> {
    let factors = family.factors();
    let m = factors.len();
    let bottoms = factors
        .iter()
        .enumerate()
        .map(|(k, f)| f.bottom().ok_or_else(|| ConstructionError::NotPointed(k.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let sys = family.system();
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let mut embeddings = Vec::new();
    for small in 0..sys.len() {
        for big in sys.index().above(small) {
            let cs = coords(small, m);
            let cb = coords(big, m);
            let ss: Vec<usize> = cs.iter().map(|&k| sizes[k]).collect();
            let sb: Vec<usize> = cb.iter().map(|&k| sizes[k]).collect();
            let graph = (0..sys.space(small).len())
                .map(|x| {
                    let t = decode(x, &ss);
                    let padded: Vec<usize> = cb
                        .iter()
                        .map(|k| match cs.iter().position(|c| c == k) {
                            Some(p) => t[p],
                            None => bottoms[*k],
                        })
                        .collect();
                    encode(&padded, &sb)
                })
                .collect();
            embeddings.push((small, big, MonotoneMap::new(sys.space(small).clone(), sys.space(big).clone(), graph)?));
        }
    }
    let ep = EpSystem::new(sys.clone(), embeddings)?;
    let mut lv = ep_limit_valuation(family.valued_system(), &ep, max_points, max_opens)?;
    lv.method = Method::PointedProduct;
    Ok(lv)
}

/// The result of [`dk_product`].
#[derive(Debug, Clone)]
pub struct ProductValuation {
    /// `ν` on the product `X_I` of the original factors.
    pub valuation: Valuation,
    /// `ν̃` on the product of the lifted factors.
    pub lifted: Valuation,
    /// The points of the lifted product with no `⊥` coordinate.
    pub support: PointSet,
    /// How many basic boxes had their largest same-trace open checked.
    pub boxes_checked: usize,
}

/// The product valuation of arbitrary finite factors with a compatible
/// marginal family, built through the lifts `X_⊥`.
///
/// Each `ν_J` is pushed into the lifted sub-product, the pointed
/// construction gives `ν̃`, the points without `⊥` are shown to support
/// `ν̃`, and the restriction is read back on `X_I`. Basic boxes are also
/// checked directly: their largest open with the same trace on the
/// support is the box with each coordinate covering `X_i` widened to
/// `X_{i⊥}`, and it carries the same mass. `max_boxes` bounds that check.
pub fn dk_product(
    family: &MarginalFamily,
    max_points: usize,
    max_opens: usize,
    max_boxes: usize,
) -> Result<ProductValuation, ConstructionError> {
    family.check(max_opens)?;
    let factors = family.factors();
    let m = factors.len();
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let lifted: Vec<Arc<FiniteSpace>> = factors.iter().map(|f| lift_with_inclusion(f).0).collect();
    let lsizes: Vec<usize> = lifted.iter().map(|f| f.len()).collect();
    let sys = family.system();

    // ν_J pushed along η_J : X_J → ∏_{j∈J} X_{j⊥}
    let lifted_sys = subset_system(&lifted)?;
    let pushed = (0..sys.len())
        .map(|mask| {
            let c = coords(mask, m);
            let s: Vec<usize> = c.iter().map(|&k| sizes[k]).collect();
            let ls: Vec<usize> = c.iter().map(|&k| lsizes[k]).collect();
            let graph = (0..sys.space(mask).len()).map(|x| encode(&decode(x, &s), &ls)).collect();
            let eta = MonotoneMap::new(sys.space(mask).clone(), lifted_sys.space(mask).clone(), graph)?;
            Ok(family.marginal(mask).image(&eta)?)
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let lifted_family = MarginalFamily::new(lifted.clone(), pushed)?;
    let tilde = pointed_product_valuation(&lifted_family, max_points, max_opens)?;
    let full = lifted_family.system().top();
    let nu_tilde = tilde.marginal(full);
    let big = nu_tilde.space().clone();

    // points with no ⊥ coordinate; ⊥ is the last point of each lift
    let support = PointSet::from_indices(
        big.len(),
        (0..big.len()).filter(|&y| decode(y, &lsizes).iter().zip(&lsizes).all(|(&c, &s)| c + 1 < s)),
    );

    let boxes_checked = check_boxes(&lifted, &lsizes, &big, &support, &nu_tilde, max_boxes)?;

    let sup = nu_tilde.support_check(&support, max_opens)?;
    let product = family.product().clone();
    let mut weights = vec![ExtNonneg::zero(); product.len()];
    for (k, y) in support.iter().enumerate() {
        weights[encode(&decode(y, &lsizes), &sizes)] = sup.restricted.weight(k).clone();
    }
    let valuation = Valuation::new(product, weights)?;
    for mask in 0..sys.len() {
        let marginal = valuation.image(sys.bond(mask, sys.top()))?;
        if let Some(u) = first_difference(&marginal, family.marginal(mask), max_opens)? {
            return Err(ConstructionError::MarginalMismatch {
                index: sys.index().label(mask).to_string(),
                open: sys.space(mask).set_labels(&u).into_iter().map(String::from).collect(),
            });
        }
    }
    Ok(ProductValuation {
        valuation,
        lifted: nu_tilde,
        support,
        boxes_checked,
    })
}

// For every box ∏ U_k of opens of the lifted factors (up to `max_boxes`):
// the literal largest open with the same trace on `support` equals the
// widened box, and both carry the same ν̃-mass.
fn check_boxes(
    lifted: &[Arc<FiniteSpace>],
    lsizes: &[usize],
    big: &Arc<FiniteSpace>,
    support: &PointSet,
    nu: &Valuation,
    max_boxes: usize,
) -> Result<usize, ConstructionError> {
    let opens = lifted
        .iter()
        .map(|f| f.opens_bounded(max_boxes.max(1)))
        .collect::<Result<Vec<_>, _>>();
    let opens = match opens {
        Ok(o) => o,
        Err(OrderError::SizeLimit { .. }) => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    let total: usize = opens.iter().map(Vec::len).product();
    if total > max_boxes {
        return Ok(0);
    }
    let tuples: Vec<Vec<usize>> = (0..big.len()).map(|y| decode(y, lsizes)).collect();
    let box_set = |us: &[&PointSet]| {
        PointSet::from_indices(big.len(), (0..big.len()).filter(|&y| tuples[y].iter().zip(us).all(|(&c, u)| u.contains(c))))
    };
    let mut choice = vec![0usize; lifted.len()];
    for _ in 0..total {
        let us: Vec<&PointSet> = choice.iter().zip(&opens).map(|(&c, o)| o[c].as_set()).collect();
        let b = box_set(&us);
        let literal = PointSet::from_indices(
            big.len(),
            (0..big.len()).filter(|&y| big.up_of(y).intersection(support).is_subset(&b)),
        );
        let widened: Vec<PointSet> = us
            .iter()
            .zip(lifted)
            .map(|(u, f)| {
                let bottom = f.len() - 1;
                let mut inner = f.full_set();
                inner.remove(bottom);
                if inner.is_subset(u) {
                    f.full_set()
                } else {
                    (*u).clone()
                }
            })
            .collect();
        let rule = box_set(&widened.iter().collect::<Vec<_>>());
        if literal != rule {
            return Err(ConstructionError::Disagreement(format!(
                "largest same-trace open of box {:?}",
                big.set_labels(&b)
            )));
        }
        if nu.eval(&b) != nu.eval(&rule) {
            return Err(ValuationError::NotSupported {
                u: big.set_labels(&b).into_iter().map(String::from).collect(),
                v: big.set_labels(&rule).into_iter().map(String::from).collect(),
            }
            .into());
        }
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < opens[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
    Ok(total)
}
