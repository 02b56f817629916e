//! The tight span of a finite diversity.
//!
//! `P_X` is the cone of functions f on subsets with f(empty) = 0 whose
//! sums dominate the diversity over every finite collection:
//! `sum_{A in C} f(A) >= delta(union C)`. The tight span `T_X` is the set
//! of pointwise-minimal members of `P_X`. Tight points carry the induced
//! diversity `delta_T`, evaluated through the cover functional `Phi`:
//! the cheapest way to write a set as a union of weighted pieces.
//!
//! The cover functional is computed by an exact dynamic program over
//! (universe, remainder) subset pairs; collections are sets of subsets,
//! which the DP respects by always choosing the piece that covers the
//! lowest remaining element.

mod complex;
mod extend;
mod sample;

pub use complex::{three_point_complex, three_point_membership, ThreePointComplex};
pub use extend::{hyperconvex_extension, Constraint};
pub use sample::sample_tight;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::ground::{masks_by_cardinality, GroundSet, SubsetMask, MAX_TIGHT};
use crate::rat::Rat;

/// A rational-valued function on subsets with value 0 on the empty set.
/// No sign constraint is imposed at construction; nonnegativity is a
/// consequence of `P_X` membership, not an input invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanFunction {
    ground: GroundSet,
    values: Vec<Rat>,
}

impl SpanFunction {
    pub fn new(ground: GroundSet, values: Vec<Rat>) -> Result<Self> {
        if values.len() != ground.subset_count() {
            return Err(Error::Input(format!(
                "function is not total: expected {} entries, got {}",
                ground.subset_count(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::Input("span function must vanish on the empty set".into()));
        }
        Ok(SpanFunction { ground, values })
    }

    /// Constant `c` on every nonempty subset.
    pub fn constant(ground: GroundSet, c: Rat) -> Self {
        let mut values = vec![c; ground.subset_count()];
        values[0] = Rat::zero();
        SpanFunction { ground, values }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn value(&self, m: SubsetMask) -> &Rat {
        &self.values[m.index()]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Pointwise comparison `self <= other` on every subset.
    pub fn dominated_by(&self, other: &SpanFunction) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a <= b)
    }
}

/// Witness that P_X membership fails: a subset whose cheapest cover under
/// f is cheaper than the diversity demands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub set: SubsetMask,
    pub cover: Vec<SubsetMask>,
    pub cover_cost: Rat,
    pub required: Rat,
}

impl CoverWitness {
    /// Re-derives the violation from raw values.
    pub fn verify(&self, delta: &FiniteDiversity, f: &SpanFunction) -> bool {
        let union = self
            .cover
            .iter()
            .fold(SubsetMask::EMPTY, |acc, b| acc.union(*b));
        let cost: Rat = self.cover.iter().map(|b| f.value(*b)).sum();
        union == self.set
            && self.cover.iter().all(|b| !b.is_empty())
            && cost == self.cover_cost
            && *delta.value(self.set) == self.required
            && cost < self.required
    }
}

/// Witness that tightness fails: a subset whose value exceeds its best
/// supporting constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackWitness {
    pub set: SubsetMask,
    pub value: Rat,
    pub support: Rat,
}

impl SlackWitness {
    /// Re-derives the slack from raw values.
    pub fn verify(&self, delta: &FiniteDiversity, f: &SpanFunction) -> bool {
        if *f.value(self.set) != self.value {
            return false;
        }
        let mut support = delta.value(self.set).clone();
        for b in delta.ground().masks() {
            if b.is_empty() {
                continue;
            }
            let cand = delta.value(self.set.union(b)) - f.value(b);
            if cand > support {
                support = cand;
            }
        }
        support == self.support && support < self.value
    }
}

/// Joint membership report for `P_X` and `T_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub in_p: bool,
    pub in_t: bool,
    pub cover_witness: Option<CoverWitness>,
    pub slack_witness: Option<SlackWitness>,
}

fn ensure_tight_cap(n: usize) -> Result<()> {
    if n > MAX_TIGHT {
        return Err(Error::SizeCap { n, cap: MAX_TIGHT });
    }
    Ok(())
}

fn ensure_same_ground(a: &GroundSet, b: &GroundSet) -> Result<()> {
    if a != b {
        return Err(Error::GroundMismatch);
    }
    Ok(())
}

/// Minimum cover cost tables: `phi[U]` is the cheapest collection of
/// nonempty subsets of U (each distinct from `excluded`) whose union is
/// exactly U; `None` when no admissible cover exists (only possible for a
/// singleton U equal to `excluded`).
fn phi_table(n: usize, weights: &[Rat], excluded: Option<SubsetMask>) -> Vec<Option<Rat>> {
    let count = 1usize << n;
    debug_assert_eq!(weights.len(), count);
    let mut phi: Vec<Option<Rat>> = vec![None; count];
    phi[0] = Some(Rat::zero());
    // Scratch table M[R] for the current universe U.
    let mut m: Vec<Option<Rat>> = vec![None; count];
    for u in 1..count as u32 {
        let u = SubsetMask(u);
        m[0] = Some(Rat::zero());
        for r in u.subsets() {
            if r.is_empty() {
                continue;
            }
            let low = r.lowest().unwrap();
            let rest_of_u = u.diff(SubsetMask::singleton(low));
            let mut best: Option<Rat> = None;
            for sub in rest_of_u.subsets() {
                let b = sub.with(low);
                if excluded == Some(b) {
                    continue;
                }
                if let Some(tail) = &m[r.diff(b).index()] {
                    let cand = &weights[b.index()] + tail;
                    if best.as_ref().map_or(true, |cur| cand < *cur) {
                        best = Some(cand);
                    }
                }
            }
            m[r.index()] = best;
        }
        phi[u.index()] = m[u.index()].take();
        for r in u.subsets() {
            m[r.index()] = None;
        }
    }
    phi
}

/// Backtracks one minimizing cover of `y` (ascending tie-break), assuming
/// one exists.
fn min_cover(n: usize, weights: &[Rat], y: SubsetMask, excluded: Option<SubsetMask>) -> Vec<SubsetMask> {
    let count = 1usize << n;
    let mut m: Vec<Option<Rat>> = vec![None; count];
    let mut choice: Vec<Option<SubsetMask>> = vec![None; count];
    m[0] = Some(Rat::zero());
    for r in y.subsets() {
        if r.is_empty() {
            continue;
        }
        let low = r.lowest().unwrap();
        let rest_of_u = y.diff(SubsetMask::singleton(low));
        for sub in rest_of_u.subsets() {
            let b = sub.with(low);
            if excluded == Some(b) {
                continue;
            }
            if let Some(tail) = &m[r.diff(b).index()] {
                let cand = &weights[b.index()] + tail;
                if m[r.index()].as_ref().map_or(true, |cur| cand < *cur) {
                    m[r.index()] = Some(cand);
                    choice[r.index()] = Some(b);
                }
            }
        }
    }
    let mut cover = Vec::new();
    let mut r = y;
    while !r.is_empty() {
        let b = choice[r.index()].expect("cover exists");
        cover.push(b);
        r = r.diff(b);
    }
    cover.sort();
    cover
}

/// The cover functional: the minimum, over collections of nonempty
/// subsets of `y` with union exactly `y` (overlaps permitted, `excluded`
/// barred), of the summed weights. `Phi(empty) = 0`.
pub fn phi_cover(
    ground: &GroundSet,
    weights: &[Rat],
    y: SubsetMask,
    excluded: Option<SubsetMask>,
) -> Result<Rat> {
    let n = ground.len();
    ensure_tight_cap(n)?;
    if weights.len() != ground.subset_count() {
        return Err(Error::Input("weight map is not total".into()));
    }
    if let Some(bad) = ground.masks().find(|m| !m.is_empty() && weights[m.index()].is_negative()) {
        return Err(Error::Input(format!(
            "negative weight on mask {}",
            bad.bits()
        )));
    }
    if !y.is_subset_of(ground.full_mask()) {
        return Err(Error::Input("target set is not within the ground set".into()));
    }
    // Run the DP restricted to subsets of y.
    let table = phi_table(n, weights, excluded);
    table[y.index()]
        .clone()
        .ok_or_else(|| Error::Parameter("no admissible cover exists".into()))
}

/// Tests membership in the feasible cone `P_X`: the singleton-collection
/// conditions `f(A) >= delta(A)` (which force nonnegativity) plus cheapest
/// covers dominating the diversity on every subset.
pub fn in_p(delta: &FiniteDiversity, f: &SpanFunction) -> Result<(bool, Option<CoverWitness>)> {
    ensure_same_ground(delta.ground(), f.ground())?;
    ensure_tight_cap(delta.n())?;
    for m in delta.ground().masks() {
        if !m.is_empty() && f.value(m) < delta.value(m) {
            return Ok((
                false,
                Some(CoverWitness {
                    set: m,
                    cover: vec![m],
                    cover_cost: f.value(m).clone(),
                    required: delta.value(m).clone(),
                }),
            ));
        }
    }
    let phi = phi_table(delta.n(), f.values(), None);
    for m in delta.ground().masks() {
        let phi_m = phi[m.index()].as_ref().expect("no exclusions");
        if phi_m < delta.value(m) {
            let cover = min_cover(delta.n(), f.values(), m, None);
            return Ok((
                false,
                Some(CoverWitness {
                    set: m,
                    cover,
                    cover_cost: phi_m.clone(),
                    required: delta.value(m).clone(),
                }),
            ));
        }
    }
    Ok((true, None))
}

/// Tests membership in the tight span `T_X`: `P_X` membership plus, for
/// every nonempty A, the best supporting constraint
/// `max_B [delta(A|B) - f(B)]` (B over all subsets, including empty)
/// attains f(A) exactly.
pub fn in_t(delta: &FiniteDiversity, f: &SpanFunction) -> Result<MembershipReport> {
    let (p_ok, cover_witness) = in_p(delta, f)?;
    if !p_ok {
        return Ok(MembershipReport {
            in_p: false,
            in_t: false,
            cover_witness,
            slack_witness: None,
        });
    }
    let ground = delta.ground();
    for a in ground.masks() {
        if a.is_empty() {
            continue;
        }
        let mut support = delta.value(a).clone(); // B = empty
        for b in ground.masks() {
            if b.is_empty() {
                continue;
            }
            let cand = delta.value(a.union(b)) - f.value(b);
            if cand > support {
                support = cand;
            }
        }
        debug_assert!(support <= *f.value(a), "P_X member below a valid bound");
        if support != *f.value(a) {
            return Ok(MembershipReport {
                in_p: true,
                in_t: false,
                cover_witness: None,
                slack_witness: Some(SlackWitness {
                    set: a,
                    value: f.value(a).clone(),
                    support,
                }),
            });
        }
    }
    Ok(MembershipReport {
        in_p: true,
        in_t: true,
        cover_witness: None,
        slack_witness: None,
    })
}

/// Lowers a feasible function to a tight one, coordinate by coordinate.
///
/// Sweeps nonempty subsets by cardinality then mask value, setting
/// `f(A) <- max_U [delta(A|U) - Phi(U, excluded = A)]`; the exclusion
/// reflects that a collection is a set, so A itself appears only once in
/// the constraint being tightened. Every update preserves feasibility and
/// never increases a value; sweeping repeats until a full pass changes
/// nothing, then tightness is certified exactly.
pub fn minimize_to_tight(delta: &FiniteDiversity, g: &SpanFunction) -> Result<SpanFunction> {
    let (p_ok, witness) = in_p(delta, g)?;
    if !p_ok {
        let w = witness.unwrap();
        return Err(Error::NotInP {
            set: w.set,
            cover: w.cover,
            cost: w.cover_cost.to_string(),
        });
    }
    let n = delta.n();
    let ground = delta.ground();
    let order: Vec<SubsetMask> = masks_by_cardinality(n)
        .into_iter()
        .filter(|m| !m.is_empty())
        .collect();
    let mut values = g.values().to_vec();
    let max_sweeps = 4 * ground.subset_count();
    let mut settled = false;
    for _ in 0..max_sweeps {
        let mut changed = false;
        for &a in &order {
            let phi = phi_table(n, &values, Some(a));
            let mut best = delta.value(a).clone(); // U = empty
            for u in ground.masks() {
                if u.is_empty() {
                    continue;
                }
                if let Some(cost) = &phi[u.index()] {
                    let cand = delta.value(a.union(u)) - cost;
                    if cand > best {
                        best = cand;
                    }
                }
            }
            if best != values[a.index()] {
                debug_assert!(best < values[a.index()], "update may only lower values");
                values[a.index()] = best;
                changed = true;
            }
        }
        if !changed {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::Convergence { max_sweeps });
    }
    let f = SpanFunction::new(ground.clone(), values)?;
    let report = in_t(delta, &f)?;
    if !report.in_t {
        let set = report
            .slack_witness
            .map(|w| w.set)
            .or(report.cover_witness.map(|w| w.set))
            .unwrap_or(SubsetMask::EMPTY);
        return Err(Error::NotTight { set });
    }
    Ok(f)
}

/// The Kuratowski function of an element: `h_x(A) = delta(A | {x})`.
/// Always a tight point.
pub fn kuratowski(delta: &FiniteDiversity, x: &str) -> Result<SpanFunction> {
    let i = delta.ground().index(x)?;
    Ok(kuratowski_at(delta, i))
}

/// Index-based variant of [`kuratowski`].
pub fn kuratowski_at(delta: &FiniteDiversity, i: usize) -> SpanFunction {
    let ground = delta.ground().clone();
    let values: Vec<Rat> = ground
        .masks()
        .map(|m| delta.value(m.with(i)).clone())
        .collect();
    let f = SpanFunction { ground, values };
    debug_assert!(in_t(delta, &f).map(|r| r.in_t).unwrap_or(false));
    f
}

/// All Kuratowski functions of the elements of `y`, in element order.
pub fn kuratowski_family(delta: &FiniteDiversity, y: SubsetMask) -> Vec<SpanFunction> {
    y.iter().map(|i| kuratowski_at(delta, i)).collect()
}

fn dedupe<'a>(funcs: &[&'a SpanFunction]) -> Vec<&'a SpanFunction> {
    let mut out: Vec<&SpanFunction> = Vec::new();
    for f in funcs {
        if !out.iter().any(|g| g.values() == f.values()) {
            out.push(f);
        }
    }
    out
}

fn min_weights(ground: &GroundSet, funcs: &[&SpanFunction]) -> Vec<Rat> {
    let mut w = funcs[0].values().to_vec();
    for f in &funcs[1..] {
        for m in ground.masks() {
            if f.value(m) < &w[m.index()] {
                w[m.index()] = f.value(m).clone();
            }
        }
    }
    w
}

/// The tight-span diversity of a finite family of tight points:
/// `delta_T(F) = max_Y [delta(Y) - Phi_F(Y)]` with the family's pointwise
/// minimum as cover weights. The family is treated as a set (duplicates
/// dropped); every member is re-certified tight.
pub fn delta_t(delta: &FiniteDiversity, funcs: &[&SpanFunction]) -> Result<Rat> {
    if funcs.is_empty() {
        return Err(Error::Parameter("delta_T of an empty family".into()));
    }
    let family = dedupe(funcs);
    for f in &family {
        ensure_same_ground(delta.ground(), f.ground())?;
        let report = in_t(delta, f)?;
        if !report.in_t {
            let set = report
                .slack_witness
                .map(|w| w.set)
                .or(report.cover_witness.map(|w| w.set))
                .unwrap_or(SubsetMask::EMPTY);
            return Err(Error::NotTight { set });
        }
    }
    Ok(delta_t_certified(delta, &family))
}

/// `delta_T` for families already known to be tight and deduplicated.
pub(crate) fn delta_t_certified(delta: &FiniteDiversity, family: &[&SpanFunction]) -> Rat {
    let ground = delta.ground();
    let weights = min_weights(ground, family);
    let phi = phi_table(ground.len(), &weights, None);
    let mut best = Rat::zero(); // Y = empty
    for y in ground.masks() {
        let cand = delta.value(y) - phi[y.index()].as_ref().expect("no exclusions");
        if cand > best {
            best = cand;
        }
    }
    best
}

/// `delta_T(F)` computed through a distinguished member:
/// `max_Y [f(Y) - Phi_{F minus f}(Y)]`. Independent of the choice of f;
/// used as a cross-formula check against [`delta_t`].
pub fn delta_t_via_distinguished(
    delta: &FiniteDiversity,
    f: &SpanFunction,
    rest: &[&SpanFunction],
) -> Result<Rat> {
    ensure_same_ground(delta.ground(), f.ground())?;
    let report = in_t(delta, f)?;
    if !report.in_t {
        return Err(Error::NotTight {
            set: SubsetMask::EMPTY,
        });
    }
    let rest = dedupe(rest);
    let rest: Vec<&SpanFunction> = rest
        .into_iter()
        .filter(|g| g.values() != f.values())
        .collect();
    if rest.is_empty() {
        return Ok(Rat::zero());
    }
    for g in &rest {
        let report = in_t(delta, g)?;
        if !report.in_t {
            return Err(Error::NotTight {
                set: SubsetMask::EMPTY,
            });
        }
    }
    let ground = delta.ground();
    let weights = min_weights(ground, &rest);
    let phi = phi_table(ground.len(), &weights, None);
    let mut best = Rat::zero();
    for y in ground.masks() {
        let cand = f.value(y) - phi[y.index()].as_ref().expect("no exclusions");
        if cand > best {
            best = cand;
        }
    }
    Ok(best)
}
