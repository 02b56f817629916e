//! Constructive hyperconvexity: a common tight point within prescribed
//! radii of given families.

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tightspan::{
    delta_t, delta_t_certified, in_t, min_weights, minimize_to_tight, phi_table, SpanFunction,
};

/// A family of tight points together with a radius bound for it.
#[derive(Clone, Debug)]
pub struct Constraint {
    family: Vec<SpanFunction>,
    radius: Rat,
}

impl Constraint {
    pub fn new(family: Vec<SpanFunction>, radius: Rat) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::Parameter("constraint family is empty".into()));
        }
        Ok(Constraint { family, radius })
    }

    pub fn family(&self) -> &[SpanFunction] {
        &self.family
    }

    pub fn radius(&self) -> &Rat {
        &self.radius
    }
}

/// Finds a tight point `g` with `delta_T(F_i + {g}) <= r_i` for every
/// constraint `(F_i, r_i)`.
///
/// Requires the premise that for every sub-list of distinct constraints
/// the radii sum to at least `delta_T` of the union of the families; the
/// premise is checked exhaustively and violations report the offending
/// sub-list. The witness candidate is
/// `omega(A) = min(max delta, min_i [r_i + Phi_{F_i}(A)])`, which the
/// premise places in `P_X`; minimizing it yields `g`.
pub fn hyperconvex_extension(
    delta: &FiniteDiversity,
    constraints: &[Constraint],
) -> Result<SpanFunction> {
    let ground = delta.ground();
    let n = ground.len();
    for c in constraints {
        for f in c.family() {
            if f.ground() != ground {
                return Err(Error::GroundMismatch);
            }
            let report = in_t(delta, f)?;
            if !report.in_t {
                let set = report
                    .slack_witness
                    .map(|w| w.set)
                    .or(report.cover_witness.map(|w| w.set))
                    .unwrap_or_default();
                return Err(Error::NotTight { set });
            }
        }
    }

    // Premise: every nonempty sub-list of distinct constraints has radii
    // summing to at least delta_T of its pooled family.
    let m = constraints.len();
    if m > 16 {
        return Err(Error::SizeCap { n: m, cap: 16 });
    }
    for chosen in 1..(1u32 << m) {
        let sublist: Vec<usize> = (0..m).filter(|i| chosen >> i & 1 == 1).collect();
        let pooled: Vec<&SpanFunction> = sublist
            .iter()
            .flat_map(|&i| constraints[i].family().iter())
            .collect();
        let required = delta_t(delta, &pooled)?;
        let got: Rat = sublist.iter().map(|&i| constraints[i].radius()).sum();
        if got < required {
            return Err(Error::Premise {
                sublist,
                required: required.to_string(),
                got: got.to_string(),
            });
        }
    }

    // omega: the infimum over the constraint menu, floored nowhere below
    // zero and defaulting to the global maximum when no constraint helps.
    let default = delta.max_value();
    let mut omega: Vec<Rat> = ground
        .masks()
        .map(|mask| if mask.is_empty() { Rat::zero() } else { default.clone() })
        .collect();
    for c in constraints {
        let refs: Vec<&SpanFunction> = c.family().iter().collect();
        let weights = min_weights(ground, &refs);
        let phi = phi_table(n, &weights, None);
        for mask in ground.masks() {
            if mask.is_empty() {
                continue;
            }
            let cand = c.radius() + phi[mask.index()].as_ref().expect("no exclusions");
            if cand < omega[mask.index()] {
                omega[mask.index()] = cand;
            }
        }
    }

    let start = SpanFunction::new(ground.clone(), omega)?;
    let g = minimize_to_tight(delta, &start)?;

    // Postcondition check: the extension point respects every radius.
    for (i, c) in constraints.iter().enumerate() {
        let mut family: Vec<&SpanFunction> = c.family().iter().collect();
        family.push(&g);
        let family = crate::tightspan::dedupe(&family);
        let got = delta_t_certified(delta, &family);
        if got > *c.radius() {
            return Err(Error::Premise {
                sublist: vec![i],
                required: got.to_string(),
                got: c.radius().to_string(),
            });
        }
    }
    Ok(g)
}
