//! Finite diversities, finite metrics, point sets, and the axiom checker.
//!
//! A diversity assigns an exact rational value to every subset of a finite
//! ground set, vanishing exactly on the empty set and singletons and
//! satisfying the multi-way triangle inequality
//! `value(A|C) <= value(A|B) + value(B|C)` for every nonempty pivot B.
//! Monotonicity under inclusion follows from the axioms but is checked
//! directly on stored data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, SubsetMask, MAX_GROUND};
use crate::rat::Rat;

/// Which verification the axiom checker runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Positivity + monotonicity + the triangle inequality over every
    /// triple of subsets (8^n inequality checks).
    Full,
    /// Positivity + monotonicity + the generating family of triangle
    /// inequalities through a single disjoint pivot element. Witnesses are
    /// restricted to that family.
    Fast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    /// Nonnegativity/vanishing: a value is negative, a small set has a
    /// nonzero value, or a set with at least two elements has value zero.
    #[serde(rename = "positivity")]
    Positivity { set: SubsetMask, value: Rat },
    /// `value(sub) <= value(sup)` fails for `sub` a subset of `sup`.
    #[serde(rename = "monotonicity")]
    Monotonicity {
        sub: SubsetMask,
        sup: SubsetMask,
        sub_value: Rat,
        sup_value: Rat,
    },
    /// `value(A|C) <= value(A|B) + value(B|C)` fails for nonempty B.
    #[serde(rename = "triangle")]
    Triangle {
        a: SubsetMask,
        b: SubsetMask,
        c: SubsetMask,
        lhs: Rat,
        rhs: Rat,
    },
}

impl SubsetMask {
    fn key(&self) -> u32 {
        self.bits()
    }
}

impl serde::Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.key())
    }
}

/// Outcome of an axiom check: `pass` plus the witnesses found (capped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub violations: Vec<AxiomViolation>,
    /// True when the violation list was cut off at the cap.
    pub truncated: bool,
}

const VIOLATION_CAP: usize = 64;

/// Checks the diversity axioms on a raw total map `values[mask]`.
///
/// `values` must have length `2^n`. In `Full` mode the triangle inequality
/// is checked over all triples `(A, B, C)` with `B` nonempty; `(A, C)` and
/// `(C, A)` give the same inequality, so only `A <= C` is scanned.
pub fn check_axioms(ground: &GroundSet, values: &[Rat], mode: CheckMode) -> Result<AxiomReport> {
    let n = ground.len();
    if n > MAX_GROUND {
        return Err(Error::SizeCap { n, cap: MAX_GROUND });
    }
    if values.len() != ground.subset_count() {
        return Err(Error::Input(format!(
            "value map is not total: expected {} entries, got {}",
            ground.subset_count(),
            values.len()
        )));
    }

    let mut violations = Vec::new();
    let mut truncated = false;
    let mut push = |violations: &mut Vec<AxiomViolation>, v: AxiomViolation| -> bool {
        if violations.len() < VIOLATION_CAP {
            violations.push(v);
            true
        } else {
            truncated = true;
            false
        }
    };

    // Positivity / vanishing.
    for m in ground.masks() {
        let v = &values[m.index()];
        let ok = if m.card() <= 1 {
            v.is_zero()
        } else {
            v.is_positive()
        };
        if !ok && !push(&mut violations, AxiomViolation::Positivity {
            set: m,
            value: v.clone(),
        }) {
            break;
        }
    }

    // Monotonicity, one element at a time (implies the general case).
    'mono: for m in ground.masks() {
        for i in 0..n {
            if m.contains(i) {
                continue;
            }
            let sup = m.with(i);
            if values[m.index()] > values[sup.index()]
                && !push(&mut violations, AxiomViolation::Monotonicity {
                    sub: m,
                    sup,
                    sub_value: values[m.index()].clone(),
                    sup_value: values[sup.index()].clone(),
                })
            {
                break 'mono;
            }
        }
    }

    // Triangle inequality.
    match mode {
        CheckMode::Full => {
            let count = ground.subset_count() as u32;
            'full: for a in 0..count {
                for b in 1..count {
                    for c in a..count {
                        let lhs = &values[(a | c) as usize];
                        let rhs = &values[(a | b) as usize] + &values[(b | c) as usize];
                        if *lhs > rhs
                            && !push(&mut violations, AxiomViolation::Triangle {
                                a: SubsetMask(a),
                                b: SubsetMask(b),
                                c: SubsetMask(c),
                                lhs: lhs.clone(),
                                rhs,
                            })
                        {
                            break 'full;
                        }
                    }
                }
            }
        }
        CheckMode::Fast => {
            // value(A|{b}|C) <= value(A|{b}) + value({b}|C) for pairwise
            // disjoint A, {b}, C.
            'fast: for pivot in 0..n {
                let b = SubsetMask::singleton(pivot);
                let rest = ground.full_mask().diff(b);
                for a in rest.subsets() {
                    for c in rest.diff(a).subsets() {
                        let lhs = &values[a.union(b).union(c).index()];
                        let rhs =
                            &values[a.union(b).index()] + &values[b.union(c).index()];
                        if *lhs > rhs
                            && !push(&mut violations, AxiomViolation::Triangle {
                                a: a.union(b),
                                b,
                                c,
                                lhs: lhs.clone(),
                                rhs,
                            })
                        {
                            break 'fast;
                        }
                    }
                }
            }
        }
    }

    Ok(AxiomReport {
        pass: violations.is_empty(),
        violations,
        truncated,
    })
}

/// Re-evaluates a reported violation against the raw values. Used before
/// printing witnesses.
pub fn verify_violation(values: &[Rat], v: &AxiomViolation) -> bool {
    match v {
        AxiomViolation::Positivity { set, value } => {
            values[set.index()] == *value
                && if set.card() <= 1 {
                    !value.is_zero()
                } else {
                    !value.is_positive()
                }
        }
        AxiomViolation::Monotonicity { sub, sup, .. } => {
            sub.is_subset_of(*sup) && values[sub.index()] > values[sup.index()]
        }
        AxiomViolation::Triangle { a, b, c, .. } => {
            !b.is_empty()
                && values[a.union(*c).index()]
                    > &values[a.union(*b).index()] + &values[b.union(*c).index()]
        }
    }
}

/// A finite diversity: ground set plus an exact value for every subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDiversity {
    ground: GroundSet,
    values: Vec<Rat>,
}

impl FiniteDiversity {
    /// Validates the axioms (in the given mode) and wraps the map.
    pub fn new(ground: GroundSet, values: Vec<Rat>, mode: CheckMode) -> Result<Self> {
        let report = check_axioms(&ground, &values, mode)?;
        if !report.pass {
            return Err(Error::Axioms { report });
        }
        Ok(FiniteDiversity { ground, values })
    }

    /// For constructors whose output is a diversity by theorem. Debug
    /// builds still run the fast checker.
    pub(crate) fn trusted(ground: GroundSet, values: Vec<Rat>) -> Self {
        debug_assert!(
            check_axioms(&ground, &values, CheckMode::Fast)
                .map(|r| r.pass)
                .unwrap_or(false),
            "constructor produced an invalid diversity"
        );
        FiniteDiversity { ground, values }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn value(&self, m: SubsetMask) -> &Rat {
        &self.values[m.index()]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn max_value(&self) -> Rat {
        self.values.iter().max().cloned().unwrap_or_else(Rat::zero)
    }
}

/// A finite metric: symmetric positive off-diagonal matrix with zero
/// diagonal satisfying the triangle inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetric {
    ground: GroundSet,
    dist: Vec<Vec<Rat>>,
}

impl FiniteMetric {
    pub fn new(ground: GroundSet, dist: Vec<Vec<Rat>>) -> Result<Self> {
        let n = ground.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Input(format!("distance matrix is not {n}x{n}")));
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::Input(format!(
                    "nonzero diagonal at `{}`",
                    ground.label(i)
                )));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::Input("matrix is not symmetric".into()));
                }
                if i != j && !dist[i][j].is_positive() {
                    return Err(Error::Input(format!(
                        "distance between `{}` and `{}` is not positive",
                        ground.label(i),
                        ground.label(j)
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::Input(format!(
                            "triangle inequality fails on (`{}`,`{}`,`{}`)",
                            ground.label(i),
                            ground.label(j),
                            ground.label(k)
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { ground, dist })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rat {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.dist
    }
}

/// A finite labelled point set in Q^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ground: GroundSet,
    coords: Vec<Vec<Rat>>,
}

impl PointSet {
    pub fn new(ground: GroundSet, coords: Vec<Vec<Rat>>) -> Result<Self> {
        if coords.len() != ground.len() {
            return Err(Error::Input("one coordinate vector per element required".into()));
        }
        let dim = coords.first().map(|c| c.len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::Input("coordinate dimension must be at least 1".into()));
        }
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::Input("coordinate vectors have mixed dimensions".into()));
        }
        Ok(PointSet { ground, coords })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn dim(&self) -> usize {
        self.coords[0].len()
    }

    pub fn coords(&self) -> &[Vec<Rat>] {
        &self.coords
    }
}

/// Restriction of a diversity to pairs. Always a metric; asserted anyway.
pub fn induced_metric(delta: &FiniteDiversity) -> FiniteMetric {
    let n = delta.n();
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = delta
                .value(SubsetMask::singleton(i).union(SubsetMask::singleton(j)))
                .clone();
            dist[i][j] = v.clone();
            dist[j][i] = v;
        }
    }
    FiniteMetric::new(delta.ground().clone(), dist)
        .expect("pair restriction of a diversity is a metric")
}

/// Diameter diversity of a metric: the value of a set is its largest
/// pairwise distance.
pub fn diameter_diversity(d: &FiniteMetric) -> FiniteDiversity {
    let ground = d.ground().clone();
    let mut values = vec![Rat::zero(); ground.subset_count()];
    for m in ground.masks() {
        if m.card() < 2 {
            continue;
        }
        let mut best = Rat::zero();
        let elems: Vec<usize> = m.iter().collect();
        for (k, &i) in elems.iter().enumerate() {
            for &j in &elems[k + 1..] {
                if *d.dist(i, j) > best {
                    best = d.dist(i, j).clone();
                }
            }
        }
        values[m.index()] = best;
    }
    FiniteDiversity::trusted(ground, values)
}

/// L1 diversity of a point set: sum over coordinates of the coordinate
/// range within the set.
pub fn l1_diversity(p: &PointSet) -> FiniteDiversity {
    let ground = p.ground().clone();
    let mut values = vec![Rat::zero(); ground.subset_count()];
    for m in ground.masks() {
        if m.card() < 2 {
            continue;
        }
        let mut total = Rat::zero();
        for coord in 0..p.dim() {
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            for i in m.iter() {
                let v = &p.coords()[i][coord];
                if lo.as_ref().map_or(true, |l| v < l) {
                    lo = Some(v.clone());
                }
                if hi.as_ref().map_or(true, |h| v > h) {
                    hi = Some(v.clone());
                }
            }
            total += hi.unwrap() - lo.unwrap();
        }
        values[m.index()] = total;
    }
    FiniteDiversity::trusted(ground, values)
}

/// Truncation at order k: the value of A becomes the maximum value over
/// subsets of A with at most k elements. Requires k >= 2.
pub fn truncate(delta: &FiniteDiversity, k: usize) -> Result<FiniteDiversity> {
    if k < 2 {
        return Err(Error::Parameter(format!("truncation order must be >= 2, got {k}")));
    }
    let ground = delta.ground().clone();
    let n = ground.len();
    let mut values = vec![Rat::zero(); ground.subset_count()];
    // best(A) = max over i in A of best(A \ {i}), plus value(A) itself when
    // |A| <= k; masks ascend, so strict subsets are already done.
    for m in ground.masks() {
        if m.is_empty() {
            continue;
        }
        let mut best = Rat::zero();
        if m.card() as usize <= k {
            best = delta.value(m).clone();
        }
        for i in 0..n {
            if m.contains(i) {
                let sub = m.diff(SubsetMask::singleton(i));
                if values[sub.index()] > best {
                    best = values[sub.index()].clone();
                }
            }
        }
        values[m.index()] = best;
    }
    Ok(FiniteDiversity::trusted(ground, values))
}
