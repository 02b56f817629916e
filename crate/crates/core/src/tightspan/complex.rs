//! Closed-form tight span for three-point diversities.
//!
//! On three points the span projects onto singleton coordinates
//! (f1, f2, f3) as a cell complex: three segments reaching out to the
//! Kuratowski vertices plus a solid tetrahedral cell that opens up when
//! the triple value exceeds half the pair perimeter. The pair and triple
//! coordinates of a tight point are determined by the singleton ones.

use crate::error::{Error, Result};
use crate::ground::SubsetMask;
use crate::rat::Rat;
use crate::tightspan::SpanFunction;

/// Vertex data of the three-point complex.
///
/// `v[i]` are the external vertices (images of the ground elements) and
/// `u[0]..u[3]` the internal ones; `beta` is the spindle parameter
/// `max(2*d123 - d12 - d13 - d23, 0)`. When beta is zero the four internal
/// vertices coincide and the complex is the classical metric tripod.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePointComplex {
    pub d12: Rat,
    pub d13: Rat,
    pub d23: Rat,
    pub d123: Rat,
    pub beta: Rat,
    pub v: [[Rat; 3]; 3],
    pub u: [[Rat; 3]; 4],
}

/// Builds the complex, validating that the four values define a diversity
/// on three points: positive pairs, pairwise triangle inequalities, and
/// max pair <= d123 <= (sum of the two pairs meeting each point).
pub fn three_point_complex(d12: Rat, d13: Rat, d23: Rat, d123: Rat) -> Result<ThreePointComplex> {
    let fail = |msg: String| Err(Error::Parameter(msg));
    for (name, v) in [("d12", &d12), ("d13", &d13), ("d23", &d23)] {
        if !v.is_positive() {
            return fail(format!("{name} = {v} must be positive"));
        }
    }
    let tri = [
        ("d12 <= d13 + d23", &d12, &d13 + &d23),
        ("d13 <= d12 + d23", &d13, &d12 + &d23),
        ("d23 <= d12 + d13", &d23, &d12 + &d13),
    ];
    for (name, lhs, rhs) in tri {
        if *lhs > rhs {
            return fail(format!("triangle inequality {name} fails ({lhs} > {rhs})"));
        }
    }
    let max_pair = d12.clone().max(d13.clone()).max(d23.clone());
    if d123 < max_pair {
        return fail(format!("monotonicity fails: d123 = {d123} < max pair {max_pair}"));
    }
    let caps = [
        ("d123 <= d12 + d13", &d12 + &d13),
        ("d123 <= d12 + d23", &d12 + &d23),
        ("d123 <= d13 + d23", &d13 + &d23),
    ];
    for (name, cap) in caps {
        if d123 > cap {
            return fail(format!("{name} fails ({d123} > {cap})"));
        }
    }

    let perimeter = &d12 + &d13 + &d23;
    let half = Rat::frac(1, 2) * &perimeter;
    let beta = (Rat::from_int(2) * &d123 - &perimeter).max(Rat::zero());
    // The tetrahedral cell sits at triple level d123 when the triple value
    // bites (2*d123 >= perimeter); otherwise the complex is the metric
    // tripod whose center is the Gromov-product point, at level half the
    // perimeter.
    let level = d123.clone().max(half);
    let u0 = [&level - &d23, &level - &d13, &level - &d12];
    let mut u = [u0.clone(), u0.clone(), u0.clone(), u0];
    for i in 0..3 {
        u[i + 1][i] = &u[i + 1][i] - &beta;
    }
    let v = [
        [Rat::zero(), d12.clone(), d13.clone()],
        [d12.clone(), Rat::zero(), d23.clone()],
        [d13.clone(), d23.clone(), Rat::zero()],
    ];
    Ok(ThreePointComplex {
        d12,
        d13,
        d23,
        d123,
        beta,
        v,
        u,
    })
}

/// Free-function form of [`ThreePointComplex::membership`].
pub fn three_point_membership(c: &ThreePointComplex, f: &SpanFunction) -> Result<bool> {
    c.membership(f)
}

fn sub3(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot3(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross_is_zero(a: &[Rat; 3], b: &[Rat; 3]) -> bool {
    (&a[1] * &b[2] - &a[2] * &b[1]).is_zero()
        && (&a[2] * &b[0] - &a[0] * &b[2]).is_zero()
        && (&a[0] * &b[1] - &a[1] * &b[0]).is_zero()
}

/// Exact point-on-segment test via collinearity plus betweenness.
fn on_segment(p: &[Rat; 3], q: &[Rat; 3], x: &[Rat; 3]) -> bool {
    let d = sub3(q, p);
    let w = sub3(x, p);
    if !cross_is_zero(&d, &w) {
        return false;
    }
    let t = dot3(&w, &d);
    let len2 = dot3(&d, &d);
    if len2.is_zero() {
        return w.iter().all(|c| c.is_zero());
    }
    !t.is_negative() && t <= len2
}

impl ThreePointComplex {
    /// Whether (f1, f2, f3) lies in the cell complex.
    pub fn contains_point(&self, p: &[Rat; 3]) -> bool {
        // Solid tetrahedron on u0..u3: p = u0 - s with s >= 0 and
        // s1+s2+s3 <= beta (degenerate to the single point u0 at beta 0).
        let s = sub3(&self.u[0], p);
        if s.iter().all(|c| !c.is_negative()) {
            let total = &s[0] + &s[1] + &s[2];
            if total <= self.beta {
                return true;
            }
        }
        (0..3).any(|i| on_segment(&self.u[i + 1], &self.v[i], p))
    }

    /// Full membership test: the singleton projection lies in the complex
    /// and the pair/triple coordinates take their forced values
    /// `f_jk = max(d_jk, d123 - f_i)`, `f_123 = d123`.
    pub fn membership(&self, f: &SpanFunction) -> Result<bool> {
        if f.ground().len() != 3 {
            return Err(Error::Input(format!(
                "three-point membership needs a 3-element ground set, got {}",
                f.ground().len()
            )));
        }
        let fv = |bits: u32| f.value(SubsetMask(bits)).clone();
        let p = [fv(0b001), fv(0b010), fv(0b100)];
        if fv(0b111) != self.d123 {
            return Ok(false);
        }
        let pairs_ok = fv(0b110) == self.d23.clone().max(&self.d123 - &p[0])
            && fv(0b101) == self.d13.clone().max(&self.d123 - &p[1])
            && fv(0b011) == self.d12.clone().max(&self.d123 - &p[2]);
        if !pairs_ok {
            return Ok(false);
        }
        Ok(self.contains_point(&p))
    }

    /// Extends singleton coordinates to the unique tight candidate with
    /// those values (pair and triple coordinates forced).
    pub fn extend_point(&self, f: &crate::ground::GroundSet, p: &[Rat; 3]) -> Result<SpanFunction> {
        if f.len() != 3 {
            return Err(Error::Input("ground set must have 3 elements".into()));
        }
        let mut values = vec![Rat::zero(); 8];
        values[0b001] = p[0].clone();
        values[0b010] = p[1].clone();
        values[0b100] = p[2].clone();
        values[0b011] = self.d12.clone().max(&self.d123 - &p[2]);
        values[0b101] = self.d13.clone().max(&self.d123 - &p[1]);
        values[0b110] = self.d23.clone().max(&self.d123 - &p[0]);
        values[0b111] = self.d123.clone();
        SpanFunction::new(f.clone(), values)
    }
}
