//! Families, elements, and the defining multiplication.
//!
//! The semigroup lives on triples `(i, j, [p))` where `i, j` are integers
//! and `[p) = {x in omega : x >= p}` is a tail set drawn from an
//! omega-closed family of nonempty inductive subsets of omega. Every
//! nonempty inductive subset of omega is a tail, so a set is stored solely
//! by its minimum and all set algebra reduces to shifts and maxima on
//! minima. The set-based evaluator in [`crate::oracle`] exists precisely to
//! guard that reduction.
//!
//! Families are canonicalized at the boundary: the common offset
//! `n0 = min(union of the family)` is stripped on input and retained only
//! for reporting, so internal code may always assume `[0)` belongs to the
//! family.
//!
//! Index arithmetic is checked throughout; the mathematics runs over
//! unbounded integers, so hitting the `i64` range is a reported error,
//! never a silent wrap.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors from family validation and element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("family is empty")]
    EmptyFamily,

    #[error("duplicate minimum {0} in family description")]
    DuplicateMin(i64),

    #[error("family minima must be nonnegative, got {0}")]
    NegativeMin(i64),

    #[error(
        "family is not omega-closed: [{f1}) \u{2229} (-{n}+[{f2})) = [{missing}) is not a member"
    )]
    NotOmegaClosed { f1: i64, f2: i64, n: i64, missing: i64 },

    #[error("tail minimum must be nonnegative, got {0}")]
    NegativeTail(i64),

    #[error("layer [{p}) does not belong to the family (bound k = {k})")]
    InvalidLayer { p: i64, k: i64 },

    #[error("index arithmetic overflowed the representable range")]
    Overflow,

    #[error("window bounds must be nonnegative")]
    InvalidWindow,
}

fn add(a: i64, b: i64) -> Result<i64, CoreError> {
    a.checked_add(b).ok_or(CoreError::Overflow)
}

fn sub(a: i64, b: i64) -> Result<i64, CoreError> {
    a.checked_sub(b).ok_or(CoreError::Overflow)
}

/// Upper bound of a family: either the largest tail minimum or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyBound {
    Finite(i64),
    Infinite,
}

impl FamilyBound {
    pub fn contains(self, p: i64) -> bool {
        match self {
            FamilyBound::Finite(k) => (0..=k).contains(&p),
            FamilyBound::Infinite => p >= 0,
        }
    }
}

/// A canonicalized omega-closed family of tail sets.
///
/// `Finite(k)` denotes `{[0), [1), ..., [k)}`; `Infinite` denotes
/// `{[n) : n in omega}`. `offset` is the minimum removed during
/// normalization, kept for round-trip reporting only: every computation
/// works in canonical coordinates where `[0)` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    k: FamilyBound,
    offset: i64,
}

impl FamilySpec {
    pub fn finite(k: i64) -> Result<Self, CoreError> {
        if k < 0 {
            return Err(CoreError::NegativeMin(k));
        }
        Ok(FamilySpec { k: FamilyBound::Finite(k), offset: 0 })
    }

    pub fn infinite() -> Self {
        FamilySpec { k: FamilyBound::Infinite, offset: 0 }
    }

    pub fn k(&self) -> FamilyBound {
        self.k
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Largest tail minimum, or `None` for the infinite family.
    pub fn finite_bound(&self) -> Option<i64> {
        match self.k {
            FamilyBound::Finite(k) => Some(k),
            FamilyBound::Infinite => None,
        }
    }

    pub fn contains_layer(&self, p: i64) -> bool {
        self.k.contains(p)
    }

    /// Effective layer bound for a window capped at `pcap`.
    pub fn layer_cap(&self, pcap: i64) -> i64 {
        match self.k {
            FamilyBound::Finite(k) => k.min(pcap),
            FamilyBound::Infinite => pcap,
        }
    }

    pub fn check_element(&self, e: Element) -> Result<(), CoreError> {
        if self.contains_layer(e.p()) {
            Ok(())
        } else {
            Err(CoreError::InvalidLayer {
                p: e.p(),
                k: self.finite_bound().unwrap_or(i64::MAX),
            })
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FamilySpec", 2)?;
        match self.k {
            FamilyBound::Finite(k) => s.serialize_field("k", &k)?,
            FamilyBound::Infinite => s.serialize_field("k", "inf")?,
        }
        s.serialize_field("offset", &self.offset)?;
        s.end()
    }
}

/// Minimum of a tail set `[p)`; always nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailMin(i64);

impl TailMin {
    pub fn new(p: i64) -> Result<Self, CoreError> {
        if p < 0 {
            Err(CoreError::NegativeTail(p))
        } else {
            Ok(TailMin(p))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

/// An element `(i, j, [p))` of the semigroup.
///
/// The derived ordering is lexicographic in `(i, j, p)`, which is the
/// enumeration and report order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    i: i64,
    j: i64,
    p: TailMin,
}

impl Element {
    pub fn new(i: i64, j: i64, p: i64) -> Result<Self, CoreError> {
        Ok(Element { i, j, p: TailMin::new(p)? })
    }

    pub fn i(&self) -> i64 {
        self.i
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn p(&self) -> i64 {
        self.p.get()
    }

    /// Idempotency is equivalent to `i = j`; `mul(e, e) = e` re-checks this.
    pub fn is_idempotent(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},[{}))", self.i, self.j, self.p.get())
    }
}

/// Raw, unvalidated description of a family: an explicit list of tail
/// minima, or all tails from some minimum on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawFamily {
    Mins(Vec<i64>),
    InfiniteFrom(i64),
}

/// Validate a raw family and normalize it to canonical coordinates.
///
/// A family of tails is omega-closed exactly when its set of minima is a
/// contiguous integer interval: `[a) \u{2229} (-n + [b)) = [max(a, b - n))`
/// sweeps every value from `a` up to `max(a, b)` as `n` ranges over omega,
/// so a gap yields a missing member, and conversely contiguity closes the
/// family under the operation. On a gap the error carries a concrete
/// witness pair and shift.
pub fn validate_family(raw: &RawFamily) -> Result<FamilySpec, CoreError> {
    match raw {
        RawFamily::InfiniteFrom(n) => {
            if *n < 0 {
                return Err(CoreError::NegativeMin(*n));
            }
            Ok(FamilySpec { k: FamilyBound::Infinite, offset: *n })
        }
        RawFamily::Mins(mins) => {
            if mins.is_empty() {
                return Err(CoreError::EmptyFamily);
            }
            let mut sorted = mins.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(CoreError::DuplicateMin(w[0]));
                }
            }
            if sorted[0] < 0 {
                return Err(CoreError::NegativeMin(sorted[0]));
            }
            for w in sorted.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b > a + 1 {
                    // Shift [b) down until it lands in the gap just above [a).
                    return Err(CoreError::NotOmegaClosed {
                        f1: a,
                        f2: b,
                        n: b - a - 1,
                        missing: a + 1,
                    });
                }
            }
            let offset = sorted[0];
            let k = sorted[sorted.len() - 1] - offset;
            Ok(FamilySpec { k: FamilyBound::Finite(k), offset })
        }
    }
}

/// Multiply two elements.
///
/// In tail-minimum form the defining operation becomes, for `j_a <= i_b`,
/// `(i_a - j_a + i_b, j_b, [max(j_a - i_b + p_a, p_b)))`, and symmetrically
/// for `j_a >= i_b`; the branches agree when `j_a = i_b`. The resulting
/// minimum never exceeds `max(p_a, p_b)`, so products stay inside the
/// family.
pub fn mul(a: Element, b: Element, fam: FamilySpec) -> Result<Element, CoreError> {
    fam.check_element(a)?;
    fam.check_element(b)?;
    if a.j <= b.i {
        let i = add(sub(a.i, a.j)?, b.i)?;
        let shifted = add(sub(a.j, b.i)?, a.p())?;
        Element::new(i, b.j, shifted.max(b.p()))
    } else {
        let j = add(sub(a.j, b.i)?, b.j)?;
        let shifted = add(sub(b.i, a.j)?, b.p())?;
        Element::new(a.i, j, a.p().max(shifted))
    }
}

/// Inversion: `(i, j, [p)) -> (j, i, [p))`.
pub fn inv(a: Element) -> Element {
    Element { i: a.j, j: a.i, p: a.p }
}

/// All elements with `|i|, |j| <= w` and `0 <= p <= min(k, pcap)`, in
/// lexicographic `(i, j, p)` order.
pub fn enumerate_window(
    w: i64,
    pcap: i64,
    fam: FamilySpec,
    idempotents_only: bool,
) -> Vec<Element> {
    if w < 0 || pcap < 0 {
        return Vec::new();
    }
    let pmax = fam.layer_cap(pcap);
    let mut out = Vec::new();
    for i in -w..=w {
        for j in -w..=w {
            if idempotents_only && i != j {
                continue;
            }
            for p in 0..=pmax {
                out.push(Element { i, j, p: TailMin(p) });
            }
        }
    }
    out
}

/// Embed an element of the omega-indexed semigroup into the corner at
/// `(k0, k0, [0))`: `(i, j, [p)) -> (i + k0, j + k0, [p))` with `i, j >= 0`.
/// The induced map is an isomorphism onto `{(i, j, [p)) : i, j >= k0}`.
pub fn corner_embed(k0: i64, i: i64, j: i64, p: i64) -> Result<Element, CoreError> {
    if i < 0 || j < 0 {
        return Err(CoreError::InvalidWindow);
    }
    Element::new(add(i, k0)?, add(j, k0)?, p)
}

/// Embed a pair from the extended bicyclic semigroup into the layer with
/// fixed third coordinate `[p)`.
pub fn layer_embed(i: i64, j: i64, p: i64) -> Result<Element, CoreError> {
    Element::new(i, j, p)
}

/// The extended bicyclic operation on bare index pairs.
pub fn bz_mul(a: (i64, i64), b: (i64, i64)) -> Result<(i64, i64), CoreError> {
    if a.1 <= b.0 {
        Ok((add(sub(a.0, a.1)?, b.0)?, b.1))
    } else {
        Ok((a.0, add(sub(a.1, b.0)?, b.1)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: i64, j: i64, p: i64) -> Element {
        Element::new(i, j, p).unwrap()
    }

    #[test]
    fn validate_contiguous_from_zero() {
        let fam = validate_family(&RawFamily::Mins(vec![0, 1, 2])).unwrap();
        assert_eq!(fam.k(), FamilyBound::Finite(2));
        assert_eq!(fam.offset(), 0);
    }

    #[test]
    fn validate_contiguous_shifted() {
        let fam = validate_family(&RawFamily::Mins(vec![3, 4, 5])).unwrap();
        assert_eq!(fam.k(), FamilyBound::Finite(2));
        assert_eq!(fam.offset(), 3);
    }

    #[test]
    fn validate_gap_rejected_with_witness() {
        let err = validate_family(&RawFamily::Mins(vec![0, 2])).unwrap_err();
        assert_eq!(
            err,
            CoreError::NotOmegaClosed { f1: 0, f2: 2, n: 1, missing: 1 }
        );
    }

    #[test]
    fn validate_empty_and_duplicates() {
        assert_eq!(
            validate_family(&RawFamily::Mins(vec![])).unwrap_err(),
            CoreError::EmptyFamily
        );
        assert_eq!(
            validate_family(&RawFamily::Mins(vec![1, 1])).unwrap_err(),
            CoreError::DuplicateMin(1)
        );
    }

    #[test]
    fn validate_infinite_from() {
        let fam = validate_family(&RawFamily::InfiniteFrom(2)).unwrap();
        assert_eq!(fam.k(), FamilyBound::Infinite);
        assert_eq!(fam.offset(), 2);
    }

    #[test]
    fn mul_examples() {
        let f3 = FamilySpec::finite(3).unwrap();
        let f0 = FamilySpec::finite(0).unwrap();
        let f2 = FamilySpec::finite(2).unwrap();
        // identity-layer idempotent absorbs from the left once k < i
        assert_eq!(mul(el(0, 0, 0), el(1, 2, 3), f3).unwrap(), el(1, 2, 3));
        assert_eq!(mul(el(1, 2, 0), el(2, 1, 0), f0).unwrap(), el(1, 1, 0));
        assert_eq!(mul(el(2, 3, 1), el(1, 1, 2), f2).unwrap(), el(2, 3, 1));
        assert_eq!(mul(el(0, 0, 0), el(0, 0, 0), f0).unwrap(), el(0, 0, 0));
    }

    #[test]
    fn mul_branch_agreement_at_junction() {
        // Both branch formulas coincide when j_a = i_b.
        let fam = FamilySpec::finite(3).unwrap();
        for ia in -2..=2 {
            for jb in -2..=2 {
                for pa in 0..=3 {
                    for pb in 0..=3 {
                        let a = el(ia, 1, pa);
                        let b = el(1, jb, pb);
                        let left = el(ia, jb, pa.max(pb));
                        assert_eq!(mul(a, b, fam).unwrap(), left);
                    }
                }
            }
        }
    }

    #[test]
    fn mul_rejects_foreign_layer() {
        let fam = FamilySpec::finite(1).unwrap();
        assert!(matches!(
            mul(el(0, 0, 2), el(0, 0, 0), fam),
            Err(CoreError::InvalidLayer { p: 2, k: 1 })
        ));
    }

    #[test]
    fn mul_overflow_is_reported() {
        let fam = FamilySpec::infinite();
        let a = el(i64::MAX - 1, 0, 0);
        let b = el(i64::MAX - 1, 0, 0);
        assert_eq!(mul(a, b, fam).unwrap_err(), CoreError::Overflow);
    }

    #[test]
    fn inv_examples() {
        let fam = FamilySpec::finite(2).unwrap();
        assert_eq!(inv(el(3, -2, 1)), el(-2, 3, 1));
        assert_eq!(inv(el(5, 5, 2)), el(5, 5, 2));
        let a = el(3, -2, 1);
        assert_eq!(inv(inv(a)), a);
        // a a^-1 a = a and a^-1 a a^-1 = a^-1
        let lhs = mul(mul(a, inv(a), fam).unwrap(), a, fam).unwrap();
        assert_eq!(lhs, a);
        let rhs = mul(mul(inv(a), a, fam).unwrap(), inv(a), fam).unwrap();
        assert_eq!(rhs, inv(a));
    }

    #[test]
    fn idempotency_matches_multiplication() {
        let fam = FamilySpec::finite(1).unwrap();
        assert!(el(2, 2, 1).is_idempotent());
        assert!(!el(1, 2, 0).is_idempotent());
        assert_eq!(mul(el(1, 2, 0), el(1, 2, 0), fam).unwrap(), el(1, 1, 0));
        for e in enumerate_window(2, 1, fam, false) {
            assert_eq!(e.is_idempotent(), mul(e, e, fam).unwrap() == e);
        }
    }

    #[test]
    fn window_counts() {
        let f0 = FamilySpec::finite(0).unwrap();
        let f1 = FamilySpec::finite(1).unwrap();
        assert_eq!(enumerate_window(0, 0, f0, true), vec![el(0, 0, 0)]);
        assert_eq!(enumerate_window(1, 1, f1, false).len(), 18);
        assert_eq!(enumerate_window(1, 1, f1, true).len(), 6);
        // lexicographic (i, j, p)
        let win = enumerate_window(1, 1, f1, false);
        let mut sorted = win.clone();
        sorted.sort();
        assert_eq!(win, sorted);
    }

    #[test]
    fn corner_embed_examples() {
        assert_eq!(corner_embed(-3, 0, 1, 2).unwrap(), el(-3, -2, 2));
        assert_eq!(corner_embed(0, 4, 7, 1).unwrap(), el(4, 7, 1));
        assert!(corner_embed(0, -1, 0, 0).is_err());
    }

    #[test]
    fn corner_embed_is_homomorphism_on_window() {
        let fam = FamilySpec::finite(2).unwrap();
        let k0 = -3;
        let mut dom = Vec::new();
        for i in 0..=2 {
            for j in 0..=2 {
                for p in 0..=2 {
                    dom.push((i, j, p));
                }
            }
        }
        for &(i1, j1, p1) in &dom {
            for &(i2, j2, p2) in &dom {
                let a = el(i1, j1, p1);
                let b = el(i2, j2, p2);
                let prod = mul(a, b, fam).unwrap();
                let lhs = corner_embed(k0, prod.i(), prod.j(), prod.p()).unwrap();
                let ea = corner_embed(k0, i1, j1, p1).unwrap();
                let eb = corner_embed(k0, i2, j2, p2).unwrap();
                assert_eq!(lhs, mul(ea, eb, fam).unwrap());
            }
        }
    }

    #[test]
    fn layer_embed_is_homomorphism_and_preserves_layer() {
        let fam = FamilySpec::finite(3).unwrap();
        for p in 0..=3 {
            for i1 in -2..=2_i64 {
                for j1 in -2..=2_i64 {
                    for i2 in -2..=2_i64 {
                        for j2 in -2..=2_i64 {
                            let (bi, bj) = bz_mul((i1, j1), (i2, j2)).unwrap();
                            let lhs = layer_embed(bi, bj, p).unwrap();
                            let rhs = mul(
                                layer_embed(i1, j1, p).unwrap(),
                                layer_embed(i2, j2, p).unwrap(),
                                fam,
                            )
                            .unwrap();
                            assert_eq!(lhs, rhs);
                            assert_eq!(rhs.p(), p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_format() {
        assert_eq!(el(1, 1, 0).to_string(), "(1,1,[0))");
        assert_eq!(el(-2, 3, 1).to_string(), "(-2,3,[1))");
    }
}
