//! Natural partial order, Green's relations, and the band's poset
//! structure.
//!
//! On an inverse semigroup the natural partial order is `s <= t` iff
//! `s = t e` for some idempotent `e`; that existential collapses to the
//! single test `s = t (s^-1 s)`, which is what [`nat_leq`] computes. On
//! idempotents the order has a closed form, `(m,m,[x)) <= (i,i,[p))` iff
//! `m >= i` and `x >= i - m + p`, kept separately because the structural
//! arguments quote it directly.
//!
//! The change of coordinates `(i,i,[p)) -> (-i, -i-p)` turns the idempotent
//! order into the product order on a diagonal strip of the integer plane;
//! that is the engine behind the window model checker in
//! [`crate::reconstruct`] and the Hasse extraction here.

use std::fmt;

use thiserror::Error;

use crate::core::{enumerate_window, inv, mul, CoreError, Element, FamilySpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0} is not idempotent")]
    NotIdempotent(Element),

    #[error("{0} and {1} are not D-related (distinct third coordinates)")]
    NotDRelated(Element, Element),

    #[error("strip point ({0},{1}) lies outside the band strip")]
    InvalidStripPoint(i64, i64),

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Green's relations supported here. `H` is trivial for this semigroup
/// (it is combinatorial), and `D` coincides with equality of the third
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreenRel {
    L,
    R,
    H,
    D,
}

impl fmt::Display for GreenRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GreenRel::L => "L",
            GreenRel::R => "R",
            GreenRel::H => "H",
            GreenRel::D => "D",
        };
        f.write_str(s)
    }
}

/// Order-isomorphic coordinates for idempotents: `(i,i,[p)) -> (-i, -i-p)`.
/// The natural partial order becomes the componentwise order, and the band
/// product becomes the componentwise minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StripPoint {
    pub a: i64,
    pub b: i64,
}

impl StripPoint {
    pub fn layer(&self) -> i64 {
        self.a - self.b
    }

    pub fn meet(self, other: StripPoint) -> StripPoint {
        StripPoint { a: self.a.min(other.a), b: self.b.min(other.b) }
    }

    pub fn leq(self, other: StripPoint) -> bool {
        self.a <= other.a && self.b <= other.b
    }
}

/// Natural partial order on arbitrary elements: `s <= t` iff
/// `s = t (s^-1 s)`.
pub fn nat_leq(s: Element, t: Element, fam: FamilySpec) -> Result<bool, StructureError> {
    let e = mul(inv(s), s, fam)?;
    Ok(mul(t, e, fam)? == s)
}

/// Closed form of the order on idempotents: `(m,m,[x)) <= (i,i,[p))` iff
/// `m >= i` and `x >= i - m + p` (tail inclusion in minima form).
pub fn nat_leq_idem_formula(e: Element, f: Element) -> Result<bool, StructureError> {
    if !e.is_idempotent() {
        return Err(StructureError::NotIdempotent(e));
    }
    if !f.is_idempotent() {
        return Err(StructureError::NotIdempotent(f));
    }
    let (m, x) = (e.i(), e.p());
    let (i, p) = (f.i(), f.p());
    // widen so the sums cannot wrap at the edge of the representable range
    Ok(m >= i && m as i128 + x as i128 >= i as i128 + p as i128)
}

/// Closed forms of Green's relations. They are validated against the
/// definitional computations via `inv`/`mul` by the `green-forms` suite.
pub fn green_related(rel: GreenRel, s: Element, t: Element) -> bool {
    match rel {
        GreenRel::L => s.j() == t.j() && s.p() == t.p(),
        GreenRel::R => s.i() == t.i() && s.p() == t.p(),
        GreenRel::H => s == t,
        GreenRel::D => s.p() == t.p(),
    }
}

/// A witness realizing `D = L o R`: for D-related `s, t` the element
/// `u = (i_t, j_s, [p_s))` satisfies `u^-1 u = s^-1 s` and
/// `u u^-1 = t t^-1`, i.e. `s L u R t`.
pub fn d_witness(s: Element, t: Element) -> Result<Element, StructureError> {
    if !green_related(GreenRel::D, s, t) {
        return Err(StructureError::NotDRelated(s, t));
    }
    Ok(Element::new(t.i(), s.j(), s.p())?)
}

/// Outcome of an order-convexity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    /// `lower < middle < upper` with the endpoints in the set and the
    /// middle outside it.
    Violation { lower: Element, middle: Element, upper: Element },
}

/// Scan the idempotent window for a strict sandwich `x < z < y` with
/// `x, y` in the set and `z` outside it.
pub fn is_order_convex(
    xs: &[Element],
    w: i64,
    pcap: i64,
    fam: FamilySpec,
) -> Result<Convexity, StructureError> {
    for &x in xs {
        if !x.is_idempotent() {
            return Err(StructureError::NotIdempotent(x));
        }
    }
    let window = enumerate_window(w, pcap, fam, true);
    for &z in &window {
        if xs.contains(&z) {
            continue;
        }
        for &x in xs {
            if !(nat_leq_idem_formula(x, z)? && x != z) {
                continue;
            }
            for &y in xs {
                if nat_leq_idem_formula(z, y)? && z != y {
                    return Ok(Convexity::Violation { lower: x, middle: z, upper: y });
                }
            }
        }
    }
    Ok(Convexity::Convex)
}

pub fn strip_coords(e: Element) -> Result<StripPoint, StructureError> {
    if !e.is_idempotent() {
        return Err(StructureError::NotIdempotent(e));
    }
    let a = e.i().checked_neg().ok_or(CoreError::Overflow)?;
    let b = a.checked_sub(e.p()).ok_or(CoreError::Overflow)?;
    Ok(StripPoint { a, b })
}

pub fn from_strip(pt: StripPoint) -> Result<Element, StructureError> {
    if pt.b > pt.a {
        return Err(StructureError::InvalidStripPoint(pt.a, pt.b));
    }
    let i = pt.a.checked_neg().ok_or(CoreError::Overflow)?;
    Ok(Element::new(i, i, pt.a - pt.b)?)
}

/// Covering pairs `(e, f)` with `e` covered by `f` in the idempotent
/// window poset, by transitive reduction. Windows are small, so the cubic
/// scan is fine. Output is sorted by `(e, f)`.
pub fn hasse_edges_in_range(
    imin: i64,
    imax: i64,
    pcap: i64,
    fam: FamilySpec,
) -> Vec<(Element, Element)> {
    let mut idems = Vec::new();
    if pcap >= 0 {
        let pmax = fam.layer_cap(pcap);
        for i in imin..=imax {
            for p in 0..=pmax {
                idems.push(Element::new(i, i, p).expect("window layer is nonnegative"));
            }
        }
    }
    let n = idems.len();
    let mut lt = vec![false; n * n];
    for (ai, &a) in idems.iter().enumerate() {
        for (bi, &b) in idems.iter().enumerate() {
            if a != b && nat_leq_idem_formula(a, b).expect("window elements are idempotent") {
                lt[ai * n + bi] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for ai in 0..n {
        for bi in 0..n {
            if !lt[ai * n + bi] {
                continue;
            }
            let covered = (0..n).all(|zi| !(lt[ai * n + zi] && lt[zi * n + bi]));
            if covered {
                edges.push((idems[ai], idems[bi]));
            }
        }
    }
    edges.sort();
    edges
}

/// Symmetric-window variant of [`hasse_edges_in_range`].
pub fn hasse_edges(w: i64, pcap: i64, fam: FamilySpec) -> Vec<(Element, Element)> {
    if w < 0 {
        return Vec::new();
    }
    hasse_edges_in_range(-w, w, pcap, fam)
}

/// DOT rendering of the window Hasse diagram. Node ids are `i:p`, labels
/// the full `(i,i,[p))` form, one edge per covering pair; nodes in
/// lexicographic `(i, p)` order so the output is byte-stable.
pub fn hasse_dot(imin: i64, imax: i64, pcap: i64, fam: FamilySpec) -> String {
    let edges = hasse_edges_in_range(imin, imax, pcap, fam);
    let mut out = String::from("digraph hasse {\n");
    if pcap >= 0 {
        let pmax = fam.layer_cap(pcap);
        for i in imin..=imax {
            for p in 0..=pmax {
                out.push_str(&format!("  \"{i}:{p}\" [label=\"({i},{i},[{p}))\"];\n"));
            }
        }
    }
    for (e, f) in &edges {
        out.push_str(&format!(
            "  \"{}:{}\" -> \"{}:{}\";\n",
            e.i(),
            e.p(),
            f.i(),
            f.p()
        ));
    }
    out.push_str("}\n");
    out
}

/// True when a covering pair touches the clipped window boundary, where
/// covers may be artifacts of truncation. The layer bound only counts as a
/// boundary when it actually clips the family.
pub fn cover_touches_boundary(
    edge: (Element, Element),
    imin: i64,
    imax: i64,
    pcap: i64,
    fam: FamilySpec,
) -> bool {
    let pmax = fam.layer_cap(pcap);
    let layer_clipped = match fam.finite_bound() {
        Some(k) => pmax < k,
        None => true,
    };
    let touches = |e: Element| {
        e.i() == imin || e.i() == imax || (layer_clipped && e.p() == pmax)
    };
    touches(edge.0) || touches(edge.1)
}
