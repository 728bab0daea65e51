//! Facet classification, index sequences along facets, and the nested-box
//! combinatorics of forking-paths singularities.

use crate::error::{Error, Result};
use crate::fiber::projected_normal;
use crate::lattice::{ind_v, primitive_part, ExtendedNat, SupportSet};
use crate::polytope::{convex_hull, Facet, LatticePolytope};
use crate::scalar::{gcd_all, Scalar};

/// Whether a facet is horizontal, and its fiber direction otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetClass<T> {
    pub facet_id: usize,
    pub horizontal: bool,
    pub projected_normal: Vec<T>,
    /// Zero for horizontal facets.
    pub multiplier: T,
    pub gamma: Option<Vec<T>>,
}

pub fn classify_hull<T: Scalar>(hull: &LatticePolytope<T>) -> Vec<FacetClass<T>> {
    hull.facets()
        .iter()
        .enumerate()
        .map(|(facet_id, f)| {
            let g = projected_normal(&f.normal);
            let gamma = primitive_part(&g).ok();
            FacetClass {
                facet_id,
                horizontal: gamma.is_none(),
                multiplier: gcd_all(&g),
                projected_normal: g,
                gamma,
            }
        })
        .collect()
}

pub fn classify_facets<T: Scalar>(a: &SupportSet<T>) -> Result<Vec<FacetClass<T>>> {
    Ok(classify_hull(&convex_hull(a.points())?))
}

/// Horizontality tested geometrically: the facet's points, with the fiber
/// coordinates dropped, lie on one facet of the projected polytope.
pub fn is_horizontal_by_projection<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>) -> Result<bool> {
    let n = a.n();
    let drop = |p: &Vec<T>| p[..n].to_vec();
    let shadow = convex_hull(&a.points().iter().map(drop).collect::<Vec<_>>())?;
    let on_facet: Vec<Vec<T>> = a.points().iter().filter(|p| facet.contains(p)).map(drop).collect();
    Ok(shadow
        .facets()
        .iter()
        .any(|q| on_facet.iter().all(|p| q.contains(p))))
}

/// The sequence `i_1, i_2, ...` stored up to its first 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSequence<T> {
    pub values: Vec<ExtendedNat<T>>,
    /// Number of skipped levels; zero for non-horizontal facets.
    pub shift_r: usize,
}

impl<T: Scalar> IndexSequence<T> {
    /// `sum (i_r - 1)` over the finite entries.
    pub fn excess(&self) -> T {
        self.values
            .iter()
            .filter_map(ExtendedNat::finite)
            .fold(T::zero(), |acc, v| acc + v.clone() - T::one())
    }

    pub fn first(&self) -> &ExtendedNat<T> {
        &self.values[0]
    }

    pub fn has_infinity(&self) -> bool {
        self.values.iter().any(ExtendedNat::is_infinite)
    }

    /// Finite values, or `None` if any entry is infinite.
    pub fn finite_values(&self) -> Option<Vec<T>> {
        self.values.iter().map(|v| v.finite().cloned()).collect()
    }
}

impl<T: Scalar> std::fmt::Display for IndexSequence<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Points of `a` grouped by lattice depth `offset - normal . p` below the
/// facet, shallowest first.
fn levels<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>) -> Vec<(T, Vec<Vec<T>>)> {
    let mut grouped: std::collections::BTreeMap<T, Vec<Vec<T>>> = std::collections::BTreeMap::new();
    for p in a.points() {
        grouped.entry(facet.offset.clone() - facet.level(p)).or_default().push(p.clone());
    }
    grouped.into_iter().collect()
}

/// `ind_v(B_r)` where `B_r` holds the points at depth `< start + r`,
/// for `r = 1, 2, ...`, until the value 1 or until all points are used.
fn accumulate<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>, start: &T) -> Result<Vec<ExtendedNat<T>>> {
    let levels = levels(a, facet);
    let deepest = levels.last().map(|(d, _)| d.clone()).unwrap_or_else(T::zero);
    let mut out = Vec::new();
    let mut depth = start.clone();
    loop {
        let b: Vec<Vec<T>> = levels
            .iter()
            .filter(|(d, _)| *d <= depth)
            .flat_map(|(_, pts)| pts.iter().cloned())
            .collect();
        let v = ind_v(&b, a.n())?;
        let done = v.is_one() || depth >= deepest;
        out.push(v);
        if done {
            return Ok(out);
        }
        depth = depth + T::one();
    }
}

fn require_points_on<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>) -> Result<()> {
    if !a.points().iter().any(|p| facet.contains(p)) || a.points().iter().any(|p| facet.level(p) > facet.offset) {
        return Err(Error::InvalidInput("facet does not support the point set".into()));
    }
    Ok(())
}

/// Index sequence of a non-horizontal facet.
pub fn index_sequence<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>) -> Result<IndexSequence<T>> {
    require_points_on(a, facet)?;
    if primitive_part(&projected_normal(&facet.normal)).is_err() {
        return Err(Error::InvalidInput("index_sequence needs a non-horizontal facet".into()));
    }
    let values = accumulate(a, facet, &T::zero())?;
    if values.iter().any(ExtendedNat::is_infinite) {
        return Err(Error::InfiniteIndex);
    }
    Ok(IndexSequence { values, shift_r: 0 })
}

/// Index sequence of a horizontal facet, shifted past the first `R` levels
/// where `R` is the depth of the first nonempty level below the facet.
pub fn horizontal_index_sequence<T: Scalar>(a: &SupportSet<T>, facet: &Facet<T>) -> Result<IndexSequence<T>> {
    require_points_on(a, facet)?;
    if primitive_part(&projected_normal(&facet.normal)).is_ok() {
        return Err(Error::InvalidInput("horizontal_index_sequence needs a horizontal facet".into()));
    }
    let levels = levels(a, facet);
    let shift = levels
        .get(1)
        .map(|(d, _)| d.clone())
        .ok_or(Error::DegenerateSupport)?;
    let values = accumulate(a, facet, &shift)?;
    let shift_r = shift
        .to_usize()
        .ok_or_else(|| Error::InvalidInput(format!("level shift {shift} too large")))?;
    Ok(IndexSequence { values, shift_r })
}

/// Largest first term accepted by [`nested_boxes`].
pub const MAX_BOX_ELEMENTS: usize = 1 << 16;

/// Checks `i_1 >= 1`, `i_(r+1) | i_r`, and that the sequence ends in 1.
pub fn validate_sequence<T: Scalar>(i: &[T]) -> Result<()> {
    let Some(last) = i.last() else {
        return Err(Error::InvalidSequence("empty sequence".into()));
    };
    if let Some(bad) = i.iter().find(|v| !v.is_positive()) {
        return Err(Error::InvalidSequence(format!("entry {bad} is not positive")));
    }
    for w in i.windows(2) {
        if !w[0].is_multiple_of(&w[1]) {
            return Err(Error::InvalidSequence(format!("{} does not divide {}", w[1], w[0])));
        }
    }
    if !last.is_one() {
        return Err(Error::InvalidSequence("sequence must end in 1".into()));
    }
    Ok(())
}

/// The nested-box partition of `i_1` elements: level-`k` boxes split each
/// level-`(k-1)` box into `i_k / i_(k+1)` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxTree {
    pub sequence: Vec<usize>,
    /// `addresses[e]` is the 1-based box number of element `e` at each
    /// level, starting with the single level-0 box.
    pub addresses: Vec<Vec<usize>>,
}

pub fn nested_boxes<T: Scalar>(i: &[T]) -> Result<BoxTree> {
    validate_sequence(i)?;
    let sequence: Vec<usize> = i
        .iter()
        .map(|v| v.to_usize().filter(|&x| x <= MAX_BOX_ELEMENTS))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidSequence(format!("first term exceeds {MAX_BOX_ELEMENTS}")))?;
    let addresses = (0..sequence[0])
        .map(|e| {
            std::iter::once(1)
                .chain((1..sequence.len()).map(|k| {
                    let q = sequence[k - 1] / sequence[k];
                    (e / sequence[k]) % q + 1
                }))
                .collect()
        })
        .collect();
    Ok(BoxTree { sequence, addresses })
}

impl BoxTree {
    pub fn element_count(&self) -> usize {
        self.addresses.len()
    }
}

/// 1-based position of the first address entry where `a` and `b` differ.
pub fn depth_kappa(tree: &BoxTree, a: usize, b: usize) -> Result<usize> {
    if a == b {
        return Err(Error::IdenticalElements);
    }
    let (Some(x), Some(y)) = (tree.addresses.get(a), tree.addresses.get(b)) else {
        return Err(Error::InvalidInput("element out of range".into()));
    };
    x.iter()
        .zip(y)
        .position(|(p, q)| p != q)
        .map(|k| k + 1)
        .ok_or_else(|| Error::Consistency("distinct elements share an address".into()))
}

/// Node count `N`, Euler characteristic and delta invariant of the
/// forking-paths singularity with index sequence `i`.
pub fn fps_invariants<T: Scalar>(i: &[T]) -> Result<(T, T, T)> {
    validate_sequence(i)?;
    let i1 = i[0].clone();
    let two = T::from_small(2);
    let twice_n = i.iter().fold(T::zero(), |acc, v| acc + i1.clone() * (v.clone() - T::one()));
    let n = twice_n.clone() / two;
    let chi = i1 - twice_n;
    Ok((n.clone(), chi, n))
}
