//! Assumption checks, vertical normalization and the node-count formulas.
//!
//! All three formulas share the same shape:
//!
//! ```text
//! 2D = Area(P) - (n+1) Vol(Delta) + (horizontal term) - sum Vol(G) * excess(G)
//! ```
//!
//! * closure: horizontal term `sum_H Vol(G)`, excess summed over
//!   non-horizontal facets only;
//! * punctured: the same horizontal term, excess summed over every facet
//!   (horizontal facets use the shifted sequence);
//! * conjectural: horizontal term `sum_H Vol(G) (2 i_1 - i_1^2)`, excess
//!   over every facet.

use crate::error::{AssumptionFailure, Error, Result};
use crate::fiber::{fiber_polygon_of_hull, FiberPolygon};
use crate::lattice::{smith_normal_form, vertical_differences, ExtendedNat, IntMatrix, SupportSet};
use crate::polytope::{convex_hull, euler_char_ci, LatticePolytope, PolytopeTuple};
use crate::scalar::{sub, Scalar};
use crate::singular::{classify_hull, horizontal_index_sequence, index_sequence, FacetClass, IndexSequence};

pub const ASSUMPTION_IND_V: &str = "ind_v";
pub const ASSUMPTION_HORIZ_LATT: &str = "horiz_latt";
pub const ASSUMPTION_HORIZONTAL: &str = "horizontal";

/// Verdicts of the support-set assumptions. Facet indices refer to the
/// facet order of the analyzed set's hull.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssumptionReport {
    pub contains_origin: bool,
    pub ind_v_is_one: bool,
    /// Every facet's fiber normal part is zero or primitive.
    pub primitive_ok: bool,
    pub primitive_offenders: Vec<usize>,
    /// Horizontal facets carry saturated vertical lattices.
    pub horiz_latt_ok: bool,
    pub horiz_latt_offenders: Vec<usize>,
    /// Horizontal facets have points at lattice distance 1 below them.
    pub horizontal_ok: bool,
    pub horizontal_offenders: Vec<usize>,
    /// No horizontal facets at all.
    pub developed: bool,
}

impl AssumptionReport {
    fn failures(&self, names: &[&'static str]) -> Vec<AssumptionFailure> {
        let mut out = Vec::new();
        for &name in names {
            let (ok, facets) = match name {
                ASSUMPTION_IND_V => (self.ind_v_is_one, Vec::new()),
                ASSUMPTION_HORIZ_LATT => (self.horiz_latt_ok, self.horiz_latt_offenders.clone()),
                ASSUMPTION_HORIZONTAL => (self.horizontal_ok, self.horizontal_offenders.clone()),
                _ => unreachable!("unknown assumption {name}"),
            };
            if !ok {
                out.push(AssumptionFailure { assumption: name, facets });
            }
        }
        out
    }

    /// Blocking assumptions of the punctured-curve formula.
    pub fn punctured_failures(&self) -> Vec<AssumptionFailure> {
        self.failures(&[ASSUMPTION_IND_V, ASSUMPTION_HORIZ_LATT, ASSUMPTION_HORIZONTAL])
    }

    /// Blocking assumptions of the conjectural formula.
    pub fn conjecture_failures(&self) -> Vec<AssumptionFailure> {
        self.failures(&[ASSUMPTION_IND_V, ASSUMPTION_HORIZ_LATT])
    }
}

fn is_saturated<T: Scalar>(vectors: &[Vec<T>]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let s = smith_normal_form(&IntMatrix::from_rows(vectors.to_vec()).expect("equal lengths"));
    s.nonzero_divisors().iter().all(|d| d.is_one())
}

fn report_for<T: Scalar>(a: &SupportSet<T>, hull: &LatticePolytope<T>, classes: &[FacetClass<T>]) -> AssumptionReport {
    let n = a.n();
    let origin = vec![T::zero(); a.dim()];
    let mut r = AssumptionReport {
        contains_origin: a.contains(&origin),
        ind_v_is_one: a.ind_v().is_one(),
        developed: classes.iter().all(|c| !c.horizontal),
        ..AssumptionReport::default()
    };
    for (f, c) in hull.facets().iter().zip(classes) {
        if !c.horizontal {
            if !c.multiplier.is_one() {
                r.primitive_offenders.push(c.facet_id);
            }
            continue;
        }
        let on: Vec<Vec<T>> = a.points().iter().filter(|p| f.contains(p)).cloned().collect();
        if !is_saturated(&vertical_differences(&on, n)) {
            r.horiz_latt_offenders.push(c.facet_id);
        }
        let at_distance_one = a
            .points()
            .iter()
            .any(|p| (f.offset.clone() - f.level(p)).is_one());
        if !at_distance_one {
            r.horizontal_offenders.push(c.facet_id);
        }
    }
    r.primitive_ok = r.primitive_offenders.is_empty();
    r.horiz_latt_ok = r.horiz_latt_offenders.is_empty();
    r.horizontal_ok = r.horizontal_offenders.is_empty();
    r
}

/// Evaluates every assumption on `a` as given (no translation or
/// normalization).
pub fn check_assumptions<T: Scalar>(a: &SupportSet<T>) -> Result<AssumptionReport> {
    let hull = convex_hull(a.points())?;
    let classes = classify_hull(&hull);
    Ok(report_for(a, &hull, &classes))
}

/// Changes vertical coordinates so that `ind_v` becomes 1: translate the
/// first point to the origin, then map `x -> x V D^-1` using the Smith form
/// `U G V = D` of the vertical differences `G`. Fiber coordinates are kept.
pub fn normalize_vertical<T: Scalar>(a: &SupportSet<T>) -> Result<SupportSet<T>> {
    match a.ind_v() {
        ExtendedNat::Infinity => return Err(Error::VerticallyDegenerate),
        v if v.is_one() => return Ok(a.clone()),
        _ => {}
    }
    let n = a.n();
    let base = a.points()[0].clone();
    let shifted: Vec<Vec<T>> = a.points().iter().map(|p| sub(p, &base)).collect();
    let s = smith_normal_form(&IntMatrix::from_rows(vertical_differences(&shifted, n))?);
    let divisors = s.divisors();
    let points = shifted
        .iter()
        .map(|p| {
            let mut q: Vec<T> = s
                .v
                .left_apply(&p[..n])
                .into_iter()
                .zip(&divisors)
                .map(|(x, d)| {
                    debug_assert!(x.is_multiple_of(d));
                    x / d.clone()
                })
                .collect();
            q.extend_from_slice(&p[n..]);
            q
        })
        .collect();
    SupportSet::new(points)
}

/// One row of the per-facet table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetReport<T> {
    pub facet_id: usize,
    pub normal: Vec<T>,
    pub offset: T,
    pub horizontal: bool,
    pub volume: T,
    /// gcd of the fiber part of the normal (zero when horizontal).
    pub multiplier: T,
    /// Edge length contributed to the fiber polygon (zero when horizontal).
    pub contribution: T,
    pub sequence: IndexSequence<T>,
    pub excess: T,
}

/// A formula value or the assumptions that prevent its use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaOutcome<T> {
    Value(T),
    Blocked(Vec<AssumptionFailure>),
}

impl<T> FormulaOutcome<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Self::Value(v) => Some(v),
            Self::Blocked(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport<T> {
    pub n: usize,
    /// Normalized volume of the Newton polytope of the analyzed set.
    pub norm_volume_delta: T,
    pub fiber_area: T,
    pub fiber: FiberPolygon<T>,
    pub facets: Vec<FacetReport<T>>,
    pub d_closure: T,
    pub d_punctured: FormulaOutcome<T>,
    /// Conjectural value.
    pub d_conjecture: FormulaOutcome<T>,
    /// Euler characteristic of the curve in the torus.
    pub chi_curve: T,
    pub assumptions: AssumptionReport,
    /// The set the formulas were evaluated on, after normalization.
    pub analyzed: SupportSet<T>,
    pub notes: Vec<String>,
}

struct Prepared<T> {
    set: SupportSet<T>,
    hull: LatticePolytope<T>,
    polygon: FiberPolygon<T>,
    classes: Vec<FacetClass<T>>,
    sequences: Vec<Result<IndexSequence<T>>>,
    contains_origin: bool,
    ind_v: ExtendedNat<T>,
    notes: Vec<String>,
}

fn prepare<T: Scalar>(a: &SupportSet<T>) -> Result<Prepared<T>> {
    convex_hull(a.points())?;
    let mut notes = Vec::new();
    let origin = vec![T::zero(); a.dim()];
    let contains_origin = a.contains(&origin);
    let ind_v = a.ind_v();
    let mut set = a.clone();
    if !contains_origin {
        let shift: Vec<T> = a.points()[0].iter().map(|x| -x.clone()).collect();
        set = set.translate(&shift);
        let shown: Vec<String> = shift.iter().map(ToString::to_string).collect();
        notes.push(format!("input translated by ({}) so that it contains the origin", shown.join(", ")));
    }
    match &ind_v {
        ExtendedNat::Infinity => return Err(Error::VerticallyDegenerate),
        v if !v.is_one() => {
            set = normalize_vertical(&set)?;
            notes.push(format!("vertical lattice normalized (ind_v was {v})"));
        }
        _ => {}
    }
    let hull = convex_hull(set.points())?;
    let polygon = fiber_polygon_of_hull(&hull)?;
    let classes = classify_hull(&hull);
    let sequences = hull
        .facets()
        .iter()
        .zip(&classes)
        .map(|(f, c)| {
            if c.horizontal {
                horizontal_index_sequence(&set, f)
            } else {
                index_sequence(&set, f)
            }
        })
        .collect();
    Ok(Prepared {
        set,
        hull,
        polygon,
        classes,
        sequences,
        contains_origin,
        ind_v,
        notes,
    })
}

fn halve<T: Scalar>(numerator: T, label: &str) -> Result<T> {
    let two = T::from_small(2);
    if numerator.is_negative() || !numerator.is_multiple_of(&two) {
        return Err(Error::Consistency(format!(
            "{label} numerator {numerator} is not a nonnegative even integer"
        )));
    }
    Ok(numerator / two)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Closure,
    Punctured,
    Conjecture,
}

impl<T: Scalar> Prepared<T> {
    fn base(&self) -> T {
        let n1 = T::from_count(self.set.n() + 1);
        self.polygon.norm_area.clone() - n1 * self.hull.norm_volume()
    }

    fn sequence(&self, id: usize) -> Result<&IndexSequence<T>> {
        self.sequences[id].as_ref().map_err(Clone::clone)
    }

    fn assumptions(&self) -> AssumptionReport {
        let mut r = report_for(&self.set, &self.hull, &self.classes);
        r.contains_origin = self.contains_origin;
        r.ind_v_is_one = self.ind_v.is_one();
        r
    }

    fn numerator(&self, variant: Variant) -> Result<T> {
        let mut total = self.base();
        for (f, c) in self.hull.facets().iter().zip(&self.classes) {
            let vol = f.norm_volume.clone();
            if c.horizontal {
                let seq = self.sequence(c.facet_id)?;
                match variant {
                    Variant::Closure => total = total + vol,
                    Variant::Punctured => {
                        if seq.has_infinity() {
                            return Err(Error::InfiniteIndex);
                        }
                        total = total + vol.clone() - vol * seq.excess();
                    }
                    Variant::Conjecture => {
                        let i1 = seq.first().finite().cloned().ok_or(Error::InfiniteIndex)?;
                        let weight = T::from_small(2) * i1.clone() - i1.clone() * i1;
                        total = total + vol.clone() * weight - vol * seq.excess();
                    }
                }
            } else {
                total = total - vol * self.sequence(c.facet_id)?.excess();
            }
        }
        Ok(total)
    }

    fn closure(&self) -> Result<T> {
        halve(self.numerator(Variant::Closure)?, "closure formula")
    }

    fn punctured(&self) -> Result<FormulaOutcome<T>> {
        let failures = self.assumptions().punctured_failures_after_normalization();
        if !failures.is_empty() {
            return Ok(FormulaOutcome::Blocked(failures));
        }
        Ok(FormulaOutcome::Value(halve(self.numerator(Variant::Punctured)?, "punctured formula")?))
    }

    fn conjecture(&self) -> Result<FormulaOutcome<T>> {
        let failures = self.assumptions().conjecture_failures_after_normalization();
        if !failures.is_empty() {
            return Ok(FormulaOutcome::Blocked(failures));
        }
        Ok(FormulaOutcome::Value(halve(self.numerator(Variant::Conjecture)?, "conjectural formula")?))
    }
}

impl AssumptionReport {
    // the formulas run on the normalized set, where ind_v is always 1
    fn punctured_failures_after_normalization(&self) -> Vec<AssumptionFailure> {
        self.failures(&[ASSUMPTION_HORIZ_LATT, ASSUMPTION_HORIZONTAL])
    }

    fn conjecture_failures_after_normalization(&self) -> Vec<AssumptionFailure> {
        self.failures(&[ASSUMPTION_HORIZ_LATT])
    }
}

fn blocked<T>(outcome: FormulaOutcome<T>) -> Result<T> {
    match outcome {
        FormulaOutcome::Value(v) => Ok(v),
        FormulaOutcome::Blocked(failures) => Err(Error::AssumptionViolated { failures }),
    }
}

/// Sum of delta invariants of the closure of the projected curve.
///
/// The input is translated to contain the origin and vertically normalized
/// first; the value does not depend on either step.
pub fn delta_sum_closure<T: Scalar>(a: &SupportSet<T>) -> Result<T> {
    prepare(a)?.closure()
}

/// Sum of delta invariants of the projected curve with its punctured points
/// removed. Requires saturated horizontal lattices and horizontal facets at
/// lattice distance 1.
pub fn delta_sum_punctured<T: Scalar>(a: &SupportSet<T>) -> Result<T> {
    blocked(prepare(a)?.punctured()?)
}

/// Conjectural extension of the punctured formula to horizontal facets at
/// larger lattice distance. Requires saturated horizontal lattices.
pub fn delta_sum_conjecture<T: Scalar>(a: &SupportSet<T>) -> Result<T> {
    blocked(prepare(a)?.conjecture()?)
}

pub fn analyze<T: Scalar>(a: &SupportSet<T>) -> Result<AnalysisReport<T>> {
    let p = prepare(a)?;
    let assumptions = p.assumptions();
    let d_closure = p.closure()?;
    let d_punctured = p.punctured()?;
    let d_conjecture = p.conjecture()?;
    let n = p.set.n();
    let copies = vec![p.hull.vertices().to_vec(); n + 1];
    let chi_curve = euler_char_ci(&PolytopeTuple::new(copies)?)?;

    let mut facets = Vec::with_capacity(p.hull.facets().len());
    for (f, c) in p.hull.facets().iter().zip(&p.classes) {
        let sequence = p.sequence(c.facet_id)?.clone();
        facets.push(FacetReport {
            facet_id: c.facet_id,
            normal: f.normal.clone(),
            offset: f.offset.clone(),
            horizontal: c.horizontal,
            volume: f.norm_volume.clone(),
            contribution: c.multiplier.clone() * f.norm_volume.clone(),
            multiplier: c.multiplier.clone(),
            excess: sequence.excess(),
            sequence,
        });
    }

    let mut notes = p.notes.clone();
    if !assumptions.primitive_ok {
        notes.push("some facet normals have non-primitive fiber parts; the formulas still apply".into());
    }
    if d_conjecture.value().is_some() {
        notes.push("D_conjecture is CONJECTURAL".into());
    }
    notes.push("all singular points are assumed isolated for generic coefficients".into());

    Ok(AnalysisReport {
        n,
        norm_volume_delta: p.hull.norm_volume(),
        fiber_area: p.polygon.norm_area.clone(),
        fiber: p.polygon.clone(),
        facets,
        d_closure,
        d_punctured,
        d_conjecture,
        chi_curve,
        assumptions,
        analyzed: p.set,
        notes,
    })
}
