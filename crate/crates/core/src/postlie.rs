//! Commutative post-Lie structures: a bilinear product `x·y` with
//!
//! ```text
//! x·y = y·x                              (commutativity)
//! [x,y]·z = x·(y·z) - y·(x·z)            (representation)
//! x·[y,z] = [x·y,z] + [y,x·z]            (derivation)
//! ```
//!
//! Such a product is a symmetric biderivation, so it has the form
//! `λ[x,y] + χ_Ω(x,y)`; commutativity forces `λ = 0` and the representation
//! identity at `(L_2, L_1, L_3)` forces `Ω = ∅`. This module checks the axioms
//! on a window, produces those witnesses in closed form and runs a windowed
//! brute-force solve of the axioms.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{bracket_generators, bracket_term, AlgebraConfig, Element, GeneratorId};
use crate::biderivations::{form_value, realize, BiderivationError, BiderivationForm, BilinearMap, OmegaSet};
use crate::derivations::{
    derivation_defect, derivation_defect_at, derivation_rows, DerivationError, MIN_SOLVER_RADIUS,
};
use crate::linalg::{frac, kernel_basis, rat, LinalgError, Rational, SpanBasis, SparseMatrix, SparseVec};
use crate::window::{DefectReport, Violation, Window, WindowBasis};

pub const COMMUTATIVITY: &str = "commutativity";
pub const REPRESENTATION: &str = "representation";
pub const DERIVATION: &str = "derivation";

/// Smallest window for the triviality sweep: the representation witness
/// needs an index `6 + k` in the window for some tested shift.
pub const MIN_SWEEP_RADIUS: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PostLieError {
    #[error(transparent)]
    Biderivation(#[from] BiderivationError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("product is undefined on ({0}, {1})")]
    Undefined(GeneratorId, GeneratorId),
    #[error("product violates the post-Lie axioms on this window ({violations} violations)")]
    NotPostLie { violations: usize },
    #[error("window radius {radius} is below the minimum {min}")]
    WindowTooSmall { radius: u32, min: u32 },
}

/// A product given either by its values on window pairs or as a classified
/// form, which is realized on the window before any check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PostLieCandidate {
    Map(BilinearMap),
    Form(BiderivationForm),
}

impl PostLieCandidate {
    pub fn materialize(&self, w: Window, cfg: &AlgebraConfig) -> BilinearMap {
        match self {
            PostLieCandidate::Map(m) => m.clone(),
            PostLieCandidate::Form(f) => realize(f, w, cfg),
        }
    }
}

/// `x·e` when every generator of `e` has a known product with `x`.
fn left_apply(p: &BilinearMap, x: GeneratorId, e: &Element) -> Option<Element> {
    let mut out = Element::zero();
    for (h, c) in e.terms() {
        out.add_scaled(c, p.get(x, h)?);
    }
    Some(out)
}

/// `[x,y]·z - x·(y·z) + y·(x·z)` on window coordinates, or `None` when the
/// triple is not closed: `[x,y]` must be zero or in the window and the
/// intermediate products `y·z`, `x·z` must be supported in it.
pub fn representation_defect(
    p: &BilinearMap,
    w: Window,
    x: GeneratorId,
    y: GeneratorId,
    z: GeneratorId,
) -> Option<Element> {
    let mut out = match bracket_term(x, y) {
        None => Element::zero(),
        Some((_, b)) if !w.contains(b) => return None,
        Some((k, b)) => p.get(b, z)?.scale(&crate::algebra::grade_rational(k)),
    };
    let yz = p.get(y, z)?;
    let xz = p.get(x, z)?;
    if !w.contains_element(yz) || !w.contains_element(xz) {
        return None;
    }
    out.add_scaled(&-Rational::one(), &left_apply(p, x, yz)?);
    out.add_scaled(&Rational::one(), &left_apply(p, y, xz)?);
    Some(out.filter(|g| w.contains(g)))
}

/// `x·y - y·x`.
pub fn commutativity_defect(p: &BilinearMap, x: GeneratorId, y: GeneratorId) -> Option<Element> {
    Some(p.get(x, y)? - p.get(y, x)?)
}

/// All three axioms on the window: commutativity on unordered pairs, the
/// representation identity on ordered closed triples with `x ≠ y`, the
/// derivation identity on every left slice with the truncation rule of
/// [`crate::derivations`].
pub fn postlie_axiom_defects(
    cand: &PostLieCandidate,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<DefectReport, PostLieError> {
    let p = cand.materialize(w, cfg);
    axiom_defects(&p, w, cfg)
}

fn axiom_defects(p: &BilinearMap, w: Window, cfg: &AlgebraConfig) -> Result<DefectReport, PostLieError> {
    let gens = w.generators(cfg);
    for &a in &gens {
        for &b in &gens {
            if p.get(a, b).is_none() {
                return Err(PostLieError::Undefined(a, b));
            }
        }
    }
    let mut report = DefectReport::default();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            report.record(COMMUTATIVITY, vec![a, b], commutativity_defect(p, a, b).unwrap());
        }
    }
    let parts: Vec<DefectReport> = gens
        .par_iter()
        .map(|&x| {
            let mut r = DefectReport::default();
            for &y in &gens {
                if y == x {
                    continue;
                }
                for &z in &gens {
                    if let Some(d) = representation_defect(p, w, x, y, z) {
                        r.record(REPRESENTATION, vec![x, y, z], d);
                    }
                }
            }
            r
        })
        .collect();
    for r in parts {
        report.merge(r);
    }
    let slices: Vec<Result<DefectReport, PostLieError>> = gens
        .par_iter()
        .map(|&x| {
            let slice = p.left_slice(x, w, cfg)?;
            let d = derivation_defect(&slice, w, cfg)?;
            let mut out = DefectReport {
                checked: d.checked,
                total: d.total,
                violations: Vec::new(),
            };
            for mut v in d.violations {
                v.identity = DERIVATION;
                v.inputs.insert(0, x);
                out.violations.push(v);
            }
            Ok(out)
        })
        .collect();
    for r in slices {
        report.merge(r?);
    }
    Ok(report)
}

/// The single defect entry the full check would record for `inputs`, or
/// `None` when the entry is not checked. Zero means the axiom holds there.
pub fn defect_at(
    cand: &PostLieCandidate,
    w: Window,
    cfg: &AlgebraConfig,
    axiom: &str,
    inputs: &[GeneratorId],
) -> Result<Option<Element>, PostLieError> {
    let p = cand.materialize(w, cfg);
    let inside = |g: &GeneratorId| w.contains(*g) && cfg.admits(g.family, g.index);
    if !inputs.iter().all(inside) {
        return Ok(None);
    }
    Ok(match (axiom, inputs) {
        (COMMUTATIVITY, &[x, y]) => commutativity_defect(&p, x, y),
        (REPRESENTATION, &[x, y, z]) if x != y => representation_defect(&p, w, x, y, z),
        (DERIVATION, &[x, y, z]) => {
            let slice = p.left_slice(x, w, cfg)?;
            derivation_defect_at(&slice, w, y, z)?
        }
        _ => None,
    })
}

/// A product satisfying the axioms on the window, returned as a bilinear
/// map (a biderivation on the same window).
pub fn biderivation_from_postlie(
    cand: &PostLieCandidate,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<BilinearMap, PostLieError> {
    let p = cand.materialize(w, cfg);
    let d = axiom_defects(&p, w, cfg)?;
    if !d.is_empty() {
        return Err(PostLieError::NotPostLie { violations: d.total });
    }
    Ok(p)
}

/// A closed-form axiom violation of a nonzero classified form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: &'static str,
    pub inputs: Vec<GeneratorId>,
    /// Left side minus right side of the axiom at `inputs`.
    pub residual: Element,
}

/// `None` for the zero form; otherwise the commutativity witness
/// `(L_1, L_2)` with residual `2λ[L_1, L_2]` when `λ ≠ 0`, else the
/// representation witness `(L_2, L_1, L_3)` with residual `Σ μ_k M_{6+k}`.
pub fn triviality_witness(form: &BiderivationForm, _cfg: &AlgebraConfig) -> Option<Witness> {
    let (l1, l2, l3) = (GeneratorId::l(1), GeneratorId::l(2), GeneratorId::l(3));
    if !form.lambda.is_zero() {
        let residual = bracket_generators(l1, l2).scale(&(rat(2) * &form.lambda));
        return Some(Witness {
            axiom: COMMUTATIVITY,
            inputs: vec![l1, l2],
            residual,
        });
    }
    if form.omega.is_empty() {
        return None;
    }
    // [L_2,L_1] = L_3; L_3·L_3 = Σ μ_k M_{6+k}; χ vanishes on L×M
    let residual = form_value(form, l3, l3);
    Some(Witness {
        axiom: REPRESENTATION,
        inputs: vec![l2, l1, l3],
        residual,
    })
}

/// First violation found by checking every axiom on the window.
pub fn brute_force_witness(
    cand: &PostLieCandidate,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<Option<Violation>, PostLieError> {
    Ok(postlie_axiom_defects(cand, w, cfg)?.violations.into_iter().next())
}

/// Shifts `k` whose representation witness is closed on the window:
/// `M_{4+k}`, `M_{5+k}` and `M_{6+k}` all lie in it.
pub fn witness_shifts(w: Window) -> Vec<i64> {
    let n = w.radius as i64;
    (-n - 4..=n - 6).collect()
}

/// The fixed sweep: `λ ∈ {0, ±1, ±2, 1/2}` crossed with `Ω = ∅`, every
/// single spike `μ_k = ±1` over [`witness_shifts`] and the two-spike
/// `μ_{-1} = 1, μ_0 = -1`.
pub fn sweep_forms(w: Window) -> Vec<BiderivationForm> {
    let lambdas = [rat(0), rat(1), rat(-1), rat(2), rat(-2), frac(1, 2)];
    let mut omegas = vec![OmegaSet::new()];
    for k in witness_shifts(w) {
        omegas.push(OmegaSet::spike(k, rat(1)));
        omegas.push(OmegaSet::spike(k, rat(-1)));
    }
    omegas.push(OmegaSet::from_pairs([(-1, rat(1)), (0, rat(-1))]));
    let mut out = Vec::new();
    for l in &lambdas {
        for o in &omegas {
            out.push(BiderivationForm::new(l.clone(), o.clone()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepCase {
    pub form: String,
    pub trivial: bool,
    pub witness: Option<Witness>,
    /// The witness residual equals the checker's entry at the same inputs
    /// (for the zero form: the full check is empty).
    pub cross_checked: bool,
    /// With brute-force search: whether a violation was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_violation: Option<bool>,
}

impl SweepCase {
    pub fn passed(&self) -> bool {
        self.witness.is_some() != self.trivial
            && self.cross_checked
            && self.brute_force_violation.is_none_or(|v| v != self.trivial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub window: u32,
    pub epsilon: String,
    pub passed: bool,
    pub cases: Vec<SweepCase>,
}

pub fn describe_form(form: &BiderivationForm) -> String {
    let mut s = format!("lambda={}", form.lambda);
    for (k, q) in form.omega.iter() {
        s.push_str(&format!(" mu[{k}]={q}"));
    }
    s
}

/// Runs the sweep; each witness is cross-checked against [`defect_at`], and
/// with `brute_force` every case also gets a full axiom check.
pub fn verify_triviality_theorem(
    w: Window,
    cfg: &AlgebraConfig,
    brute_force: bool,
) -> Result<TrivialityReport, PostLieError> {
    if w.radius < MIN_SWEEP_RADIUS {
        return Err(PostLieError::WindowTooSmall {
            radius: w.radius,
            min: MIN_SWEEP_RADIUS,
        });
    }
    let cases: Vec<Result<SweepCase, PostLieError>> = sweep_forms(w)
        .into_par_iter()
        .map(|form| {
            let trivial = form.is_zero();
            let witness = triviality_witness(&form, cfg);
            let cand = PostLieCandidate::Form(form.clone());
            let cross_checked = match &witness {
                Some(wit) => defect_at(&cand, w, cfg, wit.axiom, &wit.inputs)?.as_ref() == Some(&wit.residual),
                None => postlie_axiom_defects(&cand, w, cfg)?.is_empty(),
            };
            let brute_force_violation = if brute_force {
                Some(brute_force_witness(&cand, w, cfg)?.is_some())
            } else {
                None
            };
            Ok(SweepCase {
                form: describe_form(&form),
                trivial,
                witness,
                cross_checked,
                brute_force_violation,
            })
        })
        .collect();
    let cases = cases.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(TrivialityReport {
        window: w.radius,
        epsilon: cfg.epsilon.to_string(),
        passed: cases.iter().all(|c| c.passed()),
        cases,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BruteForceVerdict {
    /// The solution space vanishes on the interior.
    InteriorTrivial,
    /// Some solution survives on the interior; since the window cannot see
    /// the full representation identity this is read as a truncation effect.
    TruncationArtifact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteForceReport {
    pub window: u32,
    pub unknowns: usize,
    /// Dimension of the solutions of commutativity and derivation.
    pub linear_dim: usize,
    /// Dimension after each round of linear representation rows.
    pub rounds: Vec<usize>,
    pub final_dim: usize,
    pub interior_dim: usize,
    /// Representation rows whose quadratic part never vanished.
    pub quadratic_rows: usize,
    pub verdict: BruteForceVerdict,
}

/// Solves the axioms for an unknown product on window coordinates.
///
/// Commutativity and the derivation identity are linear; their kernel `S`
/// is computed exactly. The representation identity
/// `[x,y]·z - x·(y·z) + y·(x·z) = 0` is imposed on the truncated product
/// (products evaluated on window coordinates, triples with `[x,y]` in the
/// window). Each of its rows is linear plus quadratic on `S`; rows whose
/// quadratic part vanishes on `S` are linear there and cut `S` down. This is
/// repeated to a fixpoint. Every solution lies in the final `S`, so an
/// interior-trivial final `S` proves the solutions of the truncated system
/// are interior-trivial.
pub fn brute_force_solve(w: Window, cfg: &AlgebraConfig) -> Result<BruteForceReport, PostLieError> {
    if w.radius < MIN_SOLVER_RADIUS {
        return Err(PostLieError::WindowTooSmall {
            radius: w.radius,
            min: MIN_SOLVER_RADIUS,
        });
    }
    let basis = WindowBasis::new(w, *cfg);
    let n = basis.len();
    let dim = n * n * n;
    let pos = |g: GeneratorId| basis.position(g).unwrap();
    let col = |a: GeneratorId, b: GeneratorId, h: GeneratorId| (pos(a) * n + pos(b)) * n + pos(h);
    let gens = basis.generators().to_vec();

    let mut matrix = SparseMatrix::new(dim);
    let slices: Vec<Vec<SparseVec>> = gens
        .par_iter()
        .map(|&x| derivation_rows(&basis, dim, &|g, h| col(x, g, h)))
        .collect();
    for r in slices.into_iter().flatten() {
        matrix.push_row(r);
    }
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            for &h in &gens {
                matrix.push_row(SparseVec::from_entries(
                    dim,
                    [(col(a, b, h), Rational::one()), (col(b, a, h), -Rational::one())],
                ));
            }
        }
    }
    let mut space = kernel_basis(&matrix);
    let linear_dim = space.len();
    let mut rounds = Vec::new();
    let decode = |v: &SparseVec| -> BilinearMap {
        let mut f = BilinearMap::zero_on(w, cfg);
        for (idx, c) in v.entries() {
            let (a, b, h) = (gens[idx / (n * n)], gens[(idx / n) % n], gens[idx % n]);
            let mut e = f.get(a, b).cloned().unwrap_or_default();
            e.add_term(c.clone(), h);
            f.set(a, b, e);
        }
        f
    };
    let quadratic_rows = loop {
        let maps: Vec<BilinearMap> = space.vectors().iter().map(decode).collect();
        let (rows, quadratic) = representation_shadow(&maps, w, &gens);
        let d = maps.len();
        let mut m = SparseMatrix::new(d);
        for r in rows {
            m.push_row(r);
        }
        let coeffs = kernel_basis(&m);
        if coeffs.len() == d {
            break quadratic;
        }
        let vectors: Vec<SparseVec> = coeffs
            .vectors()
            .iter()
            .map(|c| {
                let mut acc = SparseVec::zero(dim);
                for (j, q) in c.entries() {
                    acc = acc.add_scaled(q, &space.vectors()[*j]);
                }
                acc
            })
            .collect();
        space = SpanBasis::from_vectors(dim, &vectors)?;
        rounds.push(space.len());
    };
    let inner = w.interior();
    let interior: Vec<usize> = {
        let ig: Vec<GeneratorId> = gens.iter().copied().filter(|g| inner.contains(*g)).collect();
        let mut cols = Vec::new();
        for &a in &ig {
            for &b in &ig {
                for &h in &ig {
                    cols.push(col(a, b, h));
                }
            }
        }
        cols.sort_unstable();
        cols
    };
    let interior_dim = space.restrict(&interior).len();
    Ok(BruteForceReport {
        window: w.radius,
        unknowns: dim,
        linear_dim,
        final_dim: space.len(),
        rounds,
        interior_dim,
        quadratic_rows,
        verdict: if interior_dim == 0 {
            BruteForceVerdict::InteriorTrivial
        } else {
            BruteForceVerdict::TruncationArtifact
        },
    })
}

/// Linear rows (in the coefficients of `maps`) of the representation
/// identity whose quadratic part vanishes identically, and the number of
/// rows with a nonvanishing quadratic part.
fn representation_shadow(maps: &[BilinearMap], w: Window, gens: &[GeneratorId]) -> (Vec<SparseVec>, usize) {
    let d = maps.len();
    let mut table: HashMap<(GeneratorId, GeneratorId), Vec<(usize, &Element)>> = HashMap::new();
    for (j, f) in maps.iter().enumerate() {
        for (p, e) in f.entries() {
            if !e.is_zero() {
                table.entry(p).or_default().push((j, e));
            }
        }
    }
    let triples: Vec<(GeneratorId, GeneratorId, GeneratorId)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| {
            gens[i + 1..]
                .iter()
                .flat_map(move |&y| gens.iter().map(move |&z| (x, y, z)))
        })
        .filter(|&(x, y, _)| bracket_term(x, y).is_none_or(|(_, b)| w.contains(b)))
        .collect();
    let parts: Vec<(Vec<SparseVec>, usize)> = triples
        .par_iter()
        .map(|&(x, y, z)| {
            let mut linear: BTreeMap<GeneratorId, BTreeMap<usize, Rational>> = BTreeMap::new();
            let mut quad: BTreeMap<GeneratorId, BTreeMap<(usize, usize), Rational>> = BTreeMap::new();
            if let Some((k, b)) = bracket_term(x, y) {
                let k = crate::algebra::grade_rational(k);
                for (i, e) in table.get(&(b, z)).into_iter().flatten() {
                    for (c, q) in e.terms() {
                        *linear.entry(c).or_default().entry(*i).or_insert_with(Rational::zero) += &k * q;
                    }
                }
            }
            // - x·(y·z) + y·(x·z)
            for (u, v, sign) in [(x, y, -Rational::one()), (y, x, Rational::one())] {
                for (j, e) in table.get(&(v, z)).into_iter().flatten() {
                    for (h, qh) in e.terms() {
                        for (i, f) in table.get(&(u, h)).into_iter().flatten() {
                            let key = if *i <= *j { (*i, *j) } else { (*j, *i) };
                            for (c, qc) in f.terms() {
                                *quad.entry(c).or_default().entry(key).or_insert_with(Rational::zero) +=
                                    &sign * qh * qc;
                            }
                        }
                    }
                }
            }
            let mut rows = Vec::new();
            let mut quadratic = 0;
            let coords: std::collections::BTreeSet<GeneratorId> = linear.keys().chain(quad.keys()).copied().collect();
            for c in coords {
                let q_zero = quad.get(&c).is_none_or(|m| m.values().all(|v| v.is_zero()));
                if !q_zero {
                    quadratic += 1;
                    continue;
                }
                if let Some(l) = linear.get(&c) {
                    let r = SparseVec::from_entries(d, l.iter().map(|(i, q)| (*i, q.clone())));
                    if !r.is_zero() {
                        rows.push(r);
                    }
                }
            }
            (rows, quadratic)
        })
        .collect();
    let mut rows = Vec::new();
    let mut quadratic = 0;
    for (r, q) in parts {
        rows.extend(r);
        quadratic += q;
    }
    (rows, quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biderivations::{biderivation_defects, chi_omega};

    const TW: AlgebraConfig = AlgebraConfig::TWISTED;
    const OR: AlgebraConfig = AlgebraConfig::ORIGINAL;

    fn form(lambda: Rational, spikes: &[(i64, i64)]) -> BiderivationForm {
        BiderivationForm::new(lambda, OmegaSet::from_pairs(spikes.iter().map(|&(k, q)| (k, rat(q)))))
    }

    #[test]
    fn zero_product_passes() {
        for cfg in [TW, OR] {
            let w = Window::new(4);
            let cand = PostLieCandidate::Map(BilinearMap::zero_on(w, &cfg));
            assert!(postlie_axiom_defects(&cand, w, &cfg).unwrap().is_empty());
            let f = biderivation_from_postlie(&cand, w, &cfg).unwrap();
            assert!(f.entries().all(|(_, e)| e.is_zero()));
        }
    }

    #[test]
    fn bracket_is_not_commutative() {
        let w = Window::new(4);
        let cand = PostLieCandidate::Form(form(rat(1), &[]));
        let report = postlie_axiom_defects(&cand, w, &TW).unwrap();
        assert!(report.total > report.violations.len());
        let d = defect_at(&cand, w, &TW, COMMUTATIVITY, &[GeneratorId::l(1), GeneratorId::l(2)]).unwrap();
        assert_eq!(d, Some(Element::term(rat(-2), GeneratorId::l(3))));
        assert!(matches!(
            biderivation_from_postlie(&cand, w, &TW),
            Err(PostLieError::NotPostLie { .. })
        ));
    }

    #[test]
    fn chi_fails_representation_at_witness() {
        let w = Window::new(6);
        for k in [-4, 0] {
            let cand = PostLieCandidate::Form(form(rat(0), &[(k, 1)]));
            let inputs = [GeneratorId::l(2), GeneratorId::l(1), GeneratorId::l(3)];
            let d = defect_at(&cand, w, &TW, REPRESENTATION, &inputs).unwrap().unwrap();
            assert_eq!(d, Element::generator(GeneratorId::m(6 + k)));
            assert!(defect_at(&cand, w, &TW, COMMUTATIVITY, &inputs[..2])
                .unwrap()
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn witness_examples() {
        let wit = triviality_witness(&form(rat(1), &[]), &TW).unwrap();
        assert_eq!(wit.inputs, [GeneratorId::l(1), GeneratorId::l(2)]);
        assert_eq!(wit.residual, Element::term(rat(-2), GeneratorId::l(3)));
        let wit = triviality_witness(&form(rat(0), &[(3, 2017)]), &TW).unwrap();
        assert_eq!(wit.axiom, REPRESENTATION);
        assert_eq!(wit.residual, Element::term(rat(2017), GeneratorId::m(9)));
        assert_eq!(triviality_witness(&form(rat(0), &[]), &TW), None);
    }

    #[test]
    fn passing_products_are_biderivations() {
        let w = Window::new(3);
        let f = BilinearMap::zero_on(w, &TW);
        let b = biderivation_from_postlie(&PostLieCandidate::Map(f), w, &TW).unwrap();
        assert!(biderivation_defects(&b, w, &TW).unwrap().is_empty());
        let chi = chi_omega(&OmegaSet::spike(0, rat(1)), w, &TW);
        assert!(postlie_axiom_defects(&PostLieCandidate::Map(chi.clone()), w, &TW)
            .unwrap()
            .find(COMMUTATIVITY, &[GeneratorId::l(0), GeneratorId::l(1)])
            .is_none());
    }

    #[test]
    fn derivation_entry_matches_full_check() {
        let w = Window::new(4);
        let mut f = BilinearMap::zero_on(w, &TW);
        f.set(
            GeneratorId::l(1),
            GeneratorId::l(1),
            Element::generator(GeneratorId::l(2)),
        );
        let cand = PostLieCandidate::Map(f);
        let report = postlie_axiom_defects(&cand, w, &TW).unwrap();
        for v in report.violations.iter().filter(|v| v.identity == DERIVATION) {
            let at = defect_at(&cand, w, &TW, DERIVATION, &v.inputs).unwrap().unwrap();
            assert_eq!(at, v.defect);
        }
    }

    #[test]
    fn sweep_size_and_range() {
        let w = Window::new(6);
        assert_eq!(witness_shifts(w), (-10..=0).collect::<Vec<_>>());
        assert_eq!(sweep_forms(w).len(), 6 * (1 + 2 * 11 + 1));
        assert!(matches!(
            verify_triviality_theorem(Window::new(4), &TW, false),
            Err(PostLieError::WindowTooSmall { .. })
        ));
    }
}
