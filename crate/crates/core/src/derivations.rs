//! Linear operators on a window: the outer derivations `D1, D2, D3`, inner
//! derivations, derivation checking, the derivation solver and decomposition
//! into `ad x + a D1 + b D2 + c D3`.
//!
//! # Truncation
//!
//! An operator is only known on window generators, and a solver unknown only
//! records the window coordinates of an image. An identity is therefore
//! checked at a pair `(g1, g2)` and output coordinate `c` only when every
//! quantity it involves is represented:
//!
//! * `[g1, g2]` is zero or lies in the window,
//! * `c` lies in the window,
//! * the generators `h` with `[h, g2] ∝ c` or `[g1, h] ∝ c` lie in the window,
//!   i.e. `c.index - g2.index` and `c.index - g1.index` are in range.
//!
//! The restriction of a genuine derivation to the window satisfies every such
//! row, and so does every kernel vector of the solver.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    bracket_generators, bracket_term, bracket_with_generator, generator_bracket, grade_rational, AlgebraConfig,
    AlgebraError, Element, Family, GeneratorId,
};
use crate::linalg::{
    kernel_basis, serialize_rational, solve, LinalgError, Rational, SpanBasis, SparseMatrix, SparseVec,
};
use crate::window::{DefectReport, Window, WindowBasis};

/// Smallest window accepted by the solvers.
pub const MIN_SOLVER_RADIUS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("operator `{label}` is undefined on {generator}")]
    Undefined { label: String, generator: GeneratorId },
    #[error("window radius {radius} is below the solver minimum {min}")]
    WindowTooSmall { radius: u32, min: u32 },
    #[error("operator is not a derivation on this window ({violations} violations)")]
    NotADerivation { violations: usize },
    #[error("operator does not decompose as ad x + a D1 + b D2 + c D3 on the interior")]
    Inconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OuterDerivation {
    D1,
    D2,
    D3,
}

/// A linear map given by its images of the window generators. Images may
/// involve generators outside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    pub label: String,
    action: BTreeMap<GeneratorId, Element>,
}

impl LinearOperator {
    pub fn new(label: impl Into<String>) -> Self {
        LinearOperator {
            label: label.into(),
            action: BTreeMap::new(),
        }
    }

    /// Zero on every generator of the window.
    pub fn zero_on(label: impl Into<String>, w: Window, cfg: &AlgebraConfig) -> Self {
        LinearOperator::from_fn(label, w, cfg, |_| Element::zero())
    }

    pub fn from_fn(
        label: impl Into<String>,
        w: Window,
        cfg: &AlgebraConfig,
        mut f: impl FnMut(GeneratorId) -> Element,
    ) -> Self {
        LinearOperator {
            label: label.into(),
            action: w.generators(cfg).into_iter().map(|g| (g, f(g))).collect(),
        }
    }

    pub fn set(&mut self, g: GeneratorId, image: Element) {
        self.action.insert(g, image);
    }

    pub fn image(&self, g: GeneratorId) -> Option<&Element> {
        self.action.get(&g)
    }

    pub fn images(&self) -> impl Iterator<Item = (GeneratorId, &Element)> {
        self.action.iter().map(|(g, e)| (*g, e))
    }

    fn require(&self, g: GeneratorId) -> Result<&Element, DerivationError> {
        self.action.get(&g).ok_or_else(|| DerivationError::Undefined {
            label: self.label.clone(),
            generator: g,
        })
    }

    /// Linear extension to an element whose generators are all defined.
    pub fn apply(&self, x: &Element) -> Result<Element, DerivationError> {
        let mut out = Element::zero();
        for (g, c) in x.terms() {
            out.add_scaled(c, self.require(g)?);
        }
        Ok(out)
    }

    /// `Σ k_i · op_i`, defined on the union of the operand domains.
    pub fn linear_combination(label: impl Into<String>, terms: &[(Rational, &LinearOperator)]) -> Self {
        let mut action: BTreeMap<GeneratorId, Element> = BTreeMap::new();
        for (k, op) in terms {
            for (g, img) in op.images() {
                action.entry(g).or_default().add_scaled(k, img);
            }
        }
        LinearOperator {
            label: label.into(),
            action,
        }
    }

    /// Same operator with every image cut down to window generators.
    pub fn truncated(&self, w: Window) -> Self {
        LinearOperator {
            label: self.label.clone(),
            action: self
                .action
                .iter()
                .map(|(g, e)| (*g, e.filter(|h| w.contains(h))))
                .collect(),
        }
    }
}

pub fn builtin_derivation(which: OuterDerivation, w: Window, cfg: &AlgebraConfig) -> LinearOperator {
    let label = format!("{which:?}");
    LinearOperator::from_fn(label, w, cfg, |g| outer_image(which, g))
}

pub(crate) fn outer_image(which: OuterDerivation, g: GeneratorId) -> Element {
    let m = g.index;
    match (which, g.family) {
        (OuterDerivation::D1, Family::L) => Element::generator(GeneratorId::new(Family::M, m)),
        (OuterDerivation::D2, Family::L) => Element::term(grade_rational(m), GeneratorId::new(Family::M, m)),
        (OuterDerivation::D3, Family::Y) => Element::generator(g),
        (OuterDerivation::D3, Family::M) => Element::term(Rational::from_integer(2.into()), g),
        _ => Element::zero(),
    }
}

/// `ad x`, i.e. `g ↦ [x, g]` on every window generator.
pub fn inner_derivation(x: &Element, w: Window, cfg: &AlgebraConfig) -> Result<LinearOperator, DerivationError> {
    cfg.validate_element(x)?;
    Ok(LinearOperator::from_fn(format!("ad({x})"), w, cfg, |g| {
        bracket_with_generator(x, g)
    }))
}

/// Whether output coordinate `c` of the identity at `(g1, g2)` is fully
/// represented on the window (see the module docs).
pub(crate) fn coordinate_closed(w: Window, g1: GeneratorId, g2: GeneratorId, c: GeneratorId) -> bool {
    w.contains(c) && w.contains_grade(c.index - g2.index) && w.contains_grade(c.index - g1.index)
}

/// Whether `[g1, g2]` is zero or a window generator.
pub(crate) fn bracket_in_window(w: Window, g1: GeneratorId, g2: GeneratorId) -> bool {
    match bracket_term(g1, g2) {
        Some((_, g)) => w.contains(g),
        None => true,
    }
}

/// `op([g1,g2]) - [op(g1), g2] - [g1, op(g2)]` on every closed pair
/// `g1 < g2` of window generators, restricted to closed coordinates.
pub fn derivation_defect(op: &LinearOperator, w: Window, cfg: &AlgebraConfig) -> Result<DefectReport, DerivationError> {
    let gens = w.generators(cfg);
    let mut report = DefectReport::default();
    for (i, &g1) in gens.iter().enumerate() {
        for &g2 in &gens[i + 1..] {
            if let Some(defect) = derivation_defect_at(op, w, g1, g2)? {
                report.record("derivation", vec![g1, g2], defect);
            }
        }
    }
    Ok(report)
}

/// The entry of [`derivation_defect`] at `(g1, g2)`, or `None` when the
/// pair is not closed. Either order of the pair is accepted.
pub fn derivation_defect_at(
    op: &LinearOperator,
    w: Window,
    g1: GeneratorId,
    g2: GeneratorId,
) -> Result<Option<Element>, DerivationError> {
    if !bracket_in_window(w, g1, g2) {
        return Ok(None);
    }
    let mut defect = op.apply(&bracket_generators(g1, g2))?;
    defect.add_scaled(&-Rational::one(), &bracket_with_generator(op.require(g1)?, g2));
    defect.add_scaled(&-Rational::one(), &generator_bracket(g1, op.require(g2)?));
    Ok(Some(defect.filter(|c| coordinate_closed(w, g1, g2, c))))
}

/// Rows of the derivation identity for an operator whose unknown
/// coefficient of `h` in `op(g)` sits at column `col(g, h)`: one row per
/// closed pair `g1 < g2` and closed output coordinate.
pub(crate) fn derivation_rows(
    basis: &WindowBasis,
    dim: usize,
    col: &dyn Fn(GeneratorId, GeneratorId) -> usize,
) -> Vec<SparseVec> {
    let w = basis.window;
    let gens = basis.generators();
    let mut out = Vec::new();
    for (i, &g1) in gens.iter().enumerate() {
        for &g2 in &gens[i + 1..] {
            if !bracket_in_window(w, g1, g2) {
                continue;
            }
            let mut rows: BTreeMap<GeneratorId, Vec<(usize, Rational)>> = BTreeMap::new();
            if let Some((k, b)) = bracket_term(g1, g2) {
                let k = grade_rational(k);
                for &c in gens {
                    if coordinate_closed(w, g1, g2, c) {
                        rows.entry(c).or_default().push((col(b, c), k.clone()));
                    }
                }
            }
            for &h in gens {
                if let Some((k, c)) = bracket_term(h, g2) {
                    if coordinate_closed(w, g1, g2, c) {
                        rows.entry(c).or_default().push((col(g1, h), -grade_rational(k)));
                    }
                }
                if let Some((k, c)) = bracket_term(g1, h) {
                    if coordinate_closed(w, g1, g2, c) {
                        rows.entry(c).or_default().push((col(g2, h), -grade_rational(k)));
                    }
                }
            }
            for (_, entries) in rows {
                let r = SparseVec::from_entries(dim, entries);
                if !r.is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Unknown layout of the derivation system: the coefficient of `h` in
/// `op(g)` sits at column `pos(g) * n + pos(h)`, i.e. lexicographic in
/// canonical generator order.
#[derive(Debug, Clone)]
pub struct DerivationSystem {
    pub basis: WindowBasis,
    pub matrix: SparseMatrix,
}

impl DerivationSystem {
    pub fn build(w: Window, cfg: &AlgebraConfig) -> Result<Self, DerivationError> {
        if w.radius < MIN_SOLVER_RADIUS {
            return Err(DerivationError::WindowTooSmall {
                radius: w.radius,
                min: MIN_SOLVER_RADIUS,
            });
        }
        let basis = WindowBasis::new(w, *cfg);
        let n = basis.len();
        let col = |g: GeneratorId, h: GeneratorId| basis.position(g).unwrap() * n + basis.position(h).unwrap();
        let matrix = SparseMatrix::from_rows(n * n, derivation_rows(&basis, n * n, &col))?;
        Ok(DerivationSystem { basis, matrix })
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.col_count()
    }

    /// Window coordinates of `op`, in the unknown layout.
    pub fn encode(&self, op: &LinearOperator) -> Result<SparseVec, DerivationError> {
        let n = self.basis.len();
        let mut entries = Vec::new();
        for (i, &g) in self.basis.generators().iter().enumerate() {
            let img = op.require(g)?;
            for (h, c) in img.terms() {
                if let Some(j) = self.basis.position(h) {
                    entries.push((i * n + j, c.clone()));
                }
            }
        }
        Ok(SparseVec::from_entries(n * n, entries))
    }

    pub fn decode(&self, v: &SparseVec, label: impl Into<String>) -> LinearOperator {
        let n = self.basis.len();
        let gens = self.basis.generators();
        let mut op = LinearOperator::new(label);
        for &g in gens {
            op.set(g, Element::zero());
        }
        for (idx, c) in v.entries() {
            let (g, h) = (gens[idx / n], gens[idx % n]);
            let mut img = op.image(g).cloned().unwrap_or_default();
            img.add_term(c.clone(), h);
            op.set(g, img);
        }
        op
    }

    /// Columns `(g, h)` with both generators in the interior, ascending.
    pub fn interior_columns(&self) -> Vec<usize> {
        let n = self.basis.len();
        let inner = self.basis.window.interior();
        let idx: Vec<usize> = (0..n).filter(|&i| inner.contains(self.basis.generators()[i])).collect();
        let mut cols: Vec<usize> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| i * n + j)).collect();
        cols.sort_unstable();
        cols
    }

    /// The family the classification predicts: `ad g` for every window
    /// generator except `M_0`, together with `D1, D2, D3`.
    pub fn predicted_family(&self) -> Result<Vec<LinearOperator>, DerivationError> {
        let w = self.basis.window;
        let cfg = &self.basis.cfg;
        let mut ops = Vec::new();
        for &g in self.basis.generators() {
            if g == GeneratorId::m(0) {
                continue;
            }
            ops.push(inner_derivation(&Element::generator(g), w, cfg)?);
        }
        for d in [OuterDerivation::D1, OuterDerivation::D2, OuterDerivation::D3] {
            ops.push(builtin_derivation(d, w, cfg));
        }
        Ok(ops)
    }
}

/// Kernel of the windowed derivation system.
pub fn solve_derivations(w: Window, cfg: &AlgebraConfig) -> Result<SpanBasis, DerivationError> {
    Ok(kernel_basis(&DerivationSystem::build(w, cfg)?.matrix))
}

/// Comparison of a kernel with a predicted family on interior coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanComparison {
    pub unknowns: usize,
    pub rows: usize,
    pub kernel_dim: usize,
    pub interior_kernel_dim: usize,
    pub interior_predicted_dim: usize,
    /// Every predicted vector lies in the full kernel, unrestricted.
    pub predicted_in_kernel: bool,
    pub interior_kernel_in_predicted: bool,
    pub interior_predicted_in_kernel: bool,
}

impl SpanComparison {
    pub fn compare(
        matrix: &SparseMatrix,
        kernel: &SpanBasis,
        predicted: &[SparseVec],
        interior: &[usize],
    ) -> Result<Self, LinalgError> {
        let mut predicted_in_kernel = true;
        for p in predicted {
            if !kernel.contains(p)? {
                predicted_in_kernel = false;
                break;
            }
        }
        let k_int = kernel.restrict(interior);
        let restricted: Vec<SparseVec> = predicted.iter().map(|p| p.restrict(interior)).collect();
        let p_int = SpanBasis::from_vectors(interior.len(), &restricted)?;
        Ok(SpanComparison {
            unknowns: matrix.col_count(),
            rows: matrix.row_count(),
            kernel_dim: kernel.len(),
            interior_kernel_dim: k_int.len(),
            interior_predicted_dim: p_int.len(),
            predicted_in_kernel,
            interior_kernel_in_predicted: p_int.contains_span(&k_int)?,
            interior_predicted_in_kernel: k_int.contains_span(&p_int)?,
        })
    }

    /// Predicted family lies in the kernel and both spans agree on the
    /// interior.
    pub fn matches(&self) -> bool {
        self.predicted_in_kernel && self.interior_kernel_in_predicted && self.interior_predicted_in_kernel
    }
}

/// Solves the derivation system and compares its kernel with the classified
/// family.
pub fn classify_derivations(w: Window, cfg: &AlgebraConfig) -> Result<(SpanBasis, SpanComparison), DerivationError> {
    let system = DerivationSystem::build(w, cfg)?;
    let kernel = kernel_basis(&system.matrix);
    let predicted = system
        .predicted_family()?
        .iter()
        .map(|op| system.encode(op))
        .collect::<Result<Vec<_>, _>>()?;
    let cmp = SpanComparison::compare(&system.matrix, &kernel, &predicted, &system.interior_columns())?;
    Ok((kernel, cmp))
}

/// `op = ad inner_part + a D1 + b D2 + c D3` on the interior.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationDecomposition {
    pub inner_part: Element,
    #[serde(serialize_with = "serialize_rational")]
    pub a: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub b: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
}

impl DerivationDecomposition {
    pub fn zero() -> Self {
        DerivationDecomposition {
            inner_part: Element::zero(),
            a: Rational::zero(),
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    /// The reassembled image of `g`.
    pub fn image(&self, g: GeneratorId) -> Element {
        let mut out = bracket_with_generator(&self.inner_part, g);
        out.add_scaled(&self.a, &outer_image(OuterDerivation::D1, g));
        out.add_scaled(&self.b, &outer_image(OuterDerivation::D2, g));
        out.add_scaled(&self.c, &outer_image(OuterDerivation::D3, g));
        out
    }
}

/// Generators whose adjoint action can reach a window coordinate from the
/// interior: `|index| <= N + ⌊N/2⌋`, without the central `M_0`.
fn inner_support(w: Window, cfg: &AlgebraConfig) -> Vec<GeneratorId> {
    let reach = Window {
        radius: w.radius + w.interior().radius,
    };
    reach
        .generators(cfg)
        .into_iter()
        .filter(|g| *g != GeneratorId::m(0))
        .collect()
}

/// Finds `(x, a, b, c)` with `op = ad x + a D1 + b D2 + c D3` on every
/// interior generator, comparing window coordinates. `x` carries no `M_0`
/// term.
pub fn decompose_derivation(
    op: &LinearOperator,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<DerivationDecomposition, DerivationError> {
    let defects = derivation_defect(op, w, cfg)?;
    if !defects.is_empty() {
        return Err(DerivationError::NotADerivation {
            violations: defects.total,
        });
    }
    decompose_unchecked(op, w, cfg)
}

pub(crate) fn decompose_unchecked(
    op: &LinearOperator,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<DerivationDecomposition, DerivationError> {
    let support = inner_support(w, cfg);
    let s = support.len();
    let outer = [OuterDerivation::D1, OuterDerivation::D2, OuterDerivation::D3];
    let unknowns = s + outer.len();
    let window_gens = w.generators(cfg);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in w.interior().generators(cfg) {
        let target = op.require(g)?;
        let mut eqs: BTreeMap<GeneratorId, Vec<(usize, Rational)>> =
            window_gens.iter().map(|c| (*c, Vec::new())).collect();
        for (j, &h) in support.iter().enumerate() {
            if let Some((k, c)) = bracket_term(h, g) {
                if let Some(e) = eqs.get_mut(&c) {
                    e.push((j, grade_rational(k)));
                }
            }
        }
        for (j, d) in outer.iter().enumerate() {
            for (c, k) in outer_image(*d, g).terms() {
                if let Some(e) = eqs.get_mut(&c) {
                    e.push((s + j, k.clone()));
                }
            }
        }
        for (c, entries) in eqs {
            let b = target.coefficient(c);
            if entries.is_empty() && b.is_zero() {
                continue;
            }
            rows.push(SparseVec::from_entries(unknowns, entries));
            rhs.push(b);
        }
    }
    let m = SparseMatrix::from_rows(unknowns, rows)?;
    let rhs = SparseVec::from_dense(&rhs);
    let x = solve(&m, &rhs)?.ok_or(DerivationError::Inconsistent)?;
    let inner_part = Element::from_terms(support.iter().enumerate().map(|(j, g)| (*g, x.get(j))));
    Ok(DerivationDecomposition {
        inner_part,
        a: x.get(s),
        b: x.get(s + 1),
        c: x.get(s + 2),
    })
}

/// `ad x + a D1 + b D2 + c D3` as an operator on the window.
pub fn assemble_derivation(d: &DerivationDecomposition, w: Window, cfg: &AlgebraConfig) -> LinearOperator {
    LinearOperator::from_fn("assembled", w, cfg, |g| d.image(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat};

    const TW: AlgebraConfig = AlgebraConfig::TWISTED;
    const OR: AlgebraConfig = AlgebraConfig::ORIGINAL;

    fn el(g: GeneratorId) -> Element {
        Element::generator(g)
    }

    #[test]
    fn outer_derivation_images() {
        let w = Window::new(4);
        let d1 = builtin_derivation(OuterDerivation::D1, w, &TW);
        assert_eq!(d1.image(GeneratorId::l(3)).unwrap(), &el(GeneratorId::m(3)));
        assert!(d1.image(GeneratorId::y(1)).unwrap().is_zero());
        assert!(d1.image(GeneratorId::m(2)).unwrap().is_zero());
        let d2 = builtin_derivation(OuterDerivation::D2, w, &TW);
        assert_eq!(
            d2.image(GeneratorId::l(-2)).unwrap(),
            &Element::term(rat(-2), GeneratorId::m(-2))
        );
        let d3 = builtin_derivation(OuterDerivation::D3, w, &TW);
        assert_eq!(
            d3.image(GeneratorId::m(4)).unwrap(),
            &Element::term(rat(2), GeneratorId::m(4))
        );
        assert!(d3.image(GeneratorId::l(1)).unwrap().is_zero());
    }

    #[test]
    fn inner_derivation_images() {
        let w = Window::new(3);
        let ad_l0 = inner_derivation(&el(GeneratorId::l(0)), w, &TW).unwrap();
        assert_eq!(
            ad_l0.image(GeneratorId::l(2)).unwrap(),
            &Element::term(rat(-2), GeneratorId::l(2))
        );
        let ad_m0 = inner_derivation(&el(GeneratorId::m(0)), w, &TW).unwrap();
        assert!(ad_m0.images().all(|(_, e)| e.is_zero()));
        let ad_y1 = inner_derivation(&el(GeneratorId::y(1)), w, &TW).unwrap();
        assert_eq!(
            ad_y1.image(GeneratorId::y(2)).unwrap(),
            &Element::term(rat(-1), GeneratorId::m(3))
        );
    }

    #[test]
    fn known_derivations_have_no_defect() {
        for cfg in [TW, OR] {
            let w = Window::new(4);
            for d in [OuterDerivation::D1, OuterDerivation::D2, OuterDerivation::D3] {
                assert!(derivation_defect(&builtin_derivation(d, w, &cfg), w, &cfg)
                    .unwrap()
                    .is_empty());
            }
            let ad = inner_derivation(&el(GeneratorId::l(1)), w, &cfg).unwrap();
            assert!(derivation_defect(&ad, w, &cfg).unwrap().is_empty());
        }
    }

    #[test]
    fn projection_onto_l_is_not_a_derivation() {
        let w = Window::new(3);
        let proj = LinearOperator::from_fn("proj_L", w, &TW, |g| {
            if g.family == Family::L {
                el(g)
            } else {
                Element::zero()
            }
        });
        let report = derivation_defect(&proj, w, &TW).unwrap();
        let v = report
            .find("derivation", &[GeneratorId::l(1), GeneratorId::y(1)])
            .expect("defect at (L_1, Y_1)");
        // lhs 0, rhs [L_1, Y_1] = -1/2 Y_2
        assert_eq!(v.defect, Element::term(frac(1, 2), GeneratorId::y(2)));
    }

    #[test]
    fn undefined_generator_is_an_error() {
        let w = Window::new(2);
        let op = LinearOperator::new("empty");
        assert!(matches!(
            derivation_defect(&op, w, &TW),
            Err(DerivationError::Undefined { .. })
        ));
    }

    #[test]
    fn solver_minimum_window() {
        assert!(matches!(
            solve_derivations(Window::new(2), &TW),
            Err(DerivationError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn solver_contains_d1_and_rejects_projection() {
        let w = Window::new(3);
        let system = DerivationSystem::build(w, &TW).unwrap();
        let kernel = kernel_basis(&system.matrix);
        let d1 = system.encode(&builtin_derivation(OuterDerivation::D1, w, &TW)).unwrap();
        assert!(kernel.contains(&d1).unwrap());
        let proj = LinearOperator::from_fn("proj_L", w, &TW, |g| {
            if g.family == Family::L {
                el(g)
            } else {
                Element::zero()
            }
        });
        assert!(!kernel.contains(&system.encode(&proj).unwrap()).unwrap());
    }

    #[test]
    fn kernel_vectors_pass_the_checker() {
        let w = Window::new(3);
        let system = DerivationSystem::build(w, &TW).unwrap();
        let kernel = kernel_basis(&system.matrix);
        for v in kernel.vectors() {
            let op = system.decode(v, "k");
            assert!(derivation_defect(&op, w, &TW).unwrap().is_empty());
        }
    }

    #[test]
    fn decomposition_examples() {
        let w = Window::new(4);
        let d2 = builtin_derivation(OuterDerivation::D2, w, &TW);
        let d = decompose_derivation(&d2, w, &TW).unwrap();
        assert_eq!(
            d,
            DerivationDecomposition {
                b: rat(1),
                ..DerivationDecomposition::zero()
            }
        );

        let ad = inner_derivation(&el(GeneratorId::l(3)), w, &TW).unwrap();
        let d1 = builtin_derivation(OuterDerivation::D1, w, &TW);
        let op = LinearOperator::linear_combination("op", &[(rat(1), &ad), (rat(2), &d1)]);
        let d = decompose_derivation(&op, w, &TW).unwrap();
        assert_eq!(d.inner_part, el(GeneratorId::l(3)));
        assert_eq!((d.a, d.b, d.c), (rat(2), rat(0), rat(0)));

        let central = inner_derivation(&el(GeneratorId::m(0)), w, &TW).unwrap();
        assert_eq!(
            decompose_derivation(&central, w, &TW).unwrap(),
            DerivationDecomposition::zero()
        );
    }

    #[test]
    fn decomposition_rejects_non_derivations() {
        let w = Window::new(3);
        let proj = LinearOperator::from_fn("proj_L", w, &TW, |g| {
            if g.family == Family::L {
                el(g)
            } else {
                Element::zero()
            }
        });
        assert!(matches!(
            decompose_derivation(&proj, w, &TW),
            Err(DerivationError::NotADerivation { .. })
        ));
        assert_eq!(decompose_unchecked(&proj, w, &TW), Err(DerivationError::Inconsistent));
    }
}
