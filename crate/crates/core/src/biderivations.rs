//! Bilinear maps on a window, the symmetric family `χ_Ω`, biderivation
//! checking, slice decomposition and the windowed classification solver.
//!
//! A biderivation is a derivation in each argument:
//!
//! ```text
//! f([x,y],z) = [x,f(y,z)] + [f(x,z),y]     (first argument)
//! f(x,[y,z]) = [f(x,y),z] + [y,f(x,z)]     (second argument)
//! ```
//!
//! Both identities are checked slice by slice with the truncation rule of
//! [`crate::derivations`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{bracket_generators, bracket_unchecked, AlgebraConfig, Element, Family, GeneratorId};
use crate::derivations::{
    decompose_unchecked, derivation_defect, derivation_rows, outer_image, DerivationError, LinearOperator,
    OuterDerivation, SpanComparison, MIN_SOLVER_RADIUS,
};
use crate::linalg::{frac, kernel_basis, LinalgError, Rational, SpanBasis, SparseMatrix, SparseVec};
use crate::window::{DefectReport, Window, WindowBasis};

/// Name of the identity `f([x,y],z) = [x,f(y,z)] + [f(x,z),y]`.
pub const FIRST_ARGUMENT: &str = "first-argument";
/// Name of the identity `f(x,[y,z]) = [f(x,y),z] + [y,f(x,z)]`.
pub const SECOND_ARGUMENT: &str = "second-argument";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiderivationError {
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("bilinear map is undefined on ({0}, {1})")]
    Undefined(GeneratorId, GeneratorId),
    #[error("window radius {radius} is below the solver minimum {min}")]
    WindowTooSmall { radius: u32, min: u32 },
    #[error("map is not a biderivation on this window ({violations} violations)")]
    NotABiderivation { violations: usize },
    #[error("slice at {generator} does not decompose")]
    SliceFailed { generator: GeneratorId },
}

/// The finitely many nonzero `μ_k` of `χ_Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct OmegaSet {
    mu: BTreeMap<i64, Rational>,
}

impl OmegaSet {
    pub fn new() -> Self {
        OmegaSet::default()
    }

    /// Repeated shifts are summed.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Rational)>>(pairs: I) -> Self {
        let mut out = OmegaSet::new();
        for (k, q) in pairs {
            let q = out.get(k) + q;
            out.set(k, q);
        }
        out
    }

    pub fn spike(k: i64, q: Rational) -> Self {
        OmegaSet::from_pairs([(k, q)])
    }

    /// Sets `μ_k`; a zero value removes the shift.
    pub fn set(&mut self, k: i64, q: Rational) {
        if q.is_zero() {
            self.mu.remove(&k);
        } else {
            self.mu.insert(k, q);
        }
    }

    pub fn get(&self, k: i64) -> Rational {
        self.mu.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.mu.iter().map(|(k, q)| (*k, q))
    }
}

/// `f(x,y) = λ[x,y] + χ_Ω(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiderivationForm {
    pub lambda: Rational,
    pub omega: OmegaSet,
}

impl BiderivationForm {
    pub fn new(lambda: Rational, omega: OmegaSet) -> Self {
        BiderivationForm { lambda, omega }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.omega.is_empty()
    }

    /// `χ_Ω` vanishes identically.
    pub fn is_inner(&self) -> bool {
        self.omega.is_empty()
    }
}

/// A bilinear map given by its values on ordered pairs of window generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BilinearMap {
    tensor: BTreeMap<(GeneratorId, GeneratorId), Element>,
}

impl BilinearMap {
    pub fn new() -> Self {
        BilinearMap::default()
    }

    pub fn zero_on(w: Window, cfg: &AlgebraConfig) -> Self {
        BilinearMap::from_fn(w, cfg, |_, _| Element::zero())
    }

    pub fn from_fn(w: Window, cfg: &AlgebraConfig, mut f: impl FnMut(GeneratorId, GeneratorId) -> Element) -> Self {
        let gens = w.generators(cfg);
        let mut tensor = BTreeMap::new();
        for &a in &gens {
            for &b in &gens {
                tensor.insert((a, b), f(a, b));
            }
        }
        BilinearMap { tensor }
    }

    pub fn set(&mut self, a: GeneratorId, b: GeneratorId, value: Element) {
        self.tensor.insert((a, b), value);
    }

    pub fn get(&self, a: GeneratorId, b: GeneratorId) -> Option<&Element> {
        self.tensor.get(&(a, b))
    }

    fn require(&self, a: GeneratorId, b: GeneratorId) -> Result<&Element, BiderivationError> {
        self.get(a, b).ok_or(BiderivationError::Undefined(a, b))
    }

    /// Values in canonical pair order.
    pub fn entries(&self) -> impl Iterator<Item = ((GeneratorId, GeneratorId), &Element)> {
        self.tensor.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.tensor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensor.is_empty()
    }

    /// Bilinear extension to elements.
    pub fn apply(&self, x: &Element, y: &Element) -> Result<Element, BiderivationError> {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out.add_scaled(&(ca * cb), self.require(a, b)?);
            }
        }
        Ok(out)
    }

    /// `y ↦ f(x, y)` on the window.
    pub fn left_slice(
        &self,
        x: GeneratorId,
        w: Window,
        cfg: &AlgebraConfig,
    ) -> Result<LinearOperator, BiderivationError> {
        let mut op = LinearOperator::new(format!("f({x}, -)"));
        for g in w.generators(cfg) {
            op.set(g, self.require(x, g)?.clone());
        }
        Ok(op)
    }

    /// `x ↦ f(x, y)` on the window.
    pub fn right_slice(
        &self,
        y: GeneratorId,
        w: Window,
        cfg: &AlgebraConfig,
    ) -> Result<LinearOperator, BiderivationError> {
        let mut op = LinearOperator::new(format!("f(-, {y})"));
        for g in w.generators(cfg) {
            op.set(g, self.require(g, y)?.clone());
        }
        Ok(op)
    }

    pub fn scale(&self, k: &Rational) -> BilinearMap {
        BilinearMap {
            tensor: self.tensor.iter().map(|(p, e)| (*p, e.scale(k))).collect(),
        }
    }

    /// `Σ k_i · f_i` on the union of the domains.
    pub fn linear_combination(terms: &[(Rational, &BilinearMap)]) -> BilinearMap {
        let mut tensor: BTreeMap<(GeneratorId, GeneratorId), Element> = BTreeMap::new();
        for (k, f) in terms {
            for (p, e) in f.entries() {
                tensor.entry(p).or_default().add_scaled(k, e);
            }
        }
        BilinearMap { tensor }
    }

    /// Every value cut down to window generators.
    pub fn truncated(&self, w: Window) -> BilinearMap {
        BilinearMap {
            tensor: self
                .tensor
                .iter()
                .map(|(p, e)| (*p, e.filter(|g| w.contains(g))))
                .collect(),
        }
    }
}

/// `χ_Ω(g1, g2)`: `Σ μ_k M_{m+n+k}` on `(L_m, L_n)`, zero otherwise.
pub fn chi_value(omega: &OmegaSet, g1: GeneratorId, g2: GeneratorId) -> Element {
    if g1.family != Family::L || g2.family != Family::L {
        return Element::zero();
    }
    let s = g1.index + g2.index;
    Element::from_terms(
        omega
            .iter()
            .map(|(k, q)| (GeneratorId::new(Family::M, s + k), q.clone())),
    )
}

pub fn chi_omega(omega: &OmegaSet, w: Window, cfg: &AlgebraConfig) -> BilinearMap {
    BilinearMap::from_fn(w, cfg, |a, b| chi_value(omega, a, b))
}

/// `λ[g1, g2] + χ_Ω(g1, g2)` on every window pair.
pub fn realize(form: &BiderivationForm, w: Window, cfg: &AlgebraConfig) -> BilinearMap {
    BilinearMap::from_fn(w, cfg, |a, b| form_value(form, a, b))
}

pub fn form_value(form: &BiderivationForm, g1: GeneratorId, g2: GeneratorId) -> Element {
    let mut v = chi_value(&form.omega, g1, g2);
    v.add_scaled(&form.lambda, &bracket_generators(g1, g2));
    v
}

fn relabel(report: DefectReport, identity: &'static str, fixed: GeneratorId, first: bool) -> DefectReport {
    let mut out = DefectReport {
        checked: report.checked,
        total: report.total,
        violations: Vec::new(),
    };
    for mut v in report.violations {
        v.identity = identity;
        // inputs (x, y, z) in the order the identity is written
        if first {
            v.inputs.push(fixed);
        } else {
            v.inputs.insert(0, fixed);
        }
        out.violations.push(v);
    }
    out
}

/// Both identities on every closed triple. For the first identity the
/// inputs are `(x, y, z)` with the slice `x ↦ f(x, z)`; for the second,
/// `(x, y, z)` with the slice `y ↦ f(x, y)`. The defect is left side minus
/// right side.
pub fn biderivation_defects(
    f: &BilinearMap,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<DefectReport, BiderivationError> {
    let gens = w.generators(cfg);
    let first: Vec<Result<DefectReport, BiderivationError>> = gens
        .par_iter()
        .map(|&z| {
            let slice = f.right_slice(z, w, cfg)?;
            Ok(relabel(derivation_defect(&slice, w, cfg)?, FIRST_ARGUMENT, z, true))
        })
        .collect();
    let second: Vec<Result<DefectReport, BiderivationError>> = gens
        .par_iter()
        .map(|&x| {
            let slice = f.left_slice(x, w, cfg)?;
            Ok(relabel(derivation_defect(&slice, w, cfg)?, SECOND_ARGUMENT, x, false))
        })
        .collect();
    let mut report = DefectReport::default();
    for r in first.into_iter().chain(second) {
        report.merge(r?);
    }
    Ok(report)
}

pub fn is_symmetric(f: &BilinearMap) -> bool {
    f.entries().all(|((a, b), v)| f.get(b, a) == Some(v))
}

pub fn is_skewsymmetric(f: &BilinearMap) -> bool {
    f.entries()
        .all(|((a, b), v)| f.get(b, a).map(|u| u == &-v).unwrap_or(false))
}

/// Per-slice decomposition
///
/// ```text
/// f(x, y) = Σ ρ_i(x) D_i(y) + [φ(x), y] = Σ θ_i(y) D_i(x) + [x, ψ(y)]
/// ```
///
/// with `φ` and `ψ` free of `M_0` terms. `rho[i]` and `theta[i]` hold the
/// coefficients of `D_{i+1}`; zero values are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiderivationDecomposition {
    pub phi: LinearOperator,
    pub psi: LinearOperator,
    pub rho: [BTreeMap<GeneratorId, Rational>; 3],
    pub theta: [BTreeMap<GeneratorId, Rational>; 3],
}

impl BiderivationDecomposition {
    fn functional(f: &[BTreeMap<GeneratorId, Rational>; 3], i: usize, g: GeneratorId) -> Rational {
        f[i].get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rho(&self, i: usize, g: GeneratorId) -> Rational {
        Self::functional(&self.rho, i, g)
    }

    pub fn theta(&self, i: usize, g: GeneratorId) -> Rational {
        Self::functional(&self.theta, i, g)
    }

    /// `Σ ρ_i(x) D_i(y) + [φ(x), y]`.
    pub fn left_value(&self, x: GeneratorId, y: GeneratorId) -> Element {
        let mut out = match self.phi.image(x) {
            Some(p) => bracket_unchecked(p, &Element::generator(y)),
            None => Element::zero(),
        };
        for (i, d) in OUTER.iter().enumerate() {
            out.add_scaled(&self.rho(i, x), &outer_image(*d, y));
        }
        out
    }

    /// `Σ θ_i(y) D_i(x) + [x, ψ(y)]`.
    pub fn right_value(&self, x: GeneratorId, y: GeneratorId) -> Element {
        let mut out = match self.psi.image(y) {
            Some(p) => bracket_unchecked(&Element::generator(x), p),
            None => Element::zero(),
        };
        for (i, d) in OUTER.iter().enumerate() {
            out.add_scaled(&self.theta(i, y), &outer_image(*d, x));
        }
        out
    }
}

const OUTER: [OuterDerivation; 3] = [OuterDerivation::D1, OuterDerivation::D2, OuterDerivation::D3];

/// Decomposes every left and right slice of a biderivation. Slices are
/// matched on interior generators against window coordinates, as in
/// [`crate::derivations::decompose_derivation`].
pub fn decompose_biderivation(
    f: &BilinearMap,
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<BiderivationDecomposition, BiderivationError> {
    let defects = biderivation_defects(f, w, cfg)?;
    if !defects.is_empty() {
        return Err(BiderivationError::NotABiderivation {
            violations: defects.total,
        });
    }
    let gens = w.generators(cfg);
    let slice = |g: GeneratorId, left: bool| -> Result<_, BiderivationError> {
        let op = if left {
            f.left_slice(g, w, cfg)?
        } else {
            f.right_slice(g, w, cfg)?
        };
        decompose_unchecked(&op, w, cfg).map_err(|e| match e {
            DerivationError::Inconsistent => BiderivationError::SliceFailed { generator: g },
            e => e.into(),
        })
    };
    let mut phi = LinearOperator::new("phi");
    let mut psi = LinearOperator::new("psi");
    let mut rho: [BTreeMap<GeneratorId, Rational>; 3] = Default::default();
    let mut theta: [BTreeMap<GeneratorId, Rational>; 3] = Default::default();
    for &g in &gens {
        let l = slice(g, true)?;
        phi.set(g, l.inner_part);
        let r = slice(g, false)?;
        // x ↦ [x, ψ(y)] is ad(-ψ(y))
        psi.set(g, -&r.inner_part);
        for (i, (a, b)) in [(l.a, r.a), (l.b, r.b), (l.c, r.c)].into_iter().enumerate() {
            if !a.is_zero() {
                rho[i].insert(g, a);
            }
            if !b.is_zero() {
                theta[i].insert(g, b);
            }
        }
    }
    Ok(BiderivationDecomposition { phi, psi, rho, theta })
}

/// Unknown layout of the biderivation system: the coefficient of `h` in
/// `f(a, b)` sits at column `(pos(a) * n + pos(b)) * n + pos(h)`.
#[derive(Debug, Clone)]
pub struct BiderivationSystem {
    pub basis: WindowBasis,
    pub matrix: SparseMatrix,
}

impl BiderivationSystem {
    pub fn build(w: Window, cfg: &AlgebraConfig) -> Result<Self, BiderivationError> {
        if w.radius < MIN_SOLVER_RADIUS {
            return Err(BiderivationError::WindowTooSmall {
                radius: w.radius,
                min: MIN_SOLVER_RADIUS,
            });
        }
        let basis = WindowBasis::new(w, *cfg);
        let n = basis.len();
        let dim = n * n * n;
        let pos = |g: GeneratorId| basis.position(g).unwrap();
        let gens = basis.generators().to_vec();
        let second: Vec<Vec<SparseVec>> = gens
            .par_iter()
            .map(|&x| derivation_rows(&basis, dim, &|g, h| (pos(x) * n + pos(g)) * n + pos(h)))
            .collect();
        let first: Vec<Vec<SparseVec>> = gens
            .par_iter()
            .map(|&z| derivation_rows(&basis, dim, &|g, h| (pos(g) * n + pos(z)) * n + pos(h)))
            .collect();
        let rows: Vec<SparseVec> = first.into_iter().chain(second).flatten().collect();
        let matrix = SparseMatrix::from_rows(dim, rows)?;
        Ok(BiderivationSystem { basis, matrix })
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.col_count()
    }

    fn column(&self, a: GeneratorId, b: GeneratorId, h: GeneratorId) -> Option<usize> {
        let n = self.basis.len();
        Some((self.basis.position(a)? * n + self.basis.position(b)?) * n + self.basis.position(h)?)
    }

    /// Window coordinates of `f`.
    pub fn encode(&self, f: &BilinearMap) -> Result<SparseVec, BiderivationError> {
        let gens = self.basis.generators();
        let mut entries = Vec::new();
        for &a in gens {
            for &b in gens {
                for (h, c) in f.require(a, b)?.terms() {
                    if let Some(j) = self.column(a, b, h) {
                        entries.push((j, c.clone()));
                    }
                }
            }
        }
        Ok(SparseVec::from_entries(self.unknowns(), entries))
    }

    pub fn decode(&self, v: &SparseVec) -> BilinearMap {
        let n = self.basis.len();
        let gens = self.basis.generators();
        let mut f = BilinearMap::zero_on(self.basis.window, &self.basis.cfg);
        for (idx, c) in v.entries() {
            let (a, b, h) = (gens[idx / (n * n)], gens[(idx / n) % n], gens[idx % n]);
            let mut e = f.get(a, b).cloned().unwrap_or_default();
            e.add_term(c.clone(), h);
            f.set(a, b, e);
        }
        f
    }

    /// Columns with both arguments and the output generator in the interior.
    pub fn interior_columns(&self) -> Vec<usize> {
        let inner = self.basis.window.interior();
        let gens: Vec<GeneratorId> = self
            .basis
            .generators()
            .iter()
            .copied()
            .filter(|g| inner.contains(*g))
            .collect();
        let mut cols = Vec::new();
        for &a in &gens {
            for &b in &gens {
                for &h in &gens {
                    cols.extend(self.column(a, b, h));
                }
            }
        }
        cols.sort_unstable();
        cols
    }

    /// The bracket together with `χ` of every representable single shift.
    pub fn predicted_family(&self) -> Vec<BilinearMap> {
        let w = self.basis.window;
        let cfg = &self.basis.cfg;
        let mut out = vec![realize(
            &BiderivationForm::new(Rational::one(), OmegaSet::new()),
            w,
            cfg,
        )];
        for k in representable_shifts(w) {
            out.push(chi_omega(&OmegaSet::spike(k, Rational::one()), w, cfg));
        }
        out
    }

    /// Rows `f(a, b) + f(b, a) = 0` for every window pair and coordinate.
    pub fn skew_rows(&self) -> Vec<SparseVec> {
        let gens = self.basis.generators();
        let mut rows = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i..] {
                for &h in gens {
                    let (p, q) = (self.column(a, b, h).unwrap(), self.column(b, a, h).unwrap());
                    rows.push(SparseVec::from_entries(
                        self.unknowns(),
                        [(p, Rational::one()), (q, Rational::one())],
                    ));
                }
            }
        }
        rows
    }
}

/// Shifts `k` with `χ_{μ_k}` nonzero on the interior: `|k| <= 3⌊N/2⌋`.
pub fn representable_shifts(w: Window) -> Vec<i64> {
    let r = 3 * w.interior().radius as i64;
    (-r..=r).collect()
}

/// Kernel of the windowed biderivation system with a comparison against the
/// classified family.
pub fn classify_biderivations(
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<(SpanBasis, SpanComparison), BiderivationError> {
    let system = BiderivationSystem::build(w, cfg)?;
    let kernel = kernel_basis(&system.matrix);
    let cmp = compare_with_prediction(&system, &kernel)?;
    Ok((kernel, cmp))
}

pub(crate) fn compare_with_prediction(
    system: &BiderivationSystem,
    kernel: &SpanBasis,
) -> Result<SpanComparison, BiderivationError> {
    let predicted = system
        .predicted_family()
        .iter()
        .map(|f| system.encode(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpanComparison::compare(
        &system.matrix,
        kernel,
        &predicted,
        &system.interior_columns(),
    )?)
}

/// Skew-symmetric part of the windowed biderivation kernel.
pub fn skew_biderivations(
    w: Window,
    cfg: &AlgebraConfig,
) -> Result<(BiderivationSystem, SpanBasis), BiderivationError> {
    let system = BiderivationSystem::build(w, cfg)?;
    let mut m = system.matrix.clone();
    for r in system.skew_rows() {
        m.push_row(r);
    }
    let kernel = kernel_basis(&m);
    Ok((system, kernel))
}

/// Which output coordinates [`match_form_on`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchScope {
    /// Window coordinates of the values on interior pairs.
    Window,
    /// Interior coordinates only.
    Interior,
}

/// Reads `(λ, Ω)` off the interior `L` pairs and checks that `f` agrees with
/// `realize(λ, Ω)` on every interior pair, comparing window coordinates.
pub fn match_form(f: &BilinearMap, w: Window, cfg: &AlgebraConfig) -> Option<BiderivationForm> {
    match_form_on(f, w, cfg, MatchScope::Window)
}

pub fn match_form_on(f: &BilinearMap, w: Window, cfg: &AlgebraConfig, scope: MatchScope) -> Option<BiderivationForm> {
    let inner = w.interior();
    let visible = match scope {
        MatchScope::Window => w,
        MatchScope::Interior => inner,
    };
    let r = inner.radius as i64;
    if r == 0 {
        return None;
    }
    let (m, n) = (-r, -r + 1);
    let lambda = f
        .get(GeneratorId::l(m), GeneratorId::l(n))?
        .coefficient(GeneratorId::l(m + n))
        / frac(m - n, 1);
    let mut omega = OmegaSet::new();
    for m in -r..=r {
        for n in -r..=r {
            let v = f.get(GeneratorId::l(m), GeneratorId::l(n))?;
            for (g, c) in v.component(Family::M).terms() {
                if !visible.contains(g) {
                    continue;
                }
                let k = g.index.to_integer() - m - n;
                let seen = omega.get(k);
                if seen.is_zero() {
                    omega.set(k, c.clone());
                } else if &seen != c {
                    return None;
                }
            }
        }
    }
    let form = BiderivationForm::new(lambda, omega);
    for a in inner.generators(cfg) {
        for b in inner.generators(cfg) {
            let expected = form_value(&form, a, b).filter(|g| visible.contains(g));
            if f.get(a, b)?.filter(|g| visible.contains(g)) != expected {
                return None;
            }
        }
    }
    Some(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    const TW: AlgebraConfig = AlgebraConfig::TWISTED;
    const OR: AlgebraConfig = AlgebraConfig::ORIGINAL;

    fn form(lambda: i64, spikes: &[(i64, i64)]) -> BiderivationForm {
        BiderivationForm::new(
            rat(lambda),
            OmegaSet::from_pairs(spikes.iter().map(|&(k, q)| (k, rat(q)))),
        )
    }

    #[test]
    fn omega_drops_zero_values() {
        let mut o = OmegaSet::from_pairs([(2, rat(1)), (2, rat(-1)), (3, rat(4))]);
        assert_eq!(o.len(), 1);
        o.set(3, rat(0));
        assert!(o.is_empty());
    }

    #[test]
    fn chi_values() {
        let w = Window::new(3);
        let o = OmegaSet::spike(2016, rat(2017));
        let f = chi_omega(&o, w, &TW);
        assert_eq!(
            f.get(GeneratorId::l(1), GeneratorId::l(-3)).unwrap(),
            &Element::term(rat(2017), GeneratorId::m(2014))
        );
        assert!(f.get(GeneratorId::y(1), GeneratorId::l(2)).unwrap().is_zero());
        assert!(f.get(GeneratorId::m(1), GeneratorId::l(2)).unwrap().is_zero());
        assert!(chi_omega(&OmegaSet::new(), w, &TW).entries().all(|(_, v)| v.is_zero()));
    }

    #[test]
    fn realize_examples() {
        let w = Window::new(3);
        let f = realize(&form(0, &[(3, 2017)]), w, &TW);
        assert_eq!(
            f.get(GeneratorId::l(1), GeneratorId::l(2)).unwrap(),
            &Element::term(rat(2017), GeneratorId::m(6))
        );
        let f = realize(&form(2, &[(0, 1)]), w, &TW);
        assert_eq!(
            f.get(GeneratorId::l(1), GeneratorId::l(1)).unwrap(),
            &Element::generator(GeneratorId::m(2))
        );
        let f = realize(&form(1, &[]), w, &OR);
        for ((a, b), v) in f.entries() {
            assert_eq!(v, &bracket_generators(a, b));
        }
    }

    #[test]
    fn classified_forms_are_biderivations() {
        let w = Window::new(4);
        for cfg in [TW, OR] {
            assert!(biderivation_defects(&realize(&form(5, &[]), w, &cfg), w, &cfg)
                .unwrap()
                .is_empty());
            assert!(
                biderivation_defects(&chi_omega(&OmegaSet::spike(3, rat(2017)), w, &cfg), w, &cfg)
                    .unwrap()
                    .is_empty()
            );
        }
    }

    #[test]
    fn shifted_sum_violates_second_identity() {
        let w = Window::new(3);
        let f = BilinearMap::from_fn(w, &TW, |a, b| {
            if a.family == Family::L && b.family == Family::L {
                let s = a.index + b.index;
                Element::term(crate::algebra::grade_rational(s), GeneratorId::new(Family::M, s))
            } else {
                Element::zero()
            }
        });
        let report = biderivation_defects(&f, w, &TW).unwrap();
        // x = L_1 with the pair (L_0, L_2): f(L_1, [L_0, L_2]) = -6 M_3 against -8 M_3
        let v = report
            .find(
                SECOND_ARGUMENT,
                &[GeneratorId::l(1), GeneratorId::l(0), GeneratorId::l(2)],
            )
            .expect("second-argument defect");
        assert_eq!(v.defect, Element::term(rat(2), GeneratorId::m(3)));
    }

    #[test]
    fn symmetry_checks() {
        let w = Window::new(2);
        let bracket = realize(&form(1, &[]), w, &TW);
        assert!(is_skewsymmetric(&bracket) && !is_symmetric(&bracket));
        let chi = chi_omega(&OmegaSet::spike(1, rat(-3)), w, &TW);
        assert!(is_symmetric(&chi) && !is_skewsymmetric(&chi));
        let zero = BilinearMap::zero_on(w, &TW);
        assert!(is_symmetric(&zero) && is_skewsymmetric(&zero));
    }

    #[test]
    fn decomposition_of_inner_form() {
        let w = Window::new(4);
        let f = realize(&form(3, &[]), w, &TW);
        let d = decompose_biderivation(&f, w, &TW).unwrap();
        for g in w.generators(&TW) {
            let expected = if g == GeneratorId::m(0) {
                Element::zero()
            } else {
                Element::term(rat(3), g)
            };
            assert_eq!(d.phi.image(g).unwrap(), &expected, "phi({g})");
            assert_eq!(d.psi.image(g).unwrap(), &expected, "psi({g})");
        }
        assert!(d.rho.iter().chain(d.theta.iter()).all(|m| m.is_empty()));
    }

    #[test]
    fn decomposition_of_chi() {
        let w = Window::new(4);
        let k = 1;
        let f = chi_omega(&OmegaSet::spike(k, rat(1)), w, &TW);
        let d = decompose_biderivation(&f, w, &TW).unwrap();
        for m in -4..=4i64 {
            let l = GeneratorId::l(m);
            assert_eq!(d.rho(0, l), if m == -k { rat(1) } else { rat(0) });
            assert_eq!(d.theta(0, l), if m == -k { rat(1) } else { rat(0) });
            assert!(d.rho(1, l).is_zero() && d.theta(1, l).is_zero());
            if m != -k {
                assert_eq!(
                    d.phi.image(l).unwrap().coefficient(GeneratorId::m(m + k)),
                    frac(1, m + k),
                    "phi(L_{m})"
                );
            }
        }
        let zero = decompose_biderivation(&BilinearMap::zero_on(w, &TW), w, &TW).unwrap();
        assert!(zero.phi.images().all(|(_, e)| e.is_zero()));
    }

    #[test]
    fn decomposition_reassembles() {
        let w = Window::new(4);
        let f = realize(&form(-2, &[(0, 1), (2, 3)]), w, &OR);
        let d = decompose_biderivation(&f, w, &OR).unwrap();
        for x in w.generators(&OR) {
            for y in w.interior().generators(&OR) {
                let target = f.get(x, y).unwrap().filter(|g| w.contains(g));
                assert_eq!(d.left_value(x, y).filter(|g| w.contains(g)), target);
                let target = f.get(y, x).unwrap().filter(|g| w.contains(g));
                assert_eq!(d.right_value(y, x).filter(|g| w.contains(g)), target);
            }
        }
    }

    #[test]
    fn decomposition_rejects_non_biderivations() {
        let w = Window::new(3);
        let mut f = BilinearMap::zero_on(w, &TW);
        f.set(
            GeneratorId::l(1),
            GeneratorId::y(1),
            Element::generator(GeneratorId::l(0)),
        );
        assert!(matches!(
            decompose_biderivation(&f, w, &TW),
            Err(BiderivationError::NotABiderivation { .. })
        ));
    }

    #[test]
    fn match_form_examples() {
        let w = Window::new(4);
        let f = realize(&form(3, &[(1, 2)]), w, &TW);
        assert_eq!(match_form(&f, w, &TW), Some(form(3, &[(1, 2)])));
        let f = chi_omega(&OmegaSet::spike(3, rat(2017)), w, &TW);
        assert_eq!(match_form(&f, w, &TW), Some(form(0, &[(3, 2017)])));
        let mut f = BilinearMap::zero_on(w, &TW);
        f.set(
            GeneratorId::l(1),
            GeneratorId::y(1),
            Element::generator(GeneratorId::l(0)),
        );
        assert_eq!(match_form(&f, w, &TW), None);
    }

    #[test]
    fn solver_contains_classified_forms() {
        let w = Window::new(3);
        let system = BiderivationSystem::build(w, &TW).unwrap();
        let kernel = kernel_basis(&system.matrix);
        for f in [realize(&form(1, &[]), w, &TW), realize(&form(0, &[(0, 1)]), w, &TW)] {
            assert!(kernel.contains(&system.encode(&f).unwrap()).unwrap());
        }
        let mut bad = BilinearMap::zero_on(w, &TW);
        bad.set(
            GeneratorId::l(1),
            GeneratorId::y(1),
            Element::generator(GeneratorId::l(0)),
        );
        assert!(!kernel.contains(&system.encode(&bad).unwrap()).unwrap());
    }
}
