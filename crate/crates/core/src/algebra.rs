//! The Schrödinger-Virasoro algebra SV(ε): generators, elements and the
//! bracket.
//!
//! The basis is `{L_i, Y_j, M_i : i ∈ ℤ, j ∈ ε + ℤ}` with
//!
//! ```text
//! [L_m, L_n] = (m - n) L_{m+n}
//! [L_m, Y_n] = (m/2 - n) Y_{m+n}
//! [L_m, M_n] = -n M_{m+n}
//! [Y_m, Y_n] = (m - n) M_{m+n}
//! [Y_m, M_n] = [M_m, M_n] = 0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Rational;

/// Degree of a generator. Integral for `L` and `M`, in `ε + ℤ` for `Y`.
pub type Grade = Ratio<i64>;

pub fn grade_int(n: i64) -> Grade {
    Grade::from_integer(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("epsilon must be 0 or 1/2, got {0}")]
    InvalidEpsilon(String),
    #[error("{family}[{index}] is not a generator of SV({epsilon})")]
    InvalidIndex {
        family: Family,
        index: String,
        epsilon: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    L,
    Y,
    M,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::L, Family::Y, Family::M];

    pub fn symbol(self) -> char {
        match self {
            Family::L => 'L',
            Family::Y => 'Y',
            Family::M => 'M',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which of the two algebras is meant: `ε = 0` (twisted) or `ε = 1/2`
/// (original).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    Zero,
    Half,
}

impl Epsilon {
    pub fn value(self) -> Grade {
        match self {
            Epsilon::Zero => Grade::zero(),
            Epsilon::Half => Grade::new(1, 2),
        }
    }

    pub fn from_grade(g: Grade) -> Result<Self, AlgebraError> {
        if g.is_zero() {
            Ok(Epsilon::Zero)
        } else if g == Grade::new(1, 2) {
            Ok(Epsilon::Half)
        } else {
            Err(AlgebraError::InvalidEpsilon(fmt_grade(g)))
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Epsilon::Zero => write!(f, "0"),
            Epsilon::Half => write!(f, "1/2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub epsilon: Epsilon,
}

impl AlgebraConfig {
    pub const TWISTED: AlgebraConfig = AlgebraConfig { epsilon: Epsilon::Zero };
    pub const ORIGINAL: AlgebraConfig = AlgebraConfig { epsilon: Epsilon::Half };

    pub fn new(epsilon: Epsilon) -> Self {
        AlgebraConfig { epsilon }
    }

    /// Whether `index` is admissible for `family` in this algebra.
    pub fn admits(&self, family: Family, index: Grade) -> bool {
        match family {
            Family::L | Family::M => index.is_integer(),
            Family::Y => (index - self.epsilon.value()).is_integer(),
        }
    }

    pub fn validate(&self, g: GeneratorId) -> Result<GeneratorId, AlgebraError> {
        if self.admits(g.family, g.index) {
            Ok(g)
        } else {
            Err(AlgebraError::InvalidIndex {
                family: g.family,
                index: fmt_grade(g.index),
                epsilon: self.epsilon.to_string(),
            })
        }
    }

    pub fn validate_element(&self, x: &Element) -> Result<(), AlgebraError> {
        x.generators().try_for_each(|g| self.validate(g).map(|_| ()))
    }
}

pub(crate) fn fmt_grade(g: Grade) -> String {
    if g.is_integer() {
        g.numer().to_string()
    } else {
        format!("{}/{}", g.numer(), g.denom())
    }
}

/// A basis vector `L_i`, `Y_j` or `M_i`. Ordered by family `L < Y < M`, then
/// by ascending index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub family: Family,
    pub index: Grade,
}

impl GeneratorId {
    pub fn new(family: Family, index: Grade) -> Self {
        GeneratorId { family, index }
    }

    pub fn l(m: i64) -> Self {
        GeneratorId::new(Family::L, grade_int(m))
    }

    pub fn m(m: i64) -> Self {
        GeneratorId::new(Family::M, grade_int(m))
    }

    pub fn y(j: i64) -> Self {
        GeneratorId::new(Family::Y, grade_int(j))
    }

    /// `Y_{num/den}`, for half-integer indices.
    pub fn y_frac(num: i64, den: i64) -> Self {
        GeneratorId::new(Family::Y, Grade::new(num, den))
    }

    pub fn grade(&self) -> Grade {
        self.index
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family, fmt_grade(self.index))
    }
}

/// The degree of a generator.
pub fn grade(g: GeneratorId) -> Rational {
    grade_rational(g.index)
}

pub fn grade_rational(g: Grade) -> Rational {
    Rational::new((*g.numer()).into(), (*g.denom()).into())
}

/// Structure constant of `[g1, g2]`: the bracket of two generators is always
/// a multiple of a single generator of degree `g1.index + g2.index`.
pub fn bracket_term(g1: GeneratorId, g2: GeneratorId) -> Option<(Grade, GeneratorId)> {
    use Family::*;
    let (m, n) = (g1.index, g2.index);
    let s = m + n;
    let half = Grade::new(1, 2);
    let (coeff, family) = match (g1.family, g2.family) {
        (L, L) => (m - n, L),
        (L, Y) => (half * m - n, Y),
        (Y, L) => (-(half * n - m), Y),
        (L, M) => (-n, M),
        (M, L) => (m, M),
        (Y, Y) => (m - n, M),
        (Y, M) | (M, Y) | (M, M) => return None,
    };
    if coeff.is_zero() {
        None
    } else {
        Some((coeff, GeneratorId::new(family, s)))
    }
}

/// A finite rational combination of generators. The zero element is the
/// empty combination; no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<GeneratorId, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn generator(g: GeneratorId) -> Self {
        Element::term(Rational::one(), g)
    }

    pub fn term(coeff: Rational, g: GeneratorId) -> Self {
        let mut e = Element::zero();
        e.add_term(coeff, g);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (GeneratorId, Rational)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (g, c) in terms {
            e.add_term(c, g);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (GeneratorId, &Rational)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.terms.keys().copied()
    }

    pub fn coefficient(&self, g: GeneratorId) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, coeff: Rational, g: GeneratorId) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, k: &Rational, other: &Element) {
        if k.is_zero() {
            return;
        }
        for (g, c) in other.terms() {
            self.add_term(k * c, g);
        }
    }

    pub fn scale(&self, k: &Rational) -> Element {
        if k.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(g, c)| (*g, c * k)).collect(),
        }
    }

    /// Keeps only the terms whose generator satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(GeneratorId) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(**g))
                .map(|(g, c)| (*g, c.clone()))
                .collect(),
        }
    }

    /// Projection onto one of the subspaces 𝔏, 𝔜, 𝔐.
    pub fn component(&self, family: Family) -> Element {
        self.filter(|g| g.family == family)
    }
}

impl From<GeneratorId> for Element {
    fn from(g: GeneratorId) -> Self {
        Element::generator(g)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form, e.g. `3*L[2] + 1/2*Y[-1] - 1*M[0]`; the zero element
/// prints as `0`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            if i == 0 {
                write!(f, "{}*{}", fmt_rational(c), g)?;
            } else if c.is_negative() {
                write!(f, " - {}*{}", fmt_rational(&-c), g)?;
            } else {
                write!(f, " + {}*{}", fmt_rational(c), g)?;
            }
        }
        Ok(())
    }
}

/// `[g1, g2]` as an element.
pub fn bracket_basis(g1: GeneratorId, g2: GeneratorId, cfg: &AlgebraConfig) -> Result<Element, AlgebraError> {
    cfg.validate(g1)?;
    cfg.validate(g2)?;
    Ok(bracket_generators(g1, g2))
}

pub(crate) fn bracket_generators(g1: GeneratorId, g2: GeneratorId) -> Element {
    match bracket_term(g1, g2) {
        Some((c, g)) => Element::term(grade_rational(c), g),
        None => Element::zero(),
    }
}

/// Bilinear extension of the generator bracket. Elements are assumed valid;
/// use [`bracket`] at trust boundaries.
pub(crate) fn bracket_unchecked(x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (g1, c1) in x.terms() {
        for (g2, c2) in y.terms() {
            if let Some((c, g)) = bracket_term(g1, g2) {
                out.add_term(c1 * c2 * grade_rational(c), g);
            }
        }
    }
    out
}

/// `[x, g]` for a generator `g`.
pub(crate) fn bracket_with_generator(x: &Element, g: GeneratorId) -> Element {
    let mut out = Element::zero();
    for (h, c) in x.terms() {
        if let Some((k, t)) = bracket_term(h, g) {
            out.add_term(c * grade_rational(k), t);
        }
    }
    out
}

/// `[g, x]` for a generator `g`.
pub(crate) fn generator_bracket(g: GeneratorId, x: &Element) -> Element {
    let mut out = Element::zero();
    for (h, c) in x.terms() {
        if let Some((k, t)) = bracket_term(g, h) {
            out.add_term(c * grade_rational(k), t);
        }
    }
    out
}

pub fn bracket(x: &Element, y: &Element, cfg: &AlgebraConfig) -> Result<Element, AlgebraError> {
    cfg.validate_element(x)?;
    cfg.validate_element(y)?;
    Ok(bracket_unchecked(x, y))
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`, which vanishes in any Lie algebra.
pub fn jacobi_defect(x: &Element, y: &Element, z: &Element, cfg: &AlgebraConfig) -> Result<Element, AlgebraError> {
    for e in [x, y, z] {
        cfg.validate_element(e)?;
    }
    let mut out = bracket_unchecked(x, &bracket_unchecked(y, z));
    out.add_scaled(&Rational::one(), &bracket_unchecked(y, &bracket_unchecked(z, x)));
    out.add_scaled(&Rational::one(), &bracket_unchecked(z, &bracket_unchecked(x, y)));
    Ok(out)
}

impl Serialize for GeneratorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
