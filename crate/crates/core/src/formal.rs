//! Four families of scalar constraints that arise when a biderivation is
//! expanded on `L`, `Y`, `M` generators, solved exactly on a window.
//!
//! | system | unknowns | relation | solution space |
//! |---|---|---|---|
//! | [`solve_delta_family`] | `k`, `h` | `(i-n) k^(m)_i = (2m-n-i) h^(n)_{n-m+i}` | `k^(m)_i = h^(m)_i = δ_{m,i} λ` |
//! | [`solve_vanishing_family`] | `t`, `g` | `(i-n/2) t^(m)_i = (3m/2-n-i) g^(n)_{n-m+i}` | zero |
//! | [`solve_shift_family`] | `s`, `e`, `ρ1`, `ρ2`, `θ1`, `θ2` | see the function | `s^(m)_{m+k} = -e^(m)_{m+k} = μ_k/(m+k)` |
//! | [`solve_diagonal_family`] | `q` | `(m/2-i) q^(n)_i = 0` for `i ≠ n, m-n` | supported on `i = n` |
//!
//! Every system has one row per admissible index triple (or pair) inside the
//! window.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::derivations::SpanComparison;
use crate::linalg::{frac, kernel_basis, rat, LinalgError, Rational, SpanBasis, SparseMatrix, SparseVec};
use crate::window::Window;

/// One scalar unknown: `family^(upper)_lower`, or a functional
/// `family(L[upper])` when `lower` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient {
    pub family: &'static str,
    pub upper: i64,
    pub lower: Option<i64>,
}

impl Coefficient {
    pub fn entry(family: &'static str, upper: i64, lower: i64) -> Self {
        Coefficient {
            family,
            upper,
            lower: Some(lower),
        }
    }

    pub fn functional(family: &'static str, upper: i64) -> Self {
        Coefficient {
            family,
            upper,
            lower: None,
        }
    }

    fn inside(&self, w: Window) -> bool {
        let r = w.radius as i64;
        self.upper.abs() <= r && self.lower.is_none_or(|i| i.abs() <= r)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(i) => write!(f, "{}^({})_{}", self.family, self.upper, i),
            None => write!(f, "{}(L[{}])", self.family, self.upper),
        }
    }
}

/// Index tuple that produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub relation: &'static str,
    pub m: i64,
    pub n: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<i64>,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.i {
            Some(i) => write!(f, "{} (m,i,n)=({},{},{})", self.relation, self.m, i, self.n),
            None => write!(f, "{} (m,n)=({},{})", self.relation, self.m, self.n),
        }
    }
}

/// A values assignment to coefficients; anything absent is zero.
pub type Assignment = BTreeMap<Coefficient, Rational>;

/// A windowed coefficient system with its predicted solution family.
#[derive(Debug, Clone)]
pub struct CoefficientSystem {
    pub name: &'static str,
    pub window: Window,
    coefficients: Vec<Coefficient>,
    index: HashMap<Coefficient, usize>,
    pub matrix: SparseMatrix,
    pub labels: Vec<RowLabel>,
    predicted: Vec<Assignment>,
}

impl CoefficientSystem {
    fn new(name: &'static str, window: Window, coefficients: Vec<Coefficient>) -> Self {
        let index = coefficients.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let dim = coefficients.len();
        CoefficientSystem {
            name,
            window,
            coefficients,
            index,
            matrix: SparseMatrix::new(dim),
            labels: Vec::new(),
            predicted: Vec::new(),
        }
    }

    fn push(&mut self, label: RowLabel, terms: &[(Rational, Coefficient)]) {
        let entries = terms.iter().map(|(k, c)| (self.index[c], k.clone()));
        self.matrix
            .push_row(SparseVec::from_entries(self.coefficients.len(), entries));
        self.labels.push(label);
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    pub fn predicted(&self) -> &[Assignment] {
        &self.predicted
    }

    /// Coordinates of an assignment; coefficients outside the window are
    /// dropped.
    pub fn encode(&self, a: &Assignment) -> SparseVec {
        SparseVec::from_entries(
            self.coefficients.len(),
            a.iter().filter_map(|(c, q)| self.index.get(c).map(|&i| (i, q.clone()))),
        )
    }

    pub fn decode(&self, v: &SparseVec) -> Assignment {
        v.entries()
            .iter()
            .map(|(i, q)| (self.coefficients[*i], q.clone()))
            .collect()
    }

    /// First row the assignment violates, in emission order.
    pub fn first_violation(&self, a: &Assignment) -> Option<RowLabel> {
        self.violations(a).into_iter().next()
    }

    pub fn violations(&self, a: &Assignment) -> Vec<RowLabel> {
        let v = self.encode(a);
        self.matrix
            .rows()
            .iter()
            .zip(&self.labels)
            .filter(|(r, _)| !r.dot(&v).is_zero())
            .map(|(_, l)| *l)
            .collect()
    }

    fn interior_columns(&self) -> Vec<usize> {
        let inner = self.window.interior();
        (0..self.coefficients.len())
            .filter(|&i| self.coefficients[i].inside(inner))
            .collect()
    }

    /// Interior coefficients that occur in no row with a nonzero
    /// coefficient.
    pub fn free_directions(&self) -> Vec<Coefficient> {
        let mut used = vec![false; self.coefficients.len()];
        for r in self.matrix.rows() {
            for (c, _) in r.entries() {
                used[*c] = true;
            }
        }
        self.interior_columns()
            .into_iter()
            .filter(|&c| !used[c])
            .map(|c| self.coefficients[c])
            .collect()
    }

    pub fn solve(&self) -> Result<(SpanBasis, FormalVerdict), LinalgError> {
        let kernel = kernel_basis(&self.matrix);
        let predicted: Vec<SparseVec> = self.predicted.iter().map(|a| self.encode(a)).collect();
        let comparison = SpanComparison::compare(&self.matrix, &kernel, &predicted, &self.interior_columns())?;
        let verdict = FormalVerdict {
            system: self.name,
            window: self.window.radius,
            holds: comparison.matches(),
            comparison,
            free_directions: self.free_directions().iter().map(|c| c.to_string()).collect(),
            counterexample: None,
        };
        Ok((kernel, verdict))
    }

    fn with_counterexample(
        &self,
        solved: (SpanBasis, FormalVerdict),
        description: &str,
        candidate: &Assignment,
    ) -> (SpanBasis, FormalVerdict) {
        let (kernel, mut verdict) = solved;
        verdict.counterexample = Some(Counterexample {
            candidate: description.to_string(),
            violated_rows: self.violations(candidate).len(),
            first_row: self.first_violation(candidate),
        });
        (kernel, verdict)
    }
}

/// A candidate the solution space must reject, with the first row it
/// breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub candidate: String,
    pub violated_rows: usize,
    pub first_row: Option<RowLabel>,
}

impl Counterexample {
    pub fn rejected(&self) -> bool {
        self.first_row.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormalVerdict {
    pub system: &'static str,
    pub window: u32,
    /// Predicted family lies in the kernel and both agree on the interior.
    pub holds: bool,
    #[serde(flatten)]
    pub comparison: SpanComparison,
    pub free_directions: Vec<String>,
    pub counterexample: Option<Counterexample>,
}

fn range(w: Window) -> std::ops::RangeInclusive<i64> {
    let r = w.radius as i64;
    -r..=r
}

fn entries_of(families: &[&'static str], w: Window) -> Vec<Coefficient> {
    let mut out = Vec::new();
    for f in families {
        for m in range(w) {
            for i in range(w) {
                out.push(Coefficient::entry(f, m, i));
            }
        }
    }
    out
}

fn functionals_of(families: &[&'static str], w: Window) -> Vec<Coefficient> {
    families
        .iter()
        .flat_map(|f| range(w).map(move |m| Coefficient::functional(f, m)))
        .collect()
}

/// `(i-n) k^(m)_i = (2m-n-i) h^(n)_{n-m+i}` over all `m, n, i` with every
/// index in the window.
pub fn delta_family_system(w: Window) -> CoefficientSystem {
    let mut sys = CoefficientSystem::new("delta-family", w, entries_of(&["k", "h"], w));
    for m in range(w) {
        for n in range(w) {
            for i in range(w) {
                let j = n - m + i;
                if !w.contains_grade(j.into()) {
                    continue;
                }
                sys.push(
                    RowLabel {
                        relation: "delta",
                        m,
                        n,
                        i: Some(i),
                    },
                    &[
                        (rat(i - n), Coefficient::entry("k", m, i)),
                        (rat(-(2 * m - n - i)), Coefficient::entry("h", n, j)),
                    ],
                );
            }
        }
    }
    sys.predicted.push(
        range(w)
            .flat_map(|m| [Coefficient::entry("k", m, m), Coefficient::entry("h", m, m)])
            .map(|c| (c, Rational::one()))
            .collect(),
    );
    sys
}

pub fn solve_delta_family(w: Window) -> Result<(SpanBasis, FormalVerdict), LinalgError> {
    let sys = delta_family_system(w);
    let mut bad = sys.predicted[0].clone();
    *bad.entry(Coefficient::entry("k", 1, 0)).or_insert_with(Rational::zero) += Rational::one();
    let solved = sys.solve()?;
    Ok(sys.with_counterexample(solved, "delta family with k^(1)_0 raised by 1", &bad))
}

/// `(i-n/2) t^(m)_i = (3m/2-n-i) g^(n)_{n-m+i}` over all in-window indices.
pub fn vanishing_family_system(w: Window) -> CoefficientSystem {
    let mut sys = CoefficientSystem::new("vanishing-family", w, entries_of(&["t", "g"], w));
    for m in range(w) {
        for n in range(w) {
            for i in range(w) {
                let j = n - m + i;
                if !w.contains_grade(j.into()) {
                    continue;
                }
                sys.push(
                    RowLabel {
                        relation: "vanishing",
                        m,
                        n,
                        i: Some(i),
                    },
                    &[
                        (frac(2 * i - n, 2), Coefficient::entry("t", m, i)),
                        (-frac(3 * m - 2 * n - 2 * i, 2), Coefficient::entry("g", n, j)),
                    ],
                );
            }
        }
    }
    sys
}

pub fn solve_vanishing_family(w: Window) -> Result<(SpanBasis, FormalVerdict), LinalgError> {
    let sys = vanishing_family_system(w);
    let bad: Assignment = [(Coefficient::entry("t", 2, 2), Rational::one())].into_iter().collect();
    let solved = sys.solve()?;
    Ok(sys.with_counterexample(solved, "t^(2)_2 = 1, all else 0", &bad))
}

/// The joint system in `s`, `e` and the functionals `ρ1, ρ2, θ1, θ2`:
///
/// ```text
/// i s^(m)_i = -(n-m+i) e^(n)_{n-m+i}          i ≠ 0, i ≠ m-n
/// ρ1(L_m) + n ρ2(L_m) = -(n-m) e^(n)_{n-m}    m ≠ n
/// θ1(L_n) + m θ2(L_n) = (m-n) s^(m)_{m-n}     m ≠ n
/// ```
///
/// On the diagonal `m = n` the last two relations pick up the other side's
/// outer part and are not emitted.
pub fn shift_family_system(w: Window) -> CoefficientSystem {
    let mut coeffs = entries_of(&["s", "e"], w);
    coeffs.extend(functionals_of(&["rho1", "rho2", "theta1", "theta2"], w));
    let mut sys = CoefficientSystem::new("shift-family", w, coeffs);
    for m in range(w) {
        for n in range(w) {
            for i in range(w) {
                let j = n - m + i;
                if i == 0 || i == m - n || !w.contains_grade(j.into()) {
                    continue;
                }
                sys.push(
                    RowLabel {
                        relation: "shift",
                        m,
                        n,
                        i: Some(i),
                    },
                    &[
                        (rat(i), Coefficient::entry("s", m, i)),
                        (rat(j), Coefficient::entry("e", n, j)),
                    ],
                );
            }
        }
    }
    for m in range(w) {
        for n in range(w) {
            if m == n || !w.contains_grade((n - m).into()) {
                continue;
            }
            sys.push(
                RowLabel {
                    relation: "rho",
                    m,
                    n,
                    i: None,
                },
                &[
                    (rat(1), Coefficient::functional("rho1", m)),
                    (rat(n), Coefficient::functional("rho2", m)),
                    (rat(n - m), Coefficient::entry("e", n, n - m)),
                ],
            );
        }
    }
    for m in range(w) {
        for n in range(w) {
            if m == n || !w.contains_grade((m - n).into()) {
                continue;
            }
            sys.push(
                RowLabel {
                    relation: "theta",
                    m,
                    n,
                    i: None,
                },
                &[
                    (rat(1), Coefficient::functional("theta1", n)),
                    (rat(m), Coefficient::functional("theta2", n)),
                    (rat(-(m - n)), Coefficient::entry("s", m, m - n)),
                ],
            );
        }
    }
    let r = w.radius as i64;
    for k in -2 * r..=2 * r {
        sys.predicted.push(shift_assignment(k, w));
    }
    for m in range(w) {
        for f in ["s", "e"] {
            sys.predicted
                .push([(Coefficient::entry(f, m, 0), Rational::one())].into_iter().collect());
        }
    }
    sys
}

/// The solution with the single shift `μ_k = 1` and zero `i = 0` entries.
pub fn shift_assignment(k: i64, w: Window) -> Assignment {
    let mut a = Assignment::new();
    for m in range(w) {
        let i = m + k;
        if i != 0 && w.contains_grade(i.into()) {
            a.insert(Coefficient::entry("s", m, i), frac(1, i));
            a.insert(Coefficient::entry("e", m, i), frac(-1, i));
        }
    }
    if w.contains_grade((-k).into()) {
        a.insert(Coefficient::functional("rho1", -k), Rational::one());
        a.insert(Coefficient::functional("theta1", -k), Rational::one());
    }
    a
}

pub fn solve_shift_family(w: Window) -> Result<(SpanBasis, FormalVerdict), LinalgError> {
    let sys = shift_family_system(w);
    let bad: Assignment = [(Coefficient::functional("rho2", 1), Rational::one())]
        .into_iter()
        .collect();
    let solved = sys.solve()?;
    Ok(sys.with_counterexample(solved, "rho2(L[1]) = 1, all else 0", &bad))
}

/// `(m/2-i) q^(n)_i = 0` for all in-window `m, n, i` with `i ≠ n`,
/// `i ≠ m-n`.
pub fn diagonal_family_system(w: Window) -> CoefficientSystem {
    let mut sys = CoefficientSystem::new("diagonal-family", w, entries_of(&["q"], w));
    for m in range(w) {
        for n in range(w) {
            for i in range(w) {
                if i == n || i == m - n {
                    continue;
                }
                sys.push(
                    RowLabel {
                        relation: "diagonal",
                        m,
                        n,
                        i: Some(i),
                    },
                    &[(frac(m - 2 * i, 2), Coefficient::entry("q", n, i))],
                );
            }
        }
    }
    for n in range(w) {
        sys.predicted
            .push([(Coefficient::entry("q", n, n), Rational::one())].into_iter().collect());
    }
    sys
}

pub fn solve_diagonal_family(w: Window) -> Result<(SpanBasis, FormalVerdict), LinalgError> {
    let sys = diagonal_family_system(w);
    let bad: Assignment = [(Coefficient::entry("q", 1, 0), Rational::one())].into_iter().collect();
    let solved = sys.solve()?;
    Ok(sys.with_counterexample(solved, "q^(1)_0 = 1, all else 0", &bad))
}

/// All four verdicts on one window.
pub fn solve_all(w: Window) -> Result<Vec<FormalVerdict>, LinalgError> {
    Ok(vec![
        solve_delta_family(w)?.1,
        solve_vanishing_family(w)?.1,
        solve_shift_family(w)?.1,
        solve_diagonal_family(w)?.1,
    ])
}
