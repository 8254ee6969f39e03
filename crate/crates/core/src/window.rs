//! Finite index windows and defect reports.

use std::collections::HashMap;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    bracket_generators, grade_int, jacobi_defect, AlgebraConfig, Element, Epsilon, Family, GeneratorId, Grade,
};

/// The generators with `|index| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub radius: u32,
}

impl Window {
    pub fn new(radius: u32) -> Self {
        assert!(radius >= 1, "window radius must be at least 1");
        Window { radius }
    }

    /// The sub-window of radius `⌊N/2⌋` used for classification
    /// comparisons.
    pub fn interior(&self) -> Window {
        Window {
            radius: self.radius / 2,
        }
    }

    pub fn contains_grade(&self, g: Grade) -> bool {
        g.abs() <= grade_int(self.radius as i64)
    }

    pub fn contains(&self, g: GeneratorId) -> bool {
        self.contains_grade(g.index)
    }

    pub fn contains_element(&self, x: &Element) -> bool {
        x.generators().all(|g| self.contains(g))
    }

    /// Window generators for `cfg`, in canonical order.
    pub fn generators(&self, cfg: &AlgebraConfig) -> Vec<GeneratorId> {
        let n = self.radius as i64;
        let mut out = Vec::new();
        out.extend((-n..=n).map(GeneratorId::l));
        match cfg.epsilon {
            Epsilon::Zero => out.extend((-n..=n).map(GeneratorId::y)),
            // j = k + 1/2 with |j| <= n
            Epsilon::Half => out.extend((-n..n).map(|k| GeneratorId::y_frac(2 * k + 1, 2))),
        }
        out.extend((-n..=n).map(GeneratorId::m));
        out
    }
}

/// A window together with an enumeration of its generators, used to lay out
/// unknowns of the linear systems.
#[derive(Debug, Clone)]
pub struct WindowBasis {
    pub window: Window,
    pub cfg: AlgebraConfig,
    gens: Vec<GeneratorId>,
    pos: HashMap<GeneratorId, usize>,
}

impl WindowBasis {
    pub fn new(window: Window, cfg: AlgebraConfig) -> Self {
        let gens = window.generators(&cfg);
        let pos = gens.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        WindowBasis { window, cfg, gens, pos }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.gens
    }

    pub fn position(&self, g: GeneratorId) -> Option<usize> {
        self.pos.get(&g).copied()
    }

    pub fn of_family(&self, family: Family) -> impl Iterator<Item = GeneratorId> + '_ {
        self.gens.iter().copied().filter(move |g| g.family == family)
    }
}

/// Maximum number of violations kept in a [`DefectReport`].
pub const REPORT_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Name of the identity that failed.
    pub identity: &'static str,
    pub inputs: Vec<GeneratorId>,
    /// Left side minus right side.
    pub defect: Element,
}

/// Violations of an identity over a window. At most [`REPORT_LIMIT`] entries
/// are kept; `total` counts all of them.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DefectReport {
    pub violations: Vec<Violation>,
    pub total: usize,
    /// Number of (input, identity) combinations that were checked.
    pub checked: usize,
}

impl DefectReport {
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn record(&mut self, identity: &'static str, inputs: Vec<GeneratorId>, defect: Element) {
        self.checked += 1;
        if defect.is_zero() {
            return;
        }
        self.total += 1;
        if self.violations.len() < REPORT_LIMIT {
            self.violations.push(Violation {
                identity,
                inputs,
                defect,
            });
        }
    }

    pub fn merge(&mut self, other: DefectReport) {
        self.checked += other.checked;
        self.total += other.total;
        let room = REPORT_LIMIT.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    pub fn find(&self, identity: &str, inputs: &[GeneratorId]) -> Option<&Violation> {
        self.violations
            .iter()
            .find(|v| v.identity == identity && v.inputs == inputs)
    }
}

/// Antisymmetry on every window pair and the Jacobi identity on every
/// triple of distinct window generators.
pub fn lie_axiom_report(w: Window, cfg: &AlgebraConfig) -> DefectReport {
    let gens = w.generators(cfg);
    let mut report = DefectReport::default();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            let sum = &bracket_generators(a, b) + &bracket_generators(b, a);
            report.record("antisymmetry", vec![a, b], sum);
        }
    }
    let parts: Vec<DefectReport> = (0..gens.len())
        .into_par_iter()
        .map(|i| {
            let mut r = DefectReport::default();
            let x = Element::generator(gens[i]);
            for j in i + 1..gens.len() {
                let y = Element::generator(gens[j]);
                for &c in &gens[j + 1..] {
                    let z = Element::generator(c);
                    let d = jacobi_defect(&x, &y, &z, cfg).expect("window generators are valid");
                    r.record("jacobi", vec![gens[i], gens[j], c], d);
                }
            }
            r
        })
        .collect();
    for r in parts {
        report.merge(r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_sizes() {
        let w = Window::new(3);
        assert_eq!(w.generators(&AlgebraConfig::TWISTED).len(), 21);
        let half = w.generators(&AlgebraConfig::ORIGINAL);
        assert_eq!(half.len(), 20);
        assert!(half.contains(&GeneratorId::y_frac(-5, 2)));
        assert!(!half.contains(&GeneratorId::y_frac(7, 2)));
        assert_eq!(w.interior().radius, 1);
        assert_eq!(Window::new(8).interior().radius, 4);
    }

    #[test]
    fn canonical_generator_order() {
        let gens = Window::new(2).generators(&AlgebraConfig::TWISTED);
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(gens, sorted);
    }

    #[test]
    fn lie_axioms_on_small_window() {
        let r = lie_axiom_report(Window::new(2), &AlgebraConfig::TWISTED);
        assert!(r.is_empty());
        // 15 generators: 120 pairs with the diagonal, C(15, 3) triples
        assert_eq!(r.checked, 120 + 455);
    }

    #[test]
    fn report_is_bounded() {
        let mut r = DefectReport::default();
        for i in 0..150 {
            r.record("x", vec![GeneratorId::l(i)], Element::generator(GeneratorId::m(0)));
        }
        r.record("x", vec![], Element::zero());
        assert_eq!(r.total, 150);
        assert_eq!(r.checked, 151);
        assert_eq!(r.violations.len(), REPORT_LIMIT);
    }
}
