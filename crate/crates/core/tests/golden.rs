//! Frozen dimensions produced by the solvers; the acceptance suite
//! cross-checks the derivation value with an independent elimination.

use svlie::biderivations::{classify_biderivations, is_skewsymmetric, match_form_on, skew_biderivations, MatchScope};
use svlie::derivations::classify_derivations;
use svlie::formal::solve_all;
use svlie::postlie::{brute_force_solve, verify_triviality_theorem, BruteForceVerdict};
use svlie::{AlgebraConfig, Window};

const TW: AlgebraConfig = AlgebraConfig::TWISTED;
const OR: AlgebraConfig = AlgebraConfig::ORIGINAL;

#[test]
fn derivation_dimensions() {
    for (n, cfg, kernel, interior) in [(4, TW, 101, 29), (6, TW, 169, 41)] {
        let (_, cmp) = classify_derivations(Window::new(n), &cfg).unwrap();
        assert!(cmp.matches(), "N={n}");
        assert_eq!((cmp.kernel_dim, cmp.interior_kernel_dim), (kernel, interior), "N={n}");
    }
    for n in 3..=6 {
        for cfg in [TW, OR] {
            assert!(
                classify_derivations(Window::new(n), &cfg).unwrap().1.matches(),
                "N={n} {cfg:?}"
            );
        }
    }
}

#[test]
fn biderivation_dimensions() {
    for (n, cfg, kernel, interior) in [(3, TW, 192, 8), (4, TW, 322, 14), (3, OR, 158, 8)] {
        let (_, cmp) = classify_biderivations(Window::new(n), &cfg).unwrap();
        assert!(cmp.matches(), "N={n} {cfg:?}");
        assert_eq!(
            (cmp.kernel_dim, cmp.interior_kernel_dim),
            (kernel, interior),
            "N={n} {cfg:?}"
        );
    }
}

#[test]
fn skew_biderivations_are_inner() {
    let w = Window::new(3);
    let (system, kernel) = skew_biderivations(w, &TW).unwrap();
    assert_eq!(kernel.len(), 65);
    for v in kernel.vectors() {
        let f = system.decode(v);
        assert!(is_skewsymmetric(&f));
        let form = match_form_on(&f, w, &TW, MatchScope::Interior).expect("matches a classified form");
        assert!(form.omega.is_empty());
    }
}

#[test]
fn coefficient_systems() {
    let verdicts = solve_all(Window::new(4)).unwrap();
    let dims: Vec<usize> = verdicts.iter().map(|v| v.comparison.interior_kernel_dim).collect();
    assert_eq!(dims, [1, 0, 19, 5]);
    assert!(verdicts.iter().all(|v| v.holds));
    assert_eq!(verdicts[2].free_directions.len(), 10);
    assert!(verdicts[2].free_directions.iter().all(|c| c.ends_with("_0")));
}

#[test]
fn postlie_sweep_and_solve() {
    for cfg in [TW, OR] {
        let r = verify_triviality_theorem(Window::new(6), &cfg, false).unwrap();
        assert!(r.passed);
        assert_eq!(r.cases.len(), 144);
    }
    let r = brute_force_solve(Window::new(3), &TW).unwrap();
    assert_eq!((r.linear_dim, r.rounds.clone(), r.final_dim), (127, vec![22, 0], 0));
    assert_eq!(r.verdict, BruteForceVerdict::InteriorTrivial);
    let r = brute_force_solve(Window::new(3), &OR).unwrap();
    assert_eq!((r.linear_dim, r.rounds.clone(), r.final_dim), (107, vec![28, 0], 0));
    assert_eq!(r.verdict, BruteForceVerdict::InteriorTrivial);
}
