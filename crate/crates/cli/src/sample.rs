//! Seeded random classified forms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use svlie::biderivations::{representable_shifts, BiderivationForm, OmegaSet};
use svlie::{Rational, Window};

fn random_rational<R: Rng>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-30..=30);
        let q: i64 = rng.gen_range(1..=12);
        if p != 0 || !nonzero {
            return Rational::new(p.into(), q.into());
        }
    }
}

/// `count` forms with a random λ and up to three spikes at representable
/// shifts, reproducible from `seed`.
pub fn random_forms(seed: u64, count: usize, w: Window) -> Vec<BiderivationForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts = representable_shifts(w);
    (0..count)
        .map(|_| {
            let lambda = random_rational(&mut rng, false);
            let spikes = rng.gen_range(0..=3);
            let mut omega = OmegaSet::new();
            for &k in shifts.choose_multiple(&mut rng, spikes) {
                omega.set(k, random_rational(&mut rng, true));
            }
            BiderivationForm::new(lambda, omega)
        })
        .collect()
}
