//! Seeded random streams and random operator ensembles.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{haar_unitary_with, Eigensystem, Operator, StateVector};
use crate::scalar::{c, re, Real};

/// Independent stream `stream` of the generator seeded with `seed`.
///
/// Sweeps give every trial (or restart) its own stream, so results do not
/// depend on evaluation order or thread count.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Range of the eigenvalues drawn by [`random_positive_operator`].
pub const POSITIVE_SPECTRUM_RANGE: (f64, f64) = (0.5, 2.0);

/// `W·diag(d)·W†` with `W` Haar and `d` uniform on [`POSITIVE_SPECTRUM_RANGE`].
pub fn random_positive_operator<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Operator<T> {
    let (lo, hi) = POSITIVE_SPECTRUM_RANGE;
    let d: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..hi)).collect();
    random_with_spectrum(&d, rng)
}

/// `W·diag(spectrum)·W†` with Haar `W`.
pub fn random_with_spectrum<T: Real>(spectrum: &[f64], rng: &mut ChaCha8Rng) -> Operator<T> {
    let w: Operator<T> = haar_unitary_with(spectrum.len(), rng);
    let es = Eigensystem {
        values: spectrum.iter().map(|&x| T::lit(x)).collect(),
        vectors: (0..spectrum.len()).map(|j| StateVector::normalized(w.column(j)).expect("unitary column")).collect(),
    };
    es.reconstruct_with(re).hermitian_part()
}

/// Gaussian Hermitian matrix `(G + G†)/2` with standard complex normal `G`.
pub fn random_hermitian<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Operator<T> {
    let entries: Vec<Complex<T>> = (0..dim * dim)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            c(T::lit(x), T::lit(y))
        })
        .collect();
    Operator::from_row_major(dim, entries).expect("finite Gaussian entries").hermitian_part()
}
