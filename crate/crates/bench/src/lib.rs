//! Benchmark fixtures shared by the criterion targets.

use jtrace::trbar::witness;
use jtrace::trees::TreeSum;

/// Witness elements of increasing degree, each at the smallest genus that carries it.
pub fn witnesses() -> Vec<(usize, usize, TreeSum)> {
    (1..=3).map(|k| (k, k + 2, witness(k, k + 2).expect("genus is large enough"))).collect()
}
