//! Fermionic Fock space over a handful of modes.

use crate::spectral::CsrMatrix;

/// `2^N` occupation states indexed by bitmask; bit `k` is mode `k`.
///
/// Operators use ordered strings: `ψ_k` acting on a state picks up the
/// sign `(-1)^{#occupied j < k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    pub modes: usize,
}

impl FockBasis {
    pub fn new(modes: usize) -> Self {
        assert!(modes < 16, "Fock space with {modes} modes is too large");
        Self { modes }
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    pub fn fermion_number(state: usize) -> usize {
        state.count_ones() as usize
    }

    pub fn occupied(state: usize, k: usize) -> bool {
        state >> k & 1 == 1
    }

    /// `ψ_k |state⟩ = sign |state'⟩`, or `None` when mode `k` is empty.
    pub fn lower(state: usize, k: usize) -> Option<(usize, f64)> {
        if !Self::occupied(state, k) {
            return None;
        }
        let below = (state & ((1 << k) - 1)).count_ones();
        Some((state & !(1 << k), if below % 2 == 0 { 1.0 } else { -1.0 }))
    }

    /// States with `f` fermions, ascending.
    pub fn sector(&self, f: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&s| Self::fermion_number(s) == f).collect()
    }

    pub fn annihilation(&self, k: usize) -> CsrMatrix {
        let entries = (0..self.dim()).filter_map(|s| Self::lower(s, k).map(|(t, sign)| (t, s, sign)));
        CsrMatrix::from_triplets(self.dim(), self.dim(), entries)
    }

    pub fn creation(&self, k: usize) -> CsrMatrix {
        self.annihilation(k).transpose()
    }

    /// Largest entry of `{ψ_i, ψ_j†} - δ_ij` and `{ψ_i, ψ_j}` over all pairs.
    pub fn anticommutator_residual(&self) -> f64 {
        let id = CsrMatrix::identity(self.dim());
        let mut worst = 0.0f64;
        for i in 0..self.modes {
            let (a, ad) = (self.annihilation(i), self.creation(i));
            for j in 0..self.modes {
                let (b, bd) = (self.annihilation(j), self.creation(j));
                let mut mixed = a.matmul(&bd).add(&bd.matmul(&a));
                if i == j {
                    mixed = mixed.sub(&id);
                }
                let same = a.matmul(&b).add(&b.matmul(&a));
                let raised = ad.matmul(&bd).add(&bd.matmul(&ad));
                worst = worst.max(mixed.max_abs()).max(same.max_abs()).max(raised.max_abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_relations_are_exact() {
        for n in 1..=4 {
            assert_eq!(FockBasis::new(n).anticommutator_residual(), 0.0);
        }
    }

    #[test]
    fn sectors_partition_states() {
        let f = FockBasis::new(3);
        let sizes: Vec<usize> = (0..=3).map(|k| f.sector(k).len()).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
        assert_eq!(FockBasis::lower(0b110, 2), Some((0b010, -1.0)));
        assert_eq!(FockBasis::lower(0b110, 0), None);
    }
}
