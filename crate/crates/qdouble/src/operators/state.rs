//! Sparse state vectors over edge configurations.

use super::config::ConfigCodec;
use crate::error::{QdError, Result};
use num_complex::Complex64;
use std::collections::HashMap;

/// Amplitudes below this magnitude are dropped after operator application.
pub const PRUNE_TOL: f64 = 1e-14;

/// A sparse complex vector indexed by packed configurations. Operators do
/// not renormalize; callers decide when (and whether) to normalize.
#[derive(Debug, Clone)]
pub struct QuantumState {
    codec: ConfigCodec,
    amps: HashMap<u128, Complex64>,
}

impl QuantumState {
    pub fn zero(codec: ConfigCodec) -> QuantumState {
        QuantumState { codec, amps: HashMap::new() }
    }

    /// The basis state |cfg⟩.
    pub fn basis(codec: ConfigCodec, cfg: u128) -> QuantumState {
        let mut amps = HashMap::new();
        amps.insert(cfg, Complex64::new(1.0, 0.0));
        QuantumState { codec, amps }
    }

    /// Equal positive amplitude on every listed configuration, normalized.
    pub fn uniform(codec: ConfigCodec, configs: &[u128]) -> QuantumState {
        let a = Complex64::new(1.0 / (configs.len() as f64).sqrt(), 0.0);
        let mut amps = HashMap::with_capacity(configs.len());
        for &c in configs {
            amps.insert(c, a);
        }
        QuantumState { codec, amps }
    }

    #[inline]
    pub fn codec(&self) -> &ConfigCodec {
        &self.codec
    }

    pub fn amp(&self, cfg: u128) -> Complex64 {
        self.amps.get(&cfg).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.amps.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u128, &Complex64)> {
        self.amps.iter()
    }

    /// Add `coeff · amp` onto the entry for `cfg`.
    pub fn accumulate(&mut self, cfg: u128, amp: Complex64) {
        *self.amps.entry(cfg).or_default() += amp;
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.amps.values_mut() {
            *a *= c;
        }
    }

    pub fn add_scaled(&mut self, other: &QuantumState, c: Complex64) {
        for (&cfg, &a) in other.amps.iter() {
            self.accumulate(cfg, c * a);
        }
    }

    /// Drop entries with magnitude below [`PRUNE_TOL`].
    pub fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() > PRUNE_TOL);
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        let (small, big, conj_small) = if self.amps.len() <= other.amps.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut sum = Complex64::default();
        for (cfg, a) in small.amps.iter() {
            let b = big.amps.get(cfg).copied().unwrap_or_default();
            sum += if conj_small { a.conj() * b } else { b.conj() * a };
        }
        sum
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scale to unit norm; a numerically vanishing state is an error.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(QdError::Degenerate("cannot normalize a vanishing state".into()));
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(())
    }

    /// |⟨self|other⟩|² / (‖self‖²‖other‖²): 1 iff proportional.
    pub fn overlap_normalized(&self, other: &QuantumState) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Entry-wise distance max over the union of supports.
    pub fn max_amp_diff(&self, other: &QuantumState) -> f64 {
        let mut worst: f64 = 0.0;
        for (&cfg, &a) in self.amps.iter() {
            worst = worst.max((a - other.amp(cfg)).norm());
        }
        for (&cfg, &b) in other.amps.iter() {
            worst = worst.max((self.amp(cfg) - b).norm());
        }
        worst
    }

    /// Rebuild the state by sending each term through `f`, which receives
    /// (cfg, amp) and returns the image (cfg', amp'). Terms landing on the
    /// same configuration interfere; near-zero results are pruned.
    pub fn map_terms(&self, f: impl Fn(u128, Complex64) -> (u128, Complex64)) -> QuantumState {
        let mut out = QuantumState::zero(self.codec);
        for (&cfg, &amp) in self.amps.iter() {
            let (c, a) = f(cfg, amp);
            out.accumulate(c, a);
        }
        out.prune();
        out
    }

    /// Sorted list of supported configurations (deterministic order for
    /// reports and tests).
    pub fn support(&self) -> Vec<u128> {
        let mut v: Vec<u128> = self.amps.keys().copied().collect();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::lattice::TorusLattice;

    fn codec() -> ConfigCodec {
        let g = FiniteGroup::cyclic(2);
        let lat = TorusLattice::new(2, 2).unwrap();
        ConfigCodec::new(&g, &lat).unwrap()
    }

    #[test]
    fn basis_and_inner() {
        let c = codec();
        let a = QuantumState::basis(c, 0);
        let b = QuantumState::basis(c, 3);
        assert_eq!(a.inner(&a), Complex64::new(1.0, 0.0));
        assert_eq!(a.inner(&b), Complex64::default());
        let mut s = a.clone();
        s.add_scaled(&b, Complex64::new(0.0, 1.0));
        assert!((s.norm_sqr() - 2.0).abs() < 1e-14);
        // inner is conjugate-linear in the left slot
        assert!((s.inner(&b) - Complex64::new(0.0, -1.0).conj().conj()).norm() < 1e-14);
        assert!((a.inner(&s) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn uniform_is_normalized() {
        let c = codec();
        let s = QuantumState::uniform(c, &[0, 1, 2, 5]);
        assert!((s.norm() - 1.0).abs() < 1e-14);
        assert_eq!(s.num_terms(), 4);
        assert_eq!(s.support(), vec![0, 1, 2, 5]);
    }

    #[test]
    fn prune_drops_cancelled_terms() {
        let c = codec();
        let a = QuantumState::basis(c, 1);
        let mut s = a.clone();
        s.add_scaled(&a, Complex64::new(-1.0, 0.0));
        assert_eq!(s.num_terms(), 1);
        s.prune();
        assert_eq!(s.num_terms(), 0);
        assert!(s.clone().normalize().is_err());
    }

    #[test]
    fn overlap_detects_proportionality() {
        let c = codec();
        let mut s = QuantumState::uniform(c, &[0, 7]);
        let mut t = s.clone();
        t.scale(Complex64::new(0.0, -2.5));
        assert!((s.overlap_normalized(&t) - 1.0).abs() < 1e-12);
        s.accumulate(9, Complex64::new(1.0, 0.0));
        assert!(s.overlap_normalized(&t) < 1.0 - 1e-3);
    }
}
