//! Packed edge configurations.
//!
//! A basis state of the model assigns one group element to every edge. With
//! b = ⌈log₂|G|⌉ bits per edge a whole configuration packs into a single
//! `u128`, which keeps sparse states hashable and cheap to copy.

use crate::error::{QdError, Result};
use crate::group::FiniteGroup;
use crate::lattice::TorusLattice;

/// Layout of edge values inside a packed `u128` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigCodec {
    num_edges: usize,
    group_order: usize,
    bits: u32,
    mask: u128,
}

impl ConfigCodec {
    pub fn new(group: &FiniteGroup, lat: &TorusLattice) -> Result<ConfigCodec> {
        ConfigCodec::with_edges(lat.num_edges(), group.order())
    }

    /// Layout for an explicit edge count, detached from any lattice. Reduced
    /// density matrices and single-edge channel checks use this directly.
    pub fn with_edges(num_edges: usize, group_order: usize) -> Result<ConfigCodec> {
        let bits = (usize::BITS - (group_order - 1).max(1).leading_zeros()).max(1);
        if num_edges as u32 * bits > 128 {
            return Err(QdError::Capacity {
                dim: num_edges * bits as usize,
                cap: 128,
                advice: "reduce the lattice or group so edge data fits in 128 bits".into(),
            });
        }
        Ok(ConfigCodec {
            num_edges,
            group_order,
            bits,
            mask: (1u128 << bits) - 1,
        })
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Group element on `edge`.
    #[inline]
    pub fn get(&self, cfg: u128, edge: usize) -> usize {
        ((cfg >> (edge as u32 * self.bits)) & self.mask) as usize
    }

    /// Copy of `cfg` with `edge` set to `g`.
    #[inline]
    pub fn set(&self, cfg: u128, edge: usize, g: usize) -> u128 {
        let shift = edge as u32 * self.bits;
        (cfg & !(self.mask << shift)) | ((g as u128) << shift)
    }

    /// The all-identity configuration.
    #[inline]
    pub fn identity_config(&self) -> u128 {
        0
    }

    /// |G|^edges as a float (for budget checks that must not overflow).
    pub fn total_configs(&self) -> f64 {
        (self.group_order as f64).powi(self.num_edges as i32)
    }

    /// Every stored edge value is a valid group element.
    pub fn is_valid(&self, cfg: u128) -> bool {
        (0..self.num_edges).all(|e| self.get(cfg, e) < self.group_order)
            && (cfg >> (self.num_edges as u32 * self.bits)) == 0
    }

    /// Iterate all |G|^edges configurations in lexicographic edge order.
    /// Only sensible when `total_configs` is small; the iterator walks an
    /// odometer over edges.
    pub fn enumerate(&self) -> ConfigIter {
        ConfigIter { codec: *self, digits: vec![0; self.num_edges], done: false }
    }
}

pub struct ConfigIter {
    codec: ConfigCodec,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for ConfigIter {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.done {
            return None;
        }
        let mut cfg = 0u128;
        for (e, &d) in self.digits.iter().enumerate() {
            cfg = self.codec.set(cfg, e, d);
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.codec.group_order {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(cfg)
    }
}
