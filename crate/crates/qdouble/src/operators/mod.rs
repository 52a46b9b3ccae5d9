//! Operators on sparse configuration states: gauge transformations,
//! flatness projectors, single-edge generalized Paulis, ribbon operators,
//! and exact ground states.

mod config;
mod ground;
mod local;
mod ribbon_ops;
mod state;

pub use config::{ConfigCodec, ConfigIter};
pub use ground::{
    flat_configs, flat_sector_configs, for_each_sector_config, ground_state,
    ground_state_enumerated,
};
pub(crate) use ground::{dressing_shards, stream_shard, DressingShard};
pub use local::{
    apply_gauge, apply_gauge_average, apply_left, apply_plaquette, apply_plaquette_mpo,
    apply_right, apply_z_component, plaquette_word, x_holonomy, y_holonomy,
};
pub use ribbon_ops::{
    apply_ribbon, direct_holonomy, ribbon_electric, ribbon_electric_sum,
    ribbon_magnetic_component, ribbon_magnetic_traced,
};
pub use state::{QuantumState, PRUNE_TOL};

#[cfg(test)]
pub(crate) mod testutil {
    use super::{ConfigCodec, QuantumState};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A reproducible random sparse state with `terms` support points.
    pub fn random_state(codec: ConfigCodec, seed: u64, terms: usize) -> QuantumState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = QuantumState::zero(codec);
        for _ in 0..terms {
            let mut cfg = codec.identity_config();
            for e in 0..codec.num_edges() {
                cfg = codec.set(cfg, e, rng.gen_range(0..codec.group_order()));
            }
            s.accumulate(
                cfg,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        s
    }
}
