//! Extremal points of the decohered information convex set.
//!
//! Maximal Z decoherence turns a holonomy-sector ground state into a uniform
//! classical mixture over that sector's flat configurations. One such state
//! per conjugation orbit of commuting pairs gives the extremal points. The
//! analysis verifies that they are pairwise orthogonal yet locally
//! indistinguishable (equal marginals on every simply connected test
//! region), that their natural mixture is a Markov state across an annular
//! buffer, and that conditional mutual information obeys the
//! convex-combination bound.
//!
//! Sectors small enough to materialize go through the channel machinery
//! verbatim. Larger sectors are served by streamed histograms: flat
//! configurations are generated shard by shard and only their region
//! projections are retained, which keeps cases like S3 on 3x3 (thirty
//! million flat configurations) inside desk-scale memory.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::Execution;
use crate::channels::apply_z_channel;
use crate::error::{QdError, Result};
use crate::group::FiniteGroup;
use crate::lattice::{annular_tripartition, plaquette_block, Region, TorusLattice};
use crate::operators::{dressing_shards, ground_state, stream_shard, ConfigCodec, DressingShard};
use crate::states::{cmi, overlap, DensityState};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ceiling on total flat configurations for building every sector state in
/// memory; beyond it use the streamed histograms instead.
pub const MATERIALIZE_CAP: u64 = 4_000_000;

/// The canonical simply connected test regions that fit the lattice: a
/// single plaquette always, a two-plaquette strip once a third column keeps
/// it from wrapping, and a 2x2 block when both directions have room. Each
/// region carries the full boundary of its plaquettes.
pub fn canonical_regions(lat: &TorusLattice) -> Vec<(String, Region)> {
    let mut out = vec![("plaquette(0,0)".to_string(), plaquette_block(lat, 0, 0, 1, 1))];
    if lat.lx() >= 3 {
        out.push(("strip(0,0,2x1)".to_string(), plaquette_block(lat, 0, 0, 2, 1)));
    }
    if lat.lx() >= 3 && lat.ly() >= 3 {
        out.push(("block(0,0,2x2)".to_string(), plaquette_block(lat, 0, 0, 2, 2)));
    }
    out
}

/// Decohered extremal state of one holonomy sector: the (a, b) ground state
/// pushed through the maximal Z channel on every edge.
pub fn extremal_state(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
) -> Result<DensityState> {
    let psi = ground_state(group, lat, a, b)?;
    let rho = DensityState::from_pure(&psi)?;
    let edges: Vec<usize> = (0..lat.num_edges()).collect();
    apply_z_channel(group, &rho, &edges)
}

/// Marginal agreement on one test region across all sector pairs.
#[derive(Debug, Clone)]
pub struct MarginalCheck {
    pub region: String,
    pub edges: usize,
    /// Largest pointwise probability gap between two sector marginals.
    pub deviation: f64,
}

/// One sampled convex combination p ρ_i + (1-p) ρ_j and its CMI bound.
#[derive(Debug, Clone, Copy)]
pub struct ConvexSample {
    pub i: usize,
    pub j: usize,
    pub p: f64,
    pub mixed: f64,
    /// p CMI(ρ_i) + (1-p) CMI(ρ_j); convexity demands mixed ≤ bound.
    pub bound: f64,
}

/// Conditional-mutual-information checks on the annular tripartition.
#[derive(Debug, Clone)]
pub struct AnnularChecks {
    /// True when the buffer fills the whole complement of A, so there is no
    /// C region and every CMI vanishes identically.
    pub vacuous: bool,
    /// CMI of the sector-size-weighted mixture of all extremal points, the
    /// state proportional to the product of plaquette projectors.
    pub mixture_cmi: f64,
    pub sector_cmi: Vec<f64>,
    pub convexity: Vec<ConvexSample>,
}

#[derive(Debug, Clone)]
pub struct ExtremalReport {
    pub sector_reps: Vec<(usize, usize)>,
    /// Normalized pairwise overlaps tr(ρ_i ρ_j) / sqrt(tr ρ_i² tr ρ_j²).
    pub overlaps: DMatrix<f64>,
    /// max |overlaps - identity|.
    pub overlap_defect: f64,
    pub marginals: Vec<MarginalCheck>,
    /// Present when the lattice admits the annular tripartition (ly ≥ 3).
    pub annular: Option<AnnularChecks>,
}

fn classical_probs(state: &DensityState) -> Result<&HashMap<u128, f64>> {
    match state {
        DensityState::ClassicalDiagonal(c) => Ok(c.probs()),
        _ => Err(QdError::Incompatible(
            "extremal analysis expects fully dephased classical states".into(),
        )),
    }
}

fn max_prob_deviation(p: &HashMap<u128, f64>, q: &HashMap<u128, f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (cfg, &a) in p {
        worst = worst.max((a - q.get(cfg).copied().unwrap_or(0.0)).abs());
    }
    for (cfg, &b) in q {
        if !p.contains_key(cfg) {
            worst = worst.max(b.abs());
        }
    }
    worst
}

fn mix(codec: ConfigCodec, parts: &[(f64, &DensityState)]) -> Result<DensityState> {
    let mut probs: HashMap<u128, f64> = HashMap::new();
    for &(w, state) in parts {
        for (&cfg, &p) in classical_probs(state)? {
            *probs.entry(cfg).or_insert(0.0) += w * p;
        }
    }
    DensityState::classical(codec, probs)
}

/// Builds one decohered state per holonomy-sector orbit and reports the
/// information-convex structure: overlap matrix, marginal agreement on the
/// canonical regions, annular CMI of each sector and of their natural
/// mixture, and convexity bounds for mixtures at p in {0.1, 0.5, 0.9}.
pub fn extremal_analysis(group: &FiniteGroup, lat: &TorusLattice) -> Result<ExtremalReport> {
    let n = group.order() as f64;
    let total_flat =
        group.commuting_pairs().len() as f64 * n.powi(lat.num_vertices() as i32 - 1);
    if total_flat > MATERIALIZE_CAP as f64 {
        return Err(QdError::Budget { needed: total_flat as u128, limit: MATERIALIZE_CAP });
    }
    let codec = ConfigCodec::new(group, lat)?;
    let sector_reps = group.pair_orbit_representatives();
    let states: Vec<DensityState> = sector_reps
        .iter()
        .map(|&(a, b)| extremal_state(group, lat, a, b))
        .collect::<Result<_>>()?;
    let k = states.len();

    let mut overlaps = DMatrix::zeros(k, k);
    let mut overlap_defect: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let o = overlap(&states[i], &states[j])?.normalized;
            overlaps[(i, j)] = o;
            let want = f64::from(u8::from(i == j));
            overlap_defect = overlap_defect.max((o - want).abs());
        }
    }

    let mut marginals = Vec::new();
    for (name, region) in canonical_regions(lat) {
        let reduced: Vec<DensityState> =
            states.iter().map(|s| s.reduce(&region)).collect::<Result<_>>()?;
        let mut deviation: f64 = 0.0;
        for i in 0..k {
            for j in (i + 1)..k {
                deviation = deviation.max(max_prob_deviation(
                    classical_probs(&reduced[i])?,
                    classical_probs(&reduced[j])?,
                ));
            }
        }
        marginals.push(MarginalCheck { region: name, edges: region.len(), deviation });
    }

    let annular = match annular_tripartition(lat) {
        Err(_) => None,
        Ok((ra, rb, rc)) => {
            let sector_cmi: Vec<f64> =
                states.iter().map(|s| cmi(s, &ra, &rb, &rc)).collect::<Result<_>>()?;
            let total: f64 = states.iter().map(|s| s.support_size() as f64).sum();
            let weighted: Vec<(f64, &DensityState)> =
                states.iter().map(|s| (s.support_size() as f64 / total, s)).collect();
            let mixture_cmi = cmi(&mix(codec, &weighted)?, &ra, &rb, &rc)?;
            let mut convexity = Vec::new();
            for j in 1..k {
                for &p in &[0.1, 0.5, 0.9] {
                    let sigma = mix(codec, &[(p, &states[0]), (1.0 - p, &states[j])])?;
                    convexity.push(ConvexSample {
                        i: 0,
                        j,
                        p,
                        mixed: cmi(&sigma, &ra, &rb, &rc)?,
                        bound: p * sector_cmi[0] + (1.0 - p) * sector_cmi[j],
                    });
                }
            }
            Some(AnnularChecks { vacuous: rc.is_empty(), mixture_cmi, sector_cmi, convexity })
        }
    };

    Ok(ExtremalReport { sector_reps, overlaps, overlap_defect, marginals, annular })
}

/// Histogram of a region's edge configurations over one flat sector,
/// accumulated while streaming the sector.
#[derive(Debug, Clone)]
pub struct RegionHistogram {
    /// Region-restricted key (base-|G| digits over the region's edges in
    /// ascending order) to occurrence count.
    pub counts: HashMap<u64, u64>,
    pub total: u64,
}

impl RegionHistogram {
    /// Shannon entropy of the normalized histogram, in nats.
    pub fn entropy(&self) -> f64 {
        let total = self.total as f64;
        let weighted: f64 = self
            .counts
            .values()
            .map(|&c| {
                let c = c as f64;
                c * c.ln()
            })
            .sum();
        total.ln() - weighted / total
    }

    /// Merge another histogram of the same region into this one, as when
    /// pooling disjoint holonomy sectors into one mixture.
    pub fn absorb(&mut self, other: &RegionHistogram) {
        for (&key, &c) in &other.counts {
            *self.counts.entry(key).or_insert(0) += c;
        }
        self.total += other.total;
    }

    /// Largest pointwise probability gap against another histogram.
    pub fn max_probability_deviation(&self, other: &RegionHistogram) -> f64 {
        let (nt, ot) = (self.total as f64, other.total as f64);
        let mut worst: f64 = 0.0;
        for (key, &c) in &self.counts {
            let q = other.counts.get(key).copied().unwrap_or(0) as f64 / ot;
            worst = worst.max((c as f64 / nt - q).abs());
        }
        for (key, &c) in &other.counts {
            if !self.counts.contains_key(key) {
                worst = worst.max(c as f64 / ot);
            }
        }
        worst
    }
}

fn pack(codec: &ConfigCodec, edges: &[usize], n: u64, cfg: u128) -> u64 {
    let mut key = 0u64;
    for &e in edges {
        key = key * n + codec.get(cfg, e) as u64;
    }
    key
}

/// Streamed per-region histograms for the flat sector of (a, b). The
/// parallel path runs enumeration shards on separate threads and merges
/// integer counts, so both executions return identical histograms.
pub fn sector_marginals(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
    regions: &[Region],
    exec: Execution,
) -> Result<Vec<RegionHistogram>> {
    let n = group.order() as u64;
    for region in regions {
        let mut cap: u128 = 1;
        for _ in 0..region.len() {
            cap = cap.saturating_mul(u128::from(n));
        }
        if cap > 1u128 << 64 {
            return Err(QdError::Config(format!(
                "region of {} edges over a group of order {} overflows the 64-bit key space",
                region.len(),
                n
            )));
        }
    }
    let codec = ConfigCodec::new(group, lat)?;
    let shards = dressing_shards(group, lat, a, b)?;

    type Acc = (Vec<HashMap<u64, u64>>, u64);
    let empty = || (vec![HashMap::new(); regions.len()], 0u64);
    let absorb = |mut acc: Acc, shard: DressingShard| -> Acc {
        stream_shard(group, lat, &codec, shard, &mut |cfg| {
            acc.1 += 1;
            for (map, region) in acc.0.iter_mut().zip(regions) {
                *map.entry(pack(&codec, region.edges(), n, cfg)).or_insert(0) += 1;
            }
        });
        acc
    };
    #[cfg(feature = "parallel")]
    let merge = |mut a: Acc, b: Acc| -> Acc {
        a.1 += b.1;
        for (into, from) in a.0.iter_mut().zip(b.0) {
            for (key, count) in from {
                *into.entry(key).or_insert(0) += count;
            }
        }
        a
    };

    let (maps, total) = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => shards.into_par_iter().fold(empty, absorb).reduce(empty, merge),
        _ => shards.into_iter().fold(empty(), absorb),
    };
    Ok(maps.into_iter().map(|counts| RegionHistogram { counts, total }).collect())
}

/// Annular CMI of one decohered sector from streamed histograms, for
/// sectors too large to materialize: entropies of the four band unions,
/// never the full state.
pub fn streamed_annular_cmi(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
    exec: Execution,
) -> Result<f64> {
    let regions = annular_band_unions(lat)?;
    let h = sector_marginals(group, lat, a, b, &regions, exec)?;
    Ok(annular_cmi_from(&h))
}

fn annular_band_unions(lat: &TorusLattice) -> Result<[Region; 4]> {
    let (ra, rb, rc) = annular_tripartition(lat)?;
    let ab = ra.union(&rb);
    let bc = rb.union(&rc);
    let abc = ab.union(&rc);
    Ok([ab, rb, bc, abc])
}

fn annular_cmi_from(h: &[RegionHistogram]) -> f64 {
    h[0].entropy() + h[2].entropy() - h[1].entropy() - h[3].entropy()
}

/// Annular CMI of the uniform mixture over every flat configuration: the
/// state full dephasing leaves when the input ground space is maximally
/// mixed, and the support-weighted mixture of all extremal points. Streams
/// each holonomy sector in turn and pools the band histograms, so the
/// answer comes from exact occurrence counts regardless of scale.
pub fn streamed_flat_mixture_cmi(
    group: &FiniteGroup,
    lat: &TorusLattice,
    exec: Execution,
) -> Result<f64> {
    let regions = annular_band_unions(lat)?;
    let mut pooled: Option<Vec<RegionHistogram>> = None;
    for (a, b) in group.commuting_pairs() {
        let h = sector_marginals(group, lat, a, b, &regions, exec)?;
        match &mut pooled {
            None => pooled = Some(h),
            Some(acc) => {
                for (into, part) in acc.iter_mut().zip(&h) {
                    into.absorb(part);
                }
            }
        }
    }
    let pooled = pooled.expect("every group has the commuting pair (e, e)");
    Ok(annular_cmi_from(&pooled))
}
