//! Fidelity order parameter for strong-to-weak symmetry breaking.
//!
//! Dressing a state with an open flux ribbon, summed over all class
//! components, implements the weak-symmetry action with loose ends. If the
//! state cannot tell it happened (fidelity 1) while the traced operator
//! fails the strong test, the strong symmetry has broken down to the weak
//! one. The fidelity is Uhlmann's, against the dressed state renormalized
//! to unit trace.

use crate::error::{QdError, Result};
use crate::group::{ConjugacyClass, FiniteGroup};
use crate::lattice::{Ribbon, TorusLattice};
use crate::operators::{ribbon_magnetic_component, QuantumState};
use crate::states::{fidelity, DensityState, DENSE_CAP};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, Copy)]
pub struct SwssbReport {
    pub fidelity: f64,
    /// Trace retained by the dressing, relative to tr ρ.
    pub dressed_trace: f64,
}

/// (1/|C|) Σ_{ii'} F_{ii'} ρ F_{ii'}†, unnormalized. Classical states stay
/// classical: each component sends a configuration to at most one other,
/// because the end delta fixes the single centralizer element that fires.
pub(crate) fn dressed_state(
    group: &FiniteGroup,
    lat: &TorusLattice,
    rho: &DensityState,
    class: &ConjugacyClass,
    eta: &Ribbon,
) -> Result<DensityState> {
    let codec = *rho.codec();
    let k = class.size();
    let comp_weight = 1.0 / k as f64;
    match rho {
        DensityState::ClassicalDiagonal(cl) => {
            let mut probs: HashMap<u128, f64> = HashMap::new();
            for (&c, &p) in cl.probs() {
                let mut e = QuantumState::zero(codec);
                e.accumulate(c, Complex64::new(1.0, 0.0));
                for i in 0..k {
                    for ip in 0..k {
                        let img = ribbon_magnetic_component(group, lat, &e, eta, class, i, ip);
                        debug_assert!(img.iter().count() <= 1);
                        for (&c2, &a) in img.iter() {
                            *probs.entry(c2).or_insert(0.0) += p * a.norm_sqr() * comp_weight;
                        }
                    }
                }
            }
            DensityState::classical(codec, probs)
        }
        DensityState::PureEnsemble(en) => {
            let mut members = Vec::new();
            for (w, psi) in en.members() {
                for i in 0..k {
                    for ip in 0..k {
                        let img = ribbon_magnetic_component(group, lat, psi, eta, class, i, ip);
                        let n2 = img.norm_sqr();
                        if n2 > 0.0 {
                            members.push((w * n2 * comp_weight, img));
                        }
                    }
                }
            }
            DensityState::from_ensemble(codec, members)
        }
        DensityState::Dense(d) => {
            let mut component_cols: Vec<Vec<QuantumState>> = Vec::with_capacity(k * k);
            let mut union: BTreeSet<u128> = d.basis().iter().copied().collect();
            for i in 0..k {
                for ip in 0..k {
                    let cols: Vec<QuantumState> = d
                        .basis()
                        .iter()
                        .map(|&b| {
                            let mut e = QuantumState::zero(codec);
                            e.accumulate(b, Complex64::new(1.0, 0.0));
                            ribbon_magnetic_component(group, lat, &e, eta, class, i, ip)
                        })
                        .collect();
                    for col in &cols {
                        union.extend(col.iter().map(|(&c, _)| c));
                    }
                    component_cols.push(cols);
                }
            }
            let basis: Vec<u128> = union.into_iter().collect();
            if basis.len() > DENSE_CAP {
                return Err(QdError::Capacity {
                    dim: basis.len(),
                    cap: DENSE_CAP,
                    advice: "dress the state in ensemble or classical form instead".into(),
                });
            }
            let pos: HashMap<u128, usize> =
                basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let n = basis.len();
            let rmat = d.embed(&basis)?;
            let mut sigma = DMatrix::<Complex64>::zeros(n, n);
            for cols in &component_cols {
                let mut kmat = DMatrix::<Complex64>::zeros(n, n);
                for (j, col) in cols.iter().enumerate() {
                    let cj = pos[&d.basis()[j]];
                    for (&c, &a) in col.iter() {
                        kmat[(pos[&c], cj)] += a;
                    }
                }
                sigma += &kmat * &rmat * kmat.adjoint() * Complex64::new(comp_weight, 0.0);
            }
            DensityState::dense(codec, basis, sigma)
        }
    }
}

/// Uhlmann fidelity between ρ and its flux-dressed image along an open
/// ribbon. Fidelity 1 with a broken strong test is the order parameter;
/// fidelity 0 means the dressing moved ρ onto orthogonal support.
pub fn swssb_fidelity(
    group: &FiniteGroup,
    lat: &TorusLattice,
    rho: &DensityState,
    class: &ConjugacyClass,
    eta: &Ribbon,
) -> Result<SwssbReport> {
    let tr = rho.trace();
    if tr < 1e-12 {
        return Err(QdError::Degenerate("state trace vanishes".into()));
    }
    let mut dressed = dressed_state(group, lat, rho, class, eta)?;
    let dressed_trace = dressed.trace() / tr;
    if dressed_trace < 1e-12 {
        return Err(QdError::Degenerate(
            "dressing annihilates the state; no fidelity to report".into(),
        ));
    }
    dressed.normalize()?;
    Ok(SwssbReport { fidelity: fidelity(rho, &dressed)?, dressed_trace })
}
