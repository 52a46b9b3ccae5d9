//! Ribbon operators F^{h,g} and their electric and magnetic combinations.
//!
//! A ribbon operator walks its steps in order while carrying the running
//! direct holonomy a (initially e). A direct step along edge value x updates
//! a ← a·x (or a·x̄ against the arrow) and leaves the state untouched; a dual
//! step inserts the conjugated flux f = ā·h·a into the crossed edge, on the
//! left when the pivot vertex is the edge's tail and as ·f̄ on the right when
//! it is the head. The final amplitude carries δ_{g, a}.
//!
//! On a closed dual loop around a vertex this reproduces the gauge operator;
//! on a closed direct loop with g = e it reproduces the flatness projector;
//! on open ribbons it creates excitation pairs at the two end sites.

use super::state::QuantumState;
use crate::group::{ConjugacyClass, FiniteGroup, Irrep};
use crate::lattice::{Ribbon, StepKind, TorusLattice};
use num_complex::Complex64;

#[derive(Clone, Copy)]
enum Action {
    Direct { edge: usize, along: bool },
    Dual { edge: usize, tail_base: bool },
}

fn compile(lat: &TorusLattice, ribbon: &Ribbon) -> Vec<Action> {
    ribbon
        .steps()
        .iter()
        .map(|s| match s.kind {
            StepKind::Direct => Action::Direct { edge: s.edge, along: s.along_arrow(lat) },
            StepKind::Dual => Action::Dual { edge: s.edge, tail_base: s.base_is_tail(lat) },
        })
        .collect()
}

/// Apply F^{h,g} along `ribbon`.
pub fn apply_ribbon(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    ribbon: &Ribbon,
    h: usize,
    g: usize,
) -> QuantumState {
    let actions = compile(lat, ribbon);
    let codec = *state.codec();
    state.map_terms(|cfg, amp| {
        let mut a = group.identity();
        let mut c = cfg;
        for act in &actions {
            match *act {
                Action::Direct { edge, along } => {
                    let x = codec.get(c, edge);
                    a = group.mul(a, if along { x } else { group.inv(x) });
                }
                Action::Dual { edge, tail_base } => {
                    let f = group.mul(group.inv(a), group.mul(h, a));
                    let x = codec.get(c, edge);
                    let y = if tail_base { group.mul(f, x) } else { group.mul(x, group.inv(f)) };
                    c = codec.set(c, edge, y);
                }
            }
        }
        if a == g { (c, amp) } else { (c, Complex64::default()) }
    })
}

/// Accumulated direct holonomy of `ribbon` on a fixed configuration: the
/// ordered product of edge values over the direct steps, inverted against
/// the arrow. This is the `a` every electric operator diagnoses.
pub fn direct_holonomy(
    group: &FiniteGroup,
    lat: &TorusLattice,
    ribbon: &Ribbon,
    codec: &super::config::ConfigCodec,
    cfg: u128,
) -> usize {
    let mut a = group.identity();
    for s in ribbon.steps() {
        if s.kind == StepKind::Direct {
            let x = codec.get(cfg, s.edge);
            a = group.mul(a, if s.along_arrow(lat) { x } else { group.inv(x) });
        }
    }
    a
}

/// Electric ribbon operator
/// F^Γ = (d_Γ/|G|) Σ_g χ_Γ(ḡ) F^{e,g}.
/// All flux insertions are trivial, so it acts diagonally: each term picks
/// up the weight (d_Γ/|G|) χ_Γ(ā) from its own direct holonomy a.
pub fn ribbon_electric(
    group: &FiniteGroup,
    irrep: &Irrep,
    lat: &TorusLattice,
    state: &QuantumState,
    ribbon: &Ribbon,
) -> QuantumState {
    let actions = compile(lat, ribbon);
    let codec = *state.codec();
    let scale = Complex64::new(irrep.dim as f64 / group.order() as f64, 0.0);
    state.map_terms(|cfg, amp| {
        let mut a = group.identity();
        for act in &actions {
            if let Action::Direct { edge, along } = *act {
                let x = codec.get(cfg, edge);
                a = group.mul(a, if along { x } else { group.inv(x) });
            }
        }
        (cfg, amp * scale * irrep.character(group.inv(a)))
    })
}

/// The same electric operator assembled literally from the F^{e,g} sum;
/// kept as an independent route for cross-checking the diagonal form.
pub fn ribbon_electric_sum(
    group: &FiniteGroup,
    irrep: &Irrep,
    lat: &TorusLattice,
    state: &QuantumState,
    ribbon: &Ribbon,
) -> QuantumState {
    let scale = Complex64::new(irrep.dim as f64 / group.order() as f64, 0.0);
    let mut out = QuantumState::zero(*state.codec());
    for g in 0..group.order() {
        let coeff = scale * irrep.character(group.inv(g));
        out.add_scaled(&apply_ribbon(group, lat, state, ribbon, group.identity(), g), coeff);
    }
    out.prune();
    out
}

/// Magnetic ribbon operator component for conjugacy class C,
/// (F^C)_{i,i'} = (1/|Z_C|) Σ_{k ∈ Z_C} F^{c̄_i, p_i k p̄_{i'}},
/// where c_i runs over class members and p_i is the transversal taking the
/// representative to c_i.
pub fn ribbon_magnetic_component(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    ribbon: &Ribbon,
    class: &ConjugacyClass,
    i: usize,
    i_p: usize,
) -> QuantumState {
    let weight = Complex64::new(1.0 / class.centralizer.len() as f64, 0.0);
    let h = group.inv(class.members[i]);
    let mut out = QuantumState::zero(*state.codec());
    for &k in &class.centralizer {
        let g = group.mul(class.transversal[i], group.mul(k, group.inv(class.transversal[i_p])));
        out.add_scaled(&apply_ribbon(group, lat, state, ribbon, h, g), weight);
    }
    out.prune();
    out
}

/// Diagonal sum Σ_i (F^C)_{i,i} of the magnetic components.
pub fn ribbon_magnetic_traced(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    ribbon: &Ribbon,
    class: &ConjugacyClass,
) -> QuantumState {
    let mut out = QuantumState::zero(*state.codec());
    for i in 0..class.size() {
        out.add_scaled(
            &ribbon_magnetic_component(group, lat, state, ribbon, class, i, i),
            Complex64::new(1.0, 0.0),
        );
    }
    out.prune();
    out
}
