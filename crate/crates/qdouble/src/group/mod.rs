//! Finite-group algebra: multiplication tables, conjugacy structure, unitary
//! irreducible representations, fusion rules, and anyon bookkeeping for the
//! quantum double D(G).
//!
//! Elements are indices `0..|G|` with `0` fixed as the identity. All other
//! structure (classes, centralizers, irreps) is derived deterministically from
//! the multiplication table, so two groups with identical tables behave
//! identically everywhere downstream.

mod conjugacy;
mod fusion;
mod irreps;
mod numeric;

pub use conjugacy::{class_of, ConjugacyClass};
pub use fusion::{
    anyon_labels, centralizer_charges, count_torus_gsd, fusion_table, AnyonLabel, FusionTable,
};
pub use irreps::{verify_orthogonality, Irrep, OrthogonalityReport};

use crate::error::{QdError, Result};
use serde::{Deserialize, Serialize};

/// Which presentation a group was built from. Builtin groups carry exact
/// closed-form irreps; everything else goes through the numeric
/// regular-representation decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    S3,
    D4,
    Q8,
    Custom,
}

/// A finite group, stored as explicit multiplication and inverse tables.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<String>,
    kind: GroupKind,
}

/// Input description for [`build_group`]: either a builtin name or an explicit
/// multiplication table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin { builtin: String },
    Table { order: usize, table: Vec<Vec<usize>>, name: Option<String> },
}

/// Build a validated group from a spec. Builtin names: `Z<n>` (cyclic),
/// `S3`, `D4`, `Q8`.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Builtin { builtin } => FiniteGroup::builtin(builtin),
        GroupSpec::Table { order, table, name } => FiniteGroup::from_table(
            name.clone().unwrap_or_else(|| format!("G{order}")),
            table,
        ),
    }
}

impl FiniteGroup {
    /// Look up a builtin group by name.
    pub fn builtin(name: &str) -> Result<FiniteGroup> {
        match name {
            "S3" => Ok(Self::s3()),
            "D4" => Ok(Self::d4()),
            "Q8" => Ok(Self::q8()),
            _ => {
                if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
                    if n >= 1 {
                        return Ok(Self::cyclic(n));
                    }
                }
                Err(QdError::UnknownBuiltin(name.to_string()))
            }
        }
    }

    /// The cyclic group Z_n with generator `1`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let mut mult = vec![0u16; n * n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                mult[a * n + b] = ((a + b) % n) as u16;
            }
            inv[a] = ((n - a) % n) as u16;
        }
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        FiniteGroup { name: format!("Z{n}"), order: n, mult, inv, labels, kind: GroupKind::Cyclic(n) }
    }

    /// The symmetric group S3 with presentation c³ = t² = e, t c t = c².
    /// Element order: e, c, c², t, tc, tc².
    pub fn s3() -> FiniteGroup {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], // e
            [1, 2, 0], // c
            [2, 0, 1], // c2
            [1, 0, 2], // t
            [0, 2, 1], // tc
            [2, 1, 0], // tc2
        ];
        let labels = ["e", "c", "c2", "t", "tc", "tc2"];
        Self::from_perms("S3", &perms.iter().map(|p| p.to_vec()).collect::<Vec<_>>(), &labels, GroupKind::S3)
    }

    /// The dihedral group D4 with presentation c⁴ = t² = e, t c t = c³.
    /// Element order: e, c, c², c³, t, tc, tc², tc³.
    pub fn d4() -> FiniteGroup {
        let c = [1usize, 2, 3, 0];
        let t = [0usize, 3, 2, 1];
        let compose = |g: &[usize; 4], h: &[usize; 4]| {
            let mut r = [0usize; 4];
            for x in 0..4 {
                r[x] = g[h[x]];
            }
            r
        };
        let e = [0usize, 1, 2, 3];
        let c2 = compose(&c, &c);
        let c3 = compose(&c2, &c);
        let tc = compose(&t, &c);
        let tc2 = compose(&t, &c2);
        let tc3 = compose(&t, &c3);
        let perms = [e, c, c2, c3, t, tc, tc2, tc3];
        let labels = ["e", "c", "c2", "c3", "t", "tc", "tc2", "tc3"];
        Self::from_perms("D4", &perms.iter().map(|p| p.to_vec()).collect::<Vec<_>>(), &labels, GroupKind::D4)
    }

    /// The quaternion group Q8 = {±1, ±i, ±j, ±k}.
    pub fn q8() -> FiniteGroup {
        // Each element as a signed unit: (sign, axis) with axes 1,i,j,k.
        // Index order: 1, -1, i, -i, j, -j, k, -k.
        #[derive(Clone, Copy, PartialEq)]
        struct Q(i8, u8);
        let elems = [Q(1, 0), Q(-1, 0), Q(1, 1), Q(-1, 1), Q(1, 2), Q(-1, 2), Q(1, 3), Q(-1, 3)];
        // axis multiplication table with sign: axes 0..4 = 1,i,j,k
        let axis_mul = |a: u8, b: u8| -> (i8, u8) {
            match (a, b) {
                (0, x) => (1, x),
                (x, 0) => (1, x),
                (1, 1) => (-1, 0),
                (2, 2) => (-1, 0),
                (3, 3) => (-1, 0),
                (1, 2) => (1, 3),
                (2, 1) => (-1, 3),
                (2, 3) => (1, 1),
                (3, 2) => (-1, 1),
                (3, 1) => (1, 2),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let n = 8;
        let mut mult = vec![0u16; n * n];
        for (ia, a) in elems.iter().enumerate() {
            for (ib, b) in elems.iter().enumerate() {
                let (s, ax) = axis_mul(a.1, b.1);
                let q = Q(s * a.0 * b.0, ax);
                let idx = elems.iter().position(|x| *x == q).unwrap();
                mult[ia * n + ib] = idx as u16;
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut g = FiniteGroup { name: "Q8".into(), order: n, mult, inv: vec![0; n], labels, kind: GroupKind::Q8 };
        g.fill_inverses().expect("Q8 table is a group");
        g.validate().expect("Q8 table is a group");
        g
    }

    fn from_perms(name: &str, perms: &[Vec<usize>], labels: &[&str], kind: GroupKind) -> FiniteGroup {
        let n = perms.len();
        let mut mult = vec![0u16; n * n];
        for (ia, a) in perms.iter().enumerate() {
            for (ib, b) in perms.iter().enumerate() {
                let prod: Vec<usize> = (0..a.len()).map(|x| a[b[x]]).collect();
                let idx = perms.iter().position(|p| *p == prod).expect("closed under composition");
                mult[ia * n + ib] = idx as u16;
            }
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            order: n,
            mult,
            inv: vec![0; n],
            labels: labels.iter().map(|s| s.to_string()).collect(),
            kind,
        };
        g.fill_inverses().expect("permutation group");
        g.validate().expect("permutation group");
        g
    }

    /// Build from an explicit multiplication table (row `a`, column `b` holds
    /// the index of a·b). Element 0 must be the identity.
    pub fn from_table(name: String, table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        let mut mult = vec![0u16; n * n];
        for (a, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(QdError::MalformedTable { row: a });
            }
            for (b, &v) in row.iter().enumerate() {
                mult[a * n + b] = v as u16;
            }
        }
        let labels = (0..n).map(|k| if k == 0 { "e".into() } else { format!("g{k}") }).collect();
        let mut g = FiniteGroup { name, order: n, mult, inv: vec![0; n], labels, kind: GroupKind::Custom };
        g.fill_inverses()?;
        g.validate()?;
        Ok(g)
    }

    fn fill_inverses(&mut self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            match (0..n).find(|&b| self.mult[a * n + b] == 0 && self.mult[b * n + a] == 0) {
                Some(b) => self.inv[a] = b as u16,
                None => return Err(QdError::MissingInverse { g: a }),
            }
        }
        Ok(())
    }

    /// Check the group axioms on the stored table: identity, inverses,
    /// associativity (full triple loop, reporting the first offending triple).
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for g in 0..n {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(QdError::MissingIdentity { g });
            }
            if self.mul(g, self.inv(g)) != 0 {
                return Err(QdError::MissingInverse { g });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(QdError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    /// The product a·b.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    /// The inverse ā.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// The conjugate h g h̄.
    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Smallest k ≥ 1 with gᵏ = e.
    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.commute(a, b)))
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.commute(z, g)))
            .collect()
    }

    /// Conjugacy classes with centralizers and transversals; deterministic
    /// (lowest-index representatives and transversal elements).
    pub fn conjugacy_data(&self) -> Vec<ConjugacyClass> {
        conjugacy::conjugacy_data(self)
    }

    /// The complete list of unitary irreps. Builtin groups use exact
    /// closed-form matrices; custom tables fall back to the numeric
    /// regular-representation decomposition with a fixed seed.
    pub fn irreps(&self) -> Result<Vec<Irrep>> {
        irreps::irreps(self)
    }

    /// The subgroup on the given element indices, reindexed with the identity
    /// first and the remaining elements in ascending parent order. Returns the
    /// subgroup together with the map from subgroup indices to parent indices.
    ///
    /// Panics if the subset is not closed under multiplication.
    pub fn subgroup(&self, elements: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let mut to_parent: Vec<usize> = elements.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        assert_eq!(to_parent.first(), Some(&0), "subgroup must contain the identity");
        let n = to_parent.len();
        let find = |g: usize| -> usize {
            to_parent.binary_search(&g).expect("subset closed under multiplication")
        };
        let mut mult = vec![0u16; n * n];
        for (ia, &a) in to_parent.iter().enumerate() {
            for (ib, &b) in to_parent.iter().enumerate() {
                mult[ia * n + ib] = find(self.mul(a, b)) as u16;
            }
        }
        let labels = to_parent.iter().map(|&g| self.labels[g].clone()).collect();
        let mut sub = FiniteGroup {
            name: format!("{}|{{{}}}", self.name, n),
            order: n,
            mult,
            inv: vec![0; n],
            labels,
            kind: GroupKind::Custom,
        };
        sub.fill_inverses().expect("subgroup");
        sub.validate().expect("subgroup");
        (sub, to_parent)
    }

    /// All ordered pairs (a, b) with ab = ba.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                if self.commute(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The orbit of a commuting pair under simultaneous conjugation, sorted.
    pub fn pair_orbit(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let mut orbit: Vec<(usize, usize)> =
            (0..self.order).map(|g| (self.conj(g, a), self.conj(g, b))).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// One lexicographically smallest representative per conjugation orbit of
    /// commuting pairs, sorted. These index the torus superselection sectors.
    pub fn pair_orbit_representatives(&self) -> Vec<(usize, usize)> {
        let mut reps = Vec::new();
        for &(a, b) in &self.commuting_pairs() {
            let orbit = self.pair_orbit(a, b);
            if orbit[0] == (a, b) {
                reps.push((a, b));
            }
        }
        reps.sort_unstable();
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders_and_validation() {
        for (name, n) in [("Z1", 1), ("Z2", 2), ("Z3", 3), ("S3", 6), ("D4", 8), ("Q8", 8)] {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!(g.order(), n, "{name}");
            g.validate().unwrap();
        }
        assert!(FiniteGroup::builtin("E8").is_err());
    }

    #[test]
    fn s3_presentation_relations() {
        let g = FiniteGroup::s3();
        let (c, t) = (1, 3);
        assert_eq!(g.mul(g.mul(c, c), c), 0, "c^3 = e");
        assert_eq!(g.mul(t, t), 0, "t^2 = e");
        assert_eq!(g.conj(t, c), g.mul(c, c), "t c t = c^2");
        assert_eq!(g.mul(t, c), 4, "tc at index 4");
        assert!(!g.is_abelian());
    }

    #[test]
    fn d4_presentation_relations() {
        let g = FiniteGroup::d4();
        let (c, t) = (1, 4);
        let c2 = g.mul(c, c);
        let c3 = g.mul(c2, c);
        assert_eq!(g.mul(c3, c), 0, "c^4 = e");
        assert_eq!(g.mul(t, t), 0);
        assert_eq!(g.conj(t, c), c3, "t c t = c^3");
        assert_eq!(g.center(), vec![0, c2]);
    }

    #[test]
    fn q8_quaternion_relations() {
        let g = FiniteGroup::q8();
        let (m1, i, j, k) = (1, 2, 4, 6);
        assert_eq!(g.mul(i, i), m1);
        assert_eq!(g.mul(j, j), m1);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), g.inv(k));
        assert_eq!(g.center(), vec![0, m1]);
    }

    #[test]
    fn from_table_rejects_broken_tables() {
        // Z2 is fine
        let z2 = FiniteGroup::from_table("Z2".into(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.mul(1, 1), 0);
        // no identity at index 0
        assert!(FiniteGroup::from_table("bad".into(), &[vec![1, 0], vec![0, 1]]).is_err());
        // non-associative magma on 3 elements
        let bad = FiniteGroup::from_table(
            "bad".into(),
            &[vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn subgroup_reindexing_keeps_structure() {
        let g = FiniteGroup::s3();
        let (sub, map) = g.subgroup(&[0, 1, 2]);
        assert_eq!(sub.order(), 3);
        assert_eq!(map, vec![0, 1, 2]);
        assert!(sub.is_abelian());
        assert_eq!(sub.element_order(1), 3);
    }

    #[test]
    fn s3_pair_orbits_match_sector_list() {
        let g = FiniteGroup::s3();
        let reps = g.pair_orbit_representatives();
        // (e,e),(e,c),(e,t),(c,e),(c,c),(c,c2),(t,e),(t,t)
        assert_eq!(
            reps,
            vec![(0, 0), (0, 1), (0, 3), (1, 0), (1, 1), (1, 2), (3, 0), (3, 3)]
        );
        let sizes: Vec<usize> = reps.iter().map(|&(a, b)| g.pair_orbit(a, b).len()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 2, 2, 2, 3, 3]);
        assert_eq!(g.commuting_pairs().len(), 18);
    }
}
