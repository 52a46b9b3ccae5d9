//! Conjugacy classes, centralizers, and transversals.

use super::FiniteGroup;

/// One conjugacy class C together with the data needed to label and move
/// fluxes: the centralizer Z(r) of the representative and a transversal
/// {p_i} with p_i r p_i⁻¹ = c_i for each member c_i.
#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    /// Lowest element index in the class.
    pub representative: usize,
    /// Class members in ascending index order.
    pub members: Vec<usize>,
    /// Elements commuting with the representative, ascending.
    pub centralizer: Vec<usize>,
    /// `transversal[i]` is the lowest-index p with p·representative·p̄ = members[i].
    pub transversal: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Position of a parent-group element within `members`, if it lies in
    /// this class.
    pub fn member_index(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }
}

/// All conjugacy classes, ordered by representative index (so the class of
/// the identity comes first). Deterministic: representatives and transversal
/// entries are the lowest-index choices.
pub fn conjugacy_data(group: &FiniteGroup) -> Vec<ConjugacyClass> {
    let n = group.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for r in 0..n {
        if seen[r] {
            continue;
        }
        let mut members = Vec::new();
        let mut transversal_of = vec![usize::MAX; n];
        for p in 0..n {
            let c = group.conj(p, r);
            if transversal_of[c] == usize::MAX {
                transversal_of[c] = p;
            }
        }
        for c in 0..n {
            if transversal_of[c] != usize::MAX {
                seen[c] = true;
                members.push(c);
            }
        }
        let transversal = members.iter().map(|&c| transversal_of[c]).collect();
        let centralizer = (0..n).filter(|&z| group.commute(z, r)).collect();
        classes.push(ConjugacyClass { representative: r, members, centralizer, transversal });
    }
    classes
}

/// Index of the class containing `g` within the `conjugacy_data` ordering.
pub fn class_of(classes: &[ConjugacyClass], g: usize) -> usize {
    classes
        .iter()
        .position(|c| c.member_index(g).is_some())
        .expect("every element lies in some class")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let g = FiniteGroup::s3();
        let cls = g.conjugacy_data();
        let member_sets: Vec<Vec<usize>> = cls.iter().map(|c| c.members.clone()).collect();
        assert_eq!(member_sets, vec![vec![0], vec![1, 2], vec![3, 4, 5]]);
        assert_eq!(cls[1].centralizer, vec![0, 1, 2]);
        assert_eq!(cls[2].centralizer, vec![0, 3]);
        for c in &cls {
            // transversal really conjugates the representative onto each member
            for (i, &m) in c.members.iter().enumerate() {
                assert_eq!(g.conj(c.transversal[i], c.representative), m);
            }
            // orbit-stabilizer
            assert_eq!(c.size() * c.centralizer.len(), g.order());
            assert_eq!(c.transversal[0], 0, "representative maps to itself via e");
        }
    }

    #[test]
    fn d4_classes_and_centralizers() {
        let g = FiniteGroup::d4();
        let cls = g.conjugacy_data();
        let member_sets: Vec<Vec<usize>> = cls.iter().map(|c| c.members.clone()).collect();
        // {e}, {c, c3}, {c2}, {t, tc2}, {tc, tc3}
        assert_eq!(member_sets, vec![vec![0], vec![1, 3], vec![2], vec![4, 6], vec![5, 7]]);
        assert_eq!(cls[1].centralizer, vec![0, 1, 2, 3]);
        assert_eq!(cls[2].centralizer.len(), 8);
        assert_eq!(cls[3].centralizer, vec![0, 2, 4, 6]);
        assert_eq!(cls[4].centralizer, vec![0, 2, 5, 7]);
    }

    #[test]
    fn q8_class_count() {
        let g = FiniteGroup::q8();
        let cls = g.conjugacy_data();
        assert_eq!(cls.len(), 5);
        let sizes: Vec<usize> = cls.iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn class_lookup() {
        let g = FiniteGroup::s3();
        let cls = g.conjugacy_data();
        assert_eq!(class_of(&cls, 0), 0);
        assert_eq!(class_of(&cls, 2), 1);
        assert_eq!(class_of(&cls, 5), 2);
    }
}
