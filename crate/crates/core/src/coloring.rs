//! Vertex partitions and the verifier for equitable tree-colorings.

use std::fmt;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("a partition needs at least one class")]
    NoClasses,
    #[error("vertex {vertex} has class {class}, outside 1..={m}")]
    ClassOutOfRange {
        vertex: usize,
        class: usize,
        m: usize,
    },
    #[error("partition covers {assigned} vertices but the graph has {order}")]
    DomainMismatch { assigned: usize, order: usize },
}

/// Assignment of every vertex to a class in `1..=m`. Classes may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    m: usize,
    assignment: Vec<usize>,
}

impl Partition {
    pub fn new(m: usize, assignment: Vec<usize>) -> Result<Partition, ColoringError> {
        if m == 0 {
            return Err(ColoringError::NoClasses);
        }
        if let Some((vertex, &class)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > m)
        {
            return Err(ColoringError::ClassOutOfRange { vertex, class, m });
        }
        Ok(Partition { m, assignment })
    }

    /// Builds a partition from 0-based class labels.
    pub fn from_zero_based(m: usize, labels: &[usize]) -> Result<Partition, ColoringError> {
        Partition::new(m, labels.iter().map(|&c| c + 1).collect())
    }

    /// Builds a partition from explicit class member lists (class `i + 1` is
    /// `classes[i]`); every vertex in `0..n` must appear exactly once.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Option<Partition> {
        let mut assignment = vec![0; n];
        for (i, members) in classes.iter().enumerate() {
            for &v in members {
                if v >= n || assignment[v] != 0 {
                    return None;
                }
                assignment[v] = i + 1;
            }
        }
        if assignment.contains(&0) {
            return None;
        }
        Partition::new(classes.len(), assignment).ok()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// 1-based class of `v`.
    pub fn class_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Member lists; index `i` holds class `i + 1`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c - 1].push(v);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.m];
        for &c in &self.assignment {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// Sizes of any two classes (empty ones included) differ by at most one.
    pub fn is_equitable(&self) -> bool {
        let sizes = self.class_sizes();
        let lo = sizes.iter().min().unwrap();
        let hi = sizes.iter().max().unwrap();
        hi - lo <= 1
    }

    /// Keeps only vertices `0..n`.
    pub fn truncated(&self, n: usize) -> Partition {
        Partition {
            m: self.m,
            assignment: self.assignment[..n].to_vec(),
        }
    }
}

/// What each class must induce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassPredicate {
    Independent,
    Forest,
    /// A forest of maximum degree at most `d` (`d >= 1`).
    DefectiveForest(usize),
}

impl fmt::Display for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassPredicate::Independent => f.write_str("independent"),
            ClassPredicate::Forest => f.write_str("forest"),
            ClassPredicate::DefectiveForest(d) => write!(f, "{d}-defective forest"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationReason {
    Cycle,
    Degree,
    Adjacent,
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationReason::Cycle => "CYCLE",
            ViolationReason::Degree => "DEGREE",
            ViolationReason::Adjacent => "ADJACENT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassViolation {
    /// 1-based class index.
    pub class: usize,
    pub reason: ViolationReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub equitable_ok: bool,
    pub class_violations: Vec<ClassViolation>,
    pub size_spread: (usize, usize),
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.equitable_ok && self.class_violations.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "equitable: {} (class sizes {}..{})",
            if self.equitable_ok { "yes" } else { "NO" },
            self.size_spread.0,
            self.size_spread.1
        )?;
        for v in &self.class_violations {
            writeln!(f, "class {}: {}", v.class, v.reason)?;
        }
        write!(
            f,
            "verdict: {}",
            if self.is_valid() { "VALID" } else { "INVALID" }
        )
    }
}

/// Checks equitability and the per-class predicate, collecting every
/// violation rather than stopping at the first.
pub fn verify(
    g: &Graph,
    p: &Partition,
    pred: ClassPredicate,
) -> Result<VerifyReport, ColoringError> {
    if p.len() != g.order() {
        return Err(ColoringError::DomainMismatch {
            assigned: p.len(),
            order: g.order(),
        });
    }
    let sizes = p.class_sizes();
    let lo = *sizes.iter().min().unwrap();
    let hi = *sizes.iter().max().unwrap();

    let mut class_violations = Vec::new();
    for (i, members) in p.classes().iter().enumerate() {
        let class = i + 1;
        let sub = g
            .induced_subgraph(members)
            .expect("members are vertices of g");
        let h = &sub.graph;
        match pred {
            ClassPredicate::Independent => {
                if h.size() > 0 {
                    class_violations.push(ClassViolation {
                        class,
                        reason: ViolationReason::Adjacent,
                    });
                }
            }
            ClassPredicate::Forest | ClassPredicate::DefectiveForest(_) => {
                if !h.is_forest() {
                    class_violations.push(ClassViolation {
                        class,
                        reason: ViolationReason::Cycle,
                    });
                }
                if let ClassPredicate::DefectiveForest(d) = pred {
                    if h.max_degree().is_ok_and(|deg| deg > d) {
                        class_violations.push(ClassViolation {
                            class,
                            reason: ViolationReason::Degree,
                        });
                    }
                }
            }
        }
    }
    Ok(VerifyReport {
        equitable_ok: hi - lo <= 1,
        class_violations,
        size_spread: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    fn part(m: usize, a: &[usize]) -> Partition {
        Partition::new(m, a.to_vec()).unwrap()
    }

    #[test]
    fn equitability() {
        assert!(part(3, &[1, 1, 2, 2, 3, 3]).is_equitable());
        assert!(part(3, &[1, 1, 1, 2, 2, 3, 3]).is_equitable());
        assert!(!part(3, &[1, 1, 1, 1, 2, 2, 3]).is_equitable());
        // Empty classes count.
        assert!(part(4, &[1, 2, 3]).is_equitable());
        assert!(!part(3, &[1, 1, 2]).is_equitable());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Partition::new(0, vec![]), Err(ColoringError::NoClasses));
        assert_eq!(
            Partition::new(2, vec![1, 0]),
            Err(ColoringError::ClassOutOfRange {
                vertex: 1,
                class: 0,
                m: 2
            })
        );
        assert!(Partition::new(2, vec![3]).is_err());
        assert_eq!(
            Partition::from_classes(3, &[vec![0, 2], vec![1]]),
            Some(part(2, &[1, 2, 1]))
        );
        assert_eq!(Partition::from_classes(3, &[vec![0, 2], vec![2]]), None);
    }

    #[test]
    fn verify_examples() {
        let r = verify(
            &complete(4),
            &part(2, &[1, 1, 2, 2]),
            ClassPredicate::Forest,
        )
        .unwrap();
        assert!(r.is_valid());

        let r = verify(&complete(3), &part(1, &[1, 1, 1]), ClassPredicate::Forest).unwrap();
        assert_eq!(
            r.class_violations,
            vec![ClassViolation {
                class: 1,
                reason: ViolationReason::Cycle
            }]
        );

        // Center with two leaves has internal degree 2.
        let r = verify(
            &star(5),
            &part(2, &[1, 1, 1, 2, 2, 2]),
            ClassPredicate::DefectiveForest(2),
        )
        .unwrap();
        assert!(r.is_valid());
        let r = verify(
            &star(5),
            &part(2, &[1, 1, 1, 2, 2, 2]),
            ClassPredicate::DefectiveForest(1),
        )
        .unwrap();
        assert_eq!(
            r.class_violations,
            vec![ClassViolation {
                class: 1,
                reason: ViolationReason::Degree
            }]
        );

        let r = verify(
            &cycle(4),
            &part(2, &[1, 1, 2, 2]),
            ClassPredicate::Independent,
        )
        .unwrap();
        assert_eq!(r.class_violations.len(), 2);
        assert!(r.equitable_ok);

        assert_eq!(
            verify(&cycle(4), &part(2, &[1, 2]), ClassPredicate::Forest),
            Err(ColoringError::DomainMismatch {
                assigned: 2,
                order: 4
            })
        );
    }

    #[test]
    fn all_violations_are_reported() {
        // Two triangles, each in its own class, plus an unbalanced third class.
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = verify(&g, &part(3, &[1, 1, 1, 2, 2, 2]), ClassPredicate::Forest).unwrap();
        assert!(!r.equitable_ok);
        assert_eq!(r.size_spread, (0, 3));
        assert_eq!(r.class_violations.len(), 2);
    }

    fn arb_instance() -> impl Strategy<Value = (Graph, Partition)> {
        (1usize..=9, 1usize..=4).prop_flat_map(|(n, m)| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let len = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), len),
                proptest::collection::vec(1..=m, n),
            )
                .prop_map(move |(mask, labels)| {
                    let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
                    (
                        Graph::new(n, edges).unwrap(),
                        Partition::new(m, labels).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn predicate_monotonicity((g, p) in arb_instance(), d in 1usize..4) {
            let ind = verify(&g, &p, ClassPredicate::Independent).unwrap().is_valid();
            let def = verify(&g, &p, ClassPredicate::DefectiveForest(d)).unwrap().is_valid();
            let forest = verify(&g, &p, ClassPredicate::Forest).unwrap().is_valid();
            prop_assert!(!ind || def);
            prop_assert!(!def || forest);
        }

        #[test]
        fn forest_verdict_matches_per_class_forest_check((g, p) in arb_instance()) {
            let r = verify(&g, &p, ClassPredicate::Forest).unwrap();
            let classes_ok = p.classes().iter()
                .all(|c| g.induced_subgraph(c).unwrap().graph.is_forest());
            prop_assert_eq!(r.class_violations.is_empty(), classes_ok);
            prop_assert_eq!(r.equitable_ok, p.is_equitable());
        }

        #[test]
        fn splitting_a_class_keeps_classes_valid((g, p) in arb_instance(), pick in 0usize..16) {
            let r = verify(&g, &p, ClassPredicate::Forest).unwrap();
            prop_assume!(r.class_violations.is_empty());
            // Move half of one class into a fresh class m + 1.
            let target = 1 + pick % p.m();
            let mut flip = false;
            let labels: Vec<usize> = p.assignment().iter().map(|&c| {
                if c == target { flip = !flip; if flip { p.m() + 1 } else { c } } else { c }
            }).collect();
            let split = Partition::new(p.m() + 1, labels).unwrap();
            let r2 = verify(&g, &split, ClassPredicate::Forest).unwrap();
            prop_assert!(r2.class_violations.is_empty());
            prop_assert_eq!(r2.equitable_ok, split.is_equitable());
        }
    }
}
