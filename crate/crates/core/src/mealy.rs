//! Mealy machines over a finite group alphabet.
//!
//! A machine `(Q, t, f, s)` maps input sequences over its group to output
//! sequences of the same length: with `q_1 = s` and `q_{i+1} = t(q_i, x_i)`,
//! the output is `y_i = f(q_i, x_i)`. Output position `i` depends only on
//! inputs `1..i`, so machines are prefix preserving by construction. Two
//! machines that agree as maps on all sequences are regarded as equal; that
//! relation is decided exactly by [`equivalent`].
//!
//! Machines over the same group form a nearring: [`add`] is pointwise
//! addition of output sequences, [`compose`] is map composition, and only
//! the right distributive law `(a+b)∘c = a∘c + b∘c` holds in general. Both
//! constructions materialize only the reachable part of the product state
//! space.

use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, FunctionTable, GroupError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine needs at least one state")]
    NoStates,
    #[error("start state {start} out of range for {states} states")]
    BadStart { start: usize, states: usize },
    #[error("transition table row {row} has {len} entries, expected {expected}")]
    BadTransRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("output table row {row} has {len} entries, expected {expected}")]
    BadOutRow {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("transition target {value} at state {state}, input {input} is not a state")]
    BadTransition {
        state: usize,
        input: usize,
        value: usize,
    },
    #[error("output value {value} at state {state}, input {input} is not a group element")]
    BadOutput {
        state: usize,
        input: usize,
        value: usize,
    },
    #[error("input element {value} at position {position} is not in the machine's group")]
    ForeignElement { position: usize, value: usize },
    #[error("machines are over different groups")]
    GroupMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite Mealy machine over a group alphabet.
///
/// `trans` and `out` are flattened row-major by state: entry
/// `[q * order + g]` is the transition target / output for state `q` on
/// input element `g`. Values are immutable after construction; every
/// operation is a pure function.
#[derive(Debug, Clone)]
pub struct MealyMachine {
    group: Arc<FiniteGroup>,
    states: usize,
    start: usize,
    trans: Vec<usize>,
    out: Vec<usize>,
}

impl MealyMachine {
    pub fn new(
        group: Arc<FiniteGroup>,
        start: usize,
        trans_rows: Vec<Vec<usize>>,
        out_rows: Vec<Vec<usize>>,
    ) -> Result<Self, MachineError> {
        let states = trans_rows.len();
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if start >= states {
            return Err(MachineError::BadStart { start, states });
        }
        let order = group.order();
        if out_rows.len() != states {
            return Err(MachineError::BadOutRow {
                row: out_rows.len().min(states),
                len: out_rows.len(),
                expected: states,
            });
        }
        let mut trans = Vec::with_capacity(states * order);
        for (row, r) in trans_rows.iter().enumerate() {
            if r.len() != order {
                return Err(MachineError::BadTransRow {
                    row,
                    len: r.len(),
                    expected: order,
                });
            }
            for (input, &v) in r.iter().enumerate() {
                if v >= states {
                    return Err(MachineError::BadTransition {
                        state: row,
                        input,
                        value: v,
                    });
                }
                trans.push(v);
            }
        }
        let mut out = Vec::with_capacity(states * order);
        for (row, r) in out_rows.iter().enumerate() {
            if r.len() != order {
                return Err(MachineError::BadOutRow {
                    row,
                    len: r.len(),
                    expected: order,
                });
            }
            for (input, &v) in r.iter().enumerate() {
                if v >= order {
                    return Err(MachineError::BadOutput {
                        state: row,
                        input,
                        value: v,
                    });
                }
                out.push(v);
            }
        }
        Ok(MealyMachine {
            group,
            states,
            start,
            trans,
            out,
        })
    }

    fn from_parts(
        group: Arc<FiniteGroup>,
        start: usize,
        trans: Vec<usize>,
        out: Vec<usize>,
    ) -> Self {
        let states = trans.len() / group.order();
        MealyMachine {
            group,
            states,
            start,
            trans,
            out,
        }
    }

    /// The one-state machine applying `f` at every position.
    pub fn from_function(f: &FunctionTable) -> Self {
        let order = f.group().order();
        MealyMachine {
            group: Arc::clone(f.group()),
            states: 1,
            start: 0,
            trans: vec![0; order],
            out: f.values().to_vec(),
        }
    }

    /// Multiplicative identity: copies its input.
    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        MealyMachine::from_function(&FunctionTable::identity(group))
    }

    /// Additive zero: outputs 0 forever.
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        MealyMachine::from_function(&FunctionTable::zero(group))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    #[inline]
    pub fn trans(&self, state: usize, input: usize) -> usize {
        self.trans[state * self.group.order() + input]
    }

    #[inline]
    pub fn out(&self, state: usize, input: usize) -> usize {
        self.out[state * self.group.order() + input]
    }

    pub fn trans_rows(&self) -> Vec<Vec<usize>> {
        let order = self.group.order();
        (0..self.states)
            .map(|q| self.trans[q * order..(q + 1) * order].to_vec())
            .collect()
    }

    pub fn out_rows(&self) -> Vec<Vec<usize>> {
        let order = self.group.order();
        (0..self.states)
            .map(|q| self.out[q * order..(q + 1) * order].to_vec())
            .collect()
    }

    /// The state output map `g -> f(q, g)` at one state.
    pub fn output_map(&self, state: usize) -> FunctionTable {
        let order = self.group.order();
        FunctionTable::new(
            Arc::clone(&self.group),
            self.out[state * order..(state + 1) * order].to_vec(),
        )
        .expect("rows of a constructed machine are valid tables")
    }

    /// Runs the machine on a finite input sequence.
    pub fn evaluate(&self, input: &[usize]) -> Result<Vec<usize>, MachineError> {
        let order = self.group.order();
        let mut state = self.start;
        let mut output = Vec::with_capacity(input.len());
        for (position, &x) in input.iter().enumerate() {
            if x >= order {
                return Err(MachineError::ForeignElement { position, value: x });
            }
            output.push(self.out(state, x));
            state = self.trans(state, x);
        }
        Ok(output)
    }

    /// The restricted action on `G^n`: the image of `x` padded with zeros,
    /// truncated back to `n` entries. Prefix preservation makes the padding
    /// irrelevant, so this is [`evaluate`](Self::evaluate) itself.
    pub fn evaluate_restricted(&self, input: &[usize]) -> Result<Vec<usize>, MachineError> {
        self.evaluate(input)
    }

    /// States reachable from the start, in breadth-first discovery order.
    fn reachable(&self) -> Vec<usize> {
        let order = self.group.order();
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        let mut visited = Vec::new();
        while let Some(q) = queue.pop_front() {
            visited.push(q);
            for g in 0..order {
                let r = self.trans(q, g);
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        visited
    }

    /// Restriction to the reachable states. Unreachable states never affect
    /// the computed map, so `equivalent(&m.trim(), &m)` always holds.
    pub fn trim(&self) -> MealyMachine {
        let order = self.group.order();
        let visited = self.reachable();
        let mut remap = vec![usize::MAX; self.states];
        for (new, &old) in visited.iter().enumerate() {
            remap[old] = new;
        }
        let mut trans = Vec::with_capacity(visited.len() * order);
        let mut out = Vec::with_capacity(visited.len() * order);
        for &old in &visited {
            for g in 0..order {
                trans.push(remap[self.trans(old, g)]);
                out.push(self.out(old, g));
            }
        }
        MealyMachine::from_parts(Arc::clone(&self.group), 0, trans, out)
    }

    /// True iff the machine maps the all-zero sequence to the all-zero
    /// sequence, i.e. every state on the zero-input orbit has a
    /// zero-preserving output map. This characterizes zero symmetry in both
    /// directions.
    pub fn is_zero_symmetric(&self) -> bool {
        let mut seen = vec![false; self.states];
        let mut q = self.start;
        while !seen[q] {
            seen[q] = true;
            if self.out(q, 0) != 0 {
                return false;
            }
            q = self.trans(q, 0);
        }
        true
    }

    /// True iff every reachable state's output map is constant, i.e. the
    /// machine is a Moore machine: output position `k` never depends on
    /// input position `k`.
    pub fn is_delaying(&self) -> bool {
        let order = self.group.order();
        self.reachable().into_iter().all(|q| {
            let first = self.out(q, 0);
            (1..order).all(|g| self.out(q, g) == first)
        })
    }
}

fn check_same_group(a: &MealyMachine, b: &MealyMachine) -> Result<(), MachineError> {
    if a.group.same_table(&b.group) {
        Ok(())
    } else {
        Err(MachineError::GroupMismatch)
    }
}

/// Breadth-first product construction over reachable state pairs.
///
/// `step` maps `(qa, qb, input)` to `(output, next_a, next_b)`.
fn product_machine(
    a: &MealyMachine,
    b: &MealyMachine,
    step: impl Fn(usize, usize, usize) -> (usize, usize, usize),
) -> MealyMachine {
    let order = a.group.order();
    let mut index_of = std::collections::HashMap::new();
    let mut pairs = vec![(a.start, b.start)];
    index_of.insert((a.start, b.start), 0usize);
    let mut trans = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (qa, qb) = pairs[next];
        next += 1;
        for g in 0..order {
            let (y, ra, rb) = step(qa, qb, g);
            let target = *index_of.entry((ra, rb)).or_insert_with(|| {
                pairs.push((ra, rb));
                pairs.len() - 1
            });
            trans.push(target);
            out.push(y);
        }
    }
    MealyMachine::from_parts(Arc::clone(&a.group), 0, trans, out)
}

/// Pointwise sum: `add(a, b)` maps `x` to `a(x) + b(x)`.
pub fn add(a: &MealyMachine, b: &MealyMachine) -> Result<MealyMachine, MachineError> {
    check_same_group(a, b)?;
    let g = Arc::clone(&a.group);
    Ok(product_machine(a, b, |qa, qb, x| {
        (
            g.add(a.out(qa, x), b.out(qb, x)),
            a.trans(qa, x),
            b.trans(qb, x),
        )
    }))
}

/// Pointwise negation: same states and transitions, outputs negated.
pub fn negate(a: &MealyMachine) -> MealyMachine {
    let out = a.out.iter().map(|&y| a.group.neg(y)).collect();
    MealyMachine::from_parts(Arc::clone(&a.group), a.start, a.trans.clone(), out)
}

/// `a - b` = `a + (-b)`.
pub fn subtract(a: &MealyMachine, b: &MealyMachine) -> Result<MealyMachine, MachineError> {
    add(a, &negate(b))
}

/// Map composition: `compose(a, b)` maps `x` to `a(b(x))`.
///
/// On input `g` the pair state `(qa, qb)` feeds the intermediate symbol
/// `h = f_b(qb, g)` to `a`, outputs `f_a(qa, h)`, and steps both machines.
pub fn compose(a: &MealyMachine, b: &MealyMachine) -> Result<MealyMachine, MachineError> {
    check_same_group(a, b)?;
    Ok(product_machine(a, b, |qa, qb, g| {
        let h = b.out(qb, g);
        (a.out(qa, h), a.trans(qa, h), b.trans(qb, g))
    }))
}

/// Decides whether two machines agree as maps on all finite (equivalently,
/// all infinite) sequences.
///
/// Breadth-first search over reachable state pairs from the two start
/// states: the machines are equivalent iff the output rows agree at every
/// visited pair. Terminates within `state_count(a) * state_count(b)` pair
/// visits.
pub fn equivalent(a: &MealyMachine, b: &MealyMachine) -> Result<bool, MachineError> {
    Ok(equivalence_counterexample(a, b)?.is_none())
}

/// Like [`equivalent`], but on disagreement returns a shortest input
/// sequence on which the outputs differ.
pub fn equivalence_counterexample(
    a: &MealyMachine,
    b: &MealyMachine,
) -> Result<Option<Vec<usize>>, MachineError> {
    check_same_group(a, b)?;
    let order = a.group.order();
    let mut index_of = std::collections::HashMap::new();
    // (pair, parent index, input symbol that led here)
    let mut nodes = vec![((a.start, b.start), usize::MAX, 0usize)];
    index_of.insert((a.start, b.start), 0usize);
    let mut next = 0;
    while next < nodes.len() {
        let ((qa, qb), _, _) = nodes[next];
        for g in 0..order {
            if a.out(qa, g) != b.out(qb, g) {
                let mut path = vec![g];
                let mut at = next;
                while nodes[at].1 != usize::MAX {
                    path.push(nodes[at].2);
                    at = nodes[at].1;
                }
                path.reverse();
                return Ok(Some(path));
            }
            let pair = (a.trans(qa, g), b.trans(qb, g));
            if let std::collections::hash_map::Entry::Vacant(e) = index_of.entry(pair) {
                e.insert(nodes.len());
                nodes.push((pair, next, g));
            }
        }
        next += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z3() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(3).unwrap()
    }

    #[test]
    fn machines_evaluate_concurrently() {
        fn require_send_sync<T: Send + Sync>() {}
        require_send_sync::<MealyMachine>();
        require_send_sync::<FiniteGroup>();

        let g = z3();
        let c = lock_machine(&g, 1);
        let shared = std::sync::Arc::new(c);
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let m = std::sync::Arc::clone(&shared);
                std::thread::spawn(move || m.evaluate(&[0, 2, 0, 1]).unwrap())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), vec![0, 0, 1, 1]);
        }
    }

    /// Two-state machine: waits in `a` while inputs are 0, then locks into
    /// `b` and outputs `k` forever.
    fn lock_machine(g: &Arc<FiniteGroup>, k: usize) -> MealyMachine {
        let order = g.order();
        let mut trans_a: Vec<usize> = vec![1; order];
        trans_a[0] = 0;
        MealyMachine::new(
            Arc::clone(g),
            0,
            vec![trans_a, vec![1; order]],
            vec![vec![0; order], vec![k; order]],
        )
        .unwrap()
    }

    #[test]
    fn identity_machine_copies_input() {
        let g = z3();
        let m = MealyMachine::identity(&g);
        assert_eq!(m.evaluate(&[1, 2, 0]).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn from_function_applies_componentwise() {
        let g = z3();
        let f = FunctionTable::new(Arc::clone(&g), vec![1, 0, 2]).unwrap();
        let m = MealyMachine::from_function(&f);
        assert_eq!(m.evaluate(&[0, 1, 2, 1]).unwrap(), vec![1, 0, 2, 0]);

        let negm = MealyMachine::from_function(&FunctionTable::negation(&g));
        assert_eq!(negm.evaluate(&[1, 2]).unwrap(), vec![2, 1]);
    }

    #[test]
    fn lock_machine_outputs() {
        let g = z3();
        let c = lock_machine(&g, 1);
        assert_eq!(c.evaluate(&[0, 2, 0, 1]).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(c.evaluate_restricted(&[2, 0]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn restricted_action_trivia() {
        let g = z3();
        assert_eq!(
            MealyMachine::identity(&g)
                .evaluate_restricted(&[1, 0])
                .unwrap(),
            vec![1, 0]
        );
        assert_eq!(
            MealyMachine::zero(&g).evaluate_restricted(&[2, 2]).unwrap(),
            vec![0, 0]
        );
    }

    #[test]
    fn evaluate_rejects_foreign_elements() {
        let g = z3();
        let m = MealyMachine::identity(&g);
        assert!(m.evaluate(&[0, 3]).is_err());
    }

    #[test]
    fn add_matches_pointwise_function_sum() {
        let g = z3();
        let f1 = FunctionTable::new(Arc::clone(&g), vec![0, 2, 1]).unwrap();
        let f2 = FunctionTable::new(Arc::clone(&g), vec![1, 1, 0]).unwrap();
        let sum = add(
            &MealyMachine::from_function(&f1),
            &MealyMachine::from_function(&f2),
        )
        .unwrap();
        let direct = MealyMachine::from_function(&f1.add(&f2));
        assert!(equivalent(&sum, &direct).unwrap());
    }

    #[test]
    fn additive_laws() {
        let g = z3();
        let c = lock_machine(&g, 2);
        let zero = MealyMachine::zero(&g);
        assert!(equivalent(&add(&c, &zero).unwrap(), &c).unwrap());
        assert!(equivalent(&add(&c, &negate(&c)).unwrap(), &zero).unwrap());
        assert!(equivalent(&negate(&negate(&c)), &c).unwrap());
        assert!(equivalent(&negate(&zero), &zero).unwrap());
    }

    #[test]
    fn compose_laws() {
        let g = z3();
        let c = lock_machine(&g, 1);
        let id = MealyMachine::identity(&g);
        let zero = MealyMachine::zero(&g);
        assert!(equivalent(&compose(&id, &c).unwrap(), &c).unwrap());
        assert!(equivalent(&compose(&c, &id).unwrap(), &c).unwrap());
        assert!(equivalent(&compose(&zero, &c).unwrap(), &zero).unwrap());
        // c is zero symmetric, so right-composing with zero collapses.
        assert!(equivalent(&compose(&c, &zero).unwrap(), &zero).unwrap());
        // A non-zero-symmetric machine keeps outputting on zero input.
        let one = MealyMachine::from_function(&FunctionTable::constant(&g, 1));
        assert!(!equivalent(&compose(&one, &zero).unwrap(), &zero).unwrap());
    }

    #[test]
    fn equivalence_ignores_unreachable_states() {
        let g = z3();
        // State 2 is unreachable and disagrees everywhere.
        let m = MealyMachine::new(
            Arc::clone(&g),
            0,
            vec![vec![0, 1, 0], vec![1, 1, 1], vec![2, 2, 2]],
            vec![vec![0, 1, 2], vec![0, 1, 2], vec![1, 1, 1]],
        )
        .unwrap();
        let trimmed = m.trim();
        assert_eq!(trimmed.state_count(), 2);
        assert!(equivalent(&m, &trimmed).unwrap());
    }

    #[test]
    fn duplicated_states_are_equivalent_to_identity() {
        let g = z3();
        let dup = MealyMachine::new(
            Arc::clone(&g),
            0,
            vec![vec![1, 1, 1], vec![0, 0, 0]],
            vec![vec![0, 1, 2], vec![0, 1, 2]],
        )
        .unwrap();
        assert!(equivalent(&dup, &MealyMachine::identity(&g)).unwrap());
    }

    #[test]
    fn counterexample_for_lock_vs_zero() {
        let g = z3();
        let c = lock_machine(&g, 1);
        let zero = MealyMachine::zero(&g);
        let witness = equivalence_counterexample(&c, &zero).unwrap().unwrap();
        let yc = c.evaluate(&witness).unwrap();
        let yz = zero.evaluate(&witness).unwrap();
        assert_ne!(yc, yz);
    }

    #[test]
    fn trim_keeps_already_trim_machines() {
        let g = z3();
        let c = lock_machine(&g, 1);
        assert_eq!(c.trim().state_count(), 2);
    }

    #[test]
    fn zero_symmetry_predicate() {
        let g = z3();
        let f = FunctionTable::new(Arc::clone(&g), vec![0, 2, 2]).unwrap();
        assert!(MealyMachine::from_function(&f).is_zero_symmetric());
        let one = MealyMachine::from_function(&FunctionTable::constant(&g, 1));
        assert!(!one.is_zero_symmetric());
        assert!(lock_machine(&g, 1).is_zero_symmetric());
    }

    #[test]
    fn delaying_predicate() {
        let g = z3();
        assert!(lock_machine(&g, 1).is_delaying());
        assert!(!MealyMachine::identity(&g).is_delaying());
        let f = FunctionTable::new(Arc::clone(&g), vec![0, 2, 1]).unwrap();
        assert!(!MealyMachine::from_function(&f).is_delaying());
        // Constant output maps per state, even if nonzero, are delaying.
        let one = MealyMachine::from_function(&FunctionTable::constant(&g, 1));
        assert!(one.is_delaying());
    }

    #[test]
    fn group_mismatch_is_rejected() {
        let a = MealyMachine::identity(&z3());
        let b = MealyMachine::identity(&FiniteGroup::cyclic(2).unwrap());
        assert_eq!(add(&a, &b).unwrap_err(), MachineError::GroupMismatch);
        assert_eq!(compose(&a, &b).unwrap_err(), MachineError::GroupMismatch);
        assert_eq!(equivalent(&a, &b).unwrap_err(), MachineError::GroupMismatch);
    }
}
