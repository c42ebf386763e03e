#![allow(dead_code)]

//! Shared generators and independent oracles for the integration suites.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use ppnr::group::FiniteGroup;
use ppnr::mealy::MealyMachine;
use ppnr::radical::alpha;

/// Uniformly random machine with 1..=max_states states.
pub fn random_machine(rng: &mut StdRng, g: &Arc<FiniteGroup>, max_states: usize) -> MealyMachine {
    let states = rng.random_range(1..=max_states);
    let order = g.order();
    let trans = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..states)).collect())
        .collect();
    let out = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..order)).collect())
        .collect();
    MealyMachine::new(Arc::clone(g), 0, trans, out).expect("generated tables are valid")
}

/// Random zero-symmetric delaying machine: constant output rows, zeroed
/// along the zero-input orbit.
pub fn random_delaying_machine(
    rng: &mut StdRng,
    g: &Arc<FiniteGroup>,
    max_states: usize,
) -> MealyMachine {
    let states = rng.random_range(1..=max_states);
    let order = g.order();
    let trans: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..states)).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = (0..states)
        .map(|_| vec![rng.random_range(0..order); order])
        .collect();
    // Zero symmetry: constant rows must vanish along the zero-input orbit.
    let mut seen = vec![false; states];
    let mut q = 0;
    while !seen[q] {
        seen[q] = true;
        out[q] = vec![0; order];
        q = trans[q][0];
    }
    MealyMachine::new(Arc::clone(g), 0, trans, out).expect("generated tables are valid")
}

/// Random zero-symmetric machine: arbitrary tables with the zero-input
/// output cleared along the zero orbit.
pub fn random_zero_symmetric_machine(
    rng: &mut StdRng,
    g: &Arc<FiniteGroup>,
    max_states: usize,
) -> MealyMachine {
    let states = rng.random_range(1..=max_states);
    let order = g.order();
    let trans: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..states)).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..order)).collect())
        .collect();
    let mut seen = vec![false; states];
    let mut q = 0;
    while !seen[q] {
        seen[q] = true;
        out[q][0] = 0;
        q = trans[q][0];
    }
    MealyMachine::new(Arc::clone(g), 0, trans, out).expect("generated tables are valid")
}

/// Random machine in the kernel of the amnesiac map: arbitrary tables with
/// all-zero output rows along the zero-input orbit.
pub fn random_ker_alpha_machine(
    rng: &mut StdRng,
    g: &Arc<FiniteGroup>,
    max_states: usize,
) -> MealyMachine {
    let states = rng.random_range(1..=max_states);
    let order = g.order();
    let trans: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..states)).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..order).map(|_| rng.random_range(0..order)).collect())
        .collect();
    let mut seen = vec![false; states];
    let mut q = 0;
    while !seen[q] {
        seen[q] = true;
        out[q] = vec![0; order];
        q = trans[q][0];
    }
    MealyMachine::new(Arc::clone(g), 0, trans, out).expect("generated tables are valid")
}

/// Random machine fixed by the amnesiac map.
pub fn random_amnesiac_machine(
    rng: &mut StdRng,
    g: &Arc<FiniteGroup>,
    max_states: usize,
) -> MealyMachine {
    alpha(&random_machine(rng, g, max_states))
}

/// Exhaustive equivalence oracle: compares the two machines on every input
/// sequence of length up to `max_len`. Independent of the bisimulation
/// path.
pub fn exhaustive_equivalent(a: &MealyMachine, b: &MealyMachine, max_len: usize) -> bool {
    let order = a.group().order();
    let mut input = Vec::new();
    // Depth-first over all sequences of length max_len; prefixes are
    // covered because outputs are produced position by position.
    fn walk(
        a: &MealyMachine,
        b: &MealyMachine,
        order: usize,
        input: &mut Vec<usize>,
        remaining: usize,
    ) -> bool {
        if a.evaluate(input).unwrap() != b.evaluate(input).unwrap() {
            return false;
        }
        if remaining == 0 {
            return true;
        }
        for g in 0..order {
            input.push(g);
            if !walk(a, b, order, input, remaining - 1) {
                return false;
            }
            input.pop();
        }
        true
    }
    walk(a, b, order, &mut input, max_len)
}

/// Semantic delaying oracle: output at position k must not depend on input
/// position k. Checked by comparing outputs under every pair of inputs
/// that agree on a common prefix; prefixes up to the state count reach
/// every reachable state.
pub fn semantic_delaying(m: &MealyMachine) -> bool {
    let order = m.group().order();
    let mut prefix = Vec::new();
    fn walk(m: &MealyMachine, order: usize, prefix: &mut Vec<usize>, remaining: usize) -> bool {
        let k = prefix.len();
        let mut expected = None;
        for g in 0..order {
            prefix.push(g);
            let y = m.evaluate(prefix).unwrap()[k];
            prefix.pop();
            match expected {
                None => expected = Some(y),
                Some(e) if e != y => return false,
                _ => {}
            }
        }
        if remaining == 0 {
            return true;
        }
        for g in 0..order {
            prefix.push(g);
            if !walk(m, order, prefix, remaining - 1) {
                return false;
            }
            prefix.pop();
        }
        true
    }
    walk(m, order, &mut prefix, m.state_count())
}

/// The symmetric group on three points, identity at index 0.
pub fn s3() -> Arc<FiniteGroup> {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [0, 2, 1],
        [2, 1, 0],
        [1, 0, 2],
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let pq = compose(p, q);
                    perms.iter().position(|r| *r == pq).unwrap()
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(rows, "S3").unwrap()
}
