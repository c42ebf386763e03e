//! The amnesiac endomorphism and the machinery around it.
//!
//! The amnesiac map `α` replaces every transition `t(q, g)` by `t(q, 0)`:
//! the machine keeps its clock but forgets its input. `α` is an idempotent
//! nearring endomorphism of the machine nearring, and its kernel (machines
//! that `α` sends to zero) contains every delaying machine. This module
//! provides:
//!
//! - [`alpha`] / [`in_ker_alpha`]: the endomorphism and its kernel test;
//! - [`invert_one_minus`]: for a delaying zero-symmetric `n`, the machine
//!   `m` with `m ∘ (1 - n) = 1`, witnessing quasiregularity of `n`;
//! - [`kernel_generator_c`]: the two-state delaying machine that outputs a
//!   fixed element after the first nonzero input;
//! - [`radical_identity_check`]: the identity `f(d+c) - fd = d`, which
//!   shows that for groups admitting a translation-equation witness the
//!   left ideal generated by the delaying machines is the whole kernel;
//! - [`f_ij_machine`]: machines applying a function table at positions
//!   `i, i+j, i+2j, ...` and outputting zero elsewhere;
//! - [`decompose_amnesiac`] / [`reconstruct_from_decomposition`]: `α`-fixed
//!   machines are exactly the eventually periodic sequences of state output
//!   maps read along the zero-transition orbit.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, FunctionTable, PropertyXWitness};
use crate::mealy::{add, compose, equivalent, subtract, MachineError, MealyMachine};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RadicalError {
    #[error("machine is not delaying (some reachable output map is not constant)")]
    NotDelaying,
    #[error("machine is not zero symmetric")]
    NotZeroSymmetric,
    #[error("function table must be zero preserving")]
    NotZeroPreserving,
    #[error("position index i must be at least 1")]
    ZeroPosition,
    #[error("offset element k must be nonzero")]
    ZeroOffset,
    #[error("group admits no translation-equation witness")]
    NoPropertyX,
    #[error("machine is not in the kernel of the amnesiac map")]
    NotInKerAlpha,
    #[error("machine is not fixed by the amnesiac map")]
    NotAmnesiac,
    #[error("decomposition cycle must be nonempty")]
    EmptyCycle,
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// The amnesiac image of a machine: same states, start and outputs, with
/// every transition replaced by the zero-input transition `t(q, 0)`.
pub fn alpha(m: &MealyMachine) -> MealyMachine {
    let order = m.group().order();
    let trans_rows = (0..m.state_count())
        .map(|q| vec![m.trans(q, 0); order])
        .collect();
    MealyMachine::new(Arc::clone(m.group()), m.start(), trans_rows, m.out_rows())
        .expect("amnesiac image of a valid machine is valid")
}

/// True iff `alpha(m)` is the zero machine, i.e. every state on the
/// zero-transition orbit from the start has an all-zero output row.
pub fn in_ker_alpha(m: &MealyMachine) -> bool {
    equivalent(&alpha(m), &MealyMachine::zero(m.group())).expect("same group by construction")
}

/// The two-state delaying machine over `g` that outputs `k` forever once a
/// nonzero input has been seen: zeros in, zeros out, until the first
/// nonzero input (which itself still outputs 0).
pub fn kernel_generator_c(g: &Arc<FiniteGroup>, k: usize) -> Result<MealyMachine, RadicalError> {
    g.check_element(k).map_err(MachineError::from)?;
    if k == 0 {
        return Err(RadicalError::ZeroOffset);
    }
    let order = g.order();
    let mut wait_trans: Vec<usize> = vec![1; order];
    wait_trans[0] = 0;
    Ok(MealyMachine::new(
        Arc::clone(g),
        0,
        vec![wait_trans, vec![1; order]],
        vec![vec![0; order], vec![k; order]],
    )
    .expect("tables are well formed"))
}

/// Checks the quasiregularity witness condition `m ∘ (1 - n) = 1`.
///
/// This is the sufficient condition only; it does not decide
/// quasiregularity in general.
pub fn quasiregular_witness_check(
    n: &MealyMachine,
    m: &MealyMachine,
) -> Result<bool, RadicalError> {
    let one = MealyMachine::identity(n.group());
    let one_minus_n = subtract(&one, n)?;
    Ok(equivalent(&compose(m, &one_minus_n)?, &one)?)
}

/// For a delaying zero-symmetric machine `n`, builds the inverse of the
/// machine `1 - n`.
///
/// Since `n` is delaying, each state has a constant output `c_q`, so
/// `1 - n` has state output maps `g -> g - c_q`, which are permutations
/// with inverse `y -> y + c_q` (valid in nonabelian groups as well). The
/// returned machine keeps `n`'s state set with output maps `y -> y + c_q`
/// and transitions `t(q, y + c_q)`; composing it with `1 - n` stays on the
/// diagonal of the pair space and copies the input through.
pub fn invert_one_minus(n: &MealyMachine) -> Result<MealyMachine, RadicalError> {
    let n = n.trim();
    let order = n.group().order();
    let group = Arc::clone(n.group());
    if !n.is_delaying() {
        return Err(RadicalError::NotDelaying);
    }
    if !n.is_zero_symmetric() {
        return Err(RadicalError::NotZeroSymmetric);
    }
    let constants: Vec<usize> = (0..n.state_count()).map(|q| n.out(q, 0)).collect();
    let mut trans_rows = Vec::with_capacity(n.state_count());
    let mut out_rows = Vec::with_capacity(n.state_count());
    for (q, &c) in constants.iter().enumerate() {
        let outs: Vec<usize> = (0..order).map(|y| group.add(y, c)).collect();
        let trans: Vec<usize> = outs.iter().map(|&h| n.trans(q, h)).collect();
        out_rows.push(outs);
        trans_rows.push(trans);
    }
    Ok(MealyMachine::new(group, n.start(), trans_rows, out_rows).expect("tables are well formed"))
}

/// Checks the generation identity `f(d + c) - fd = d` for a kernel machine
/// `d`, where `(k, F)` solves the translation equation on `g`, `f` is the
/// one-state machine applying `F`, and `c = kernel_generator_c(g, k)`.
///
/// For every position, `c` contributes either 0 (while the inputs so far
/// were all zero, where `d` also outputs 0) or the offset `k` (where the
/// translation equation turns the difference into `d`'s output). So the
/// identity holds for every `d` in the kernel whenever the group has a
/// witness.
pub fn radical_identity_check(
    g: &Arc<FiniteGroup>,
    d: &MealyMachine,
) -> Result<bool, RadicalError> {
    let witness = crate::group::property_x_solve(g).ok_or(RadicalError::NoPropertyX)?;
    radical_identity_check_with(&witness, d)
}

/// [`radical_identity_check`] with a caller-supplied witness, so bulk
/// checks do not re-solve the equation.
pub fn radical_identity_check_with(
    witness: &PropertyXWitness,
    d: &MealyMachine,
) -> Result<bool, RadicalError> {
    if !in_ker_alpha(d) {
        return Err(RadicalError::NotInKerAlpha);
    }
    let f = MealyMachine::from_function(&witness.f);
    let c = kernel_generator_c(witness.f.group(), witness.k)?;
    let lhs = subtract(&compose(&f, &add(d, &c)?)?, &compose(&f, d)?)?;
    Ok(equivalent(&lhs, d)?)
}

/// The machine applying `f` at positions `i, i+j, i+2j, ...` (for `j > 0`)
/// or at position `i` alone (for `j = 0`), and outputting 0 elsewhere.
///
/// Transitions ignore the input (a pure counter), so the machine is fixed
/// by [`alpha`]. State count is `i + 1` for `j = 0` and `i - 1 + j` for
/// `j > 0`.
pub fn f_ij_machine(f: &FunctionTable, i: usize, j: usize) -> Result<MealyMachine, RadicalError> {
    if i == 0 {
        return Err(RadicalError::ZeroPosition);
    }
    if !f.is_zero_preserving() {
        return Err(RadicalError::NotZeroPreserving);
    }
    let group = Arc::clone(f.group());
    let order = group.order();
    let zero_row = vec![0usize; order];
    let fire_row = f.values().to_vec();
    let mut trans_rows = Vec::new();
    let mut out_rows = Vec::new();
    if j == 0 {
        // States 0..i-1 count up, state i-1 fires, state i is a sink.
        for q in 0..i {
            trans_rows.push(vec![q + 1; order]);
            out_rows.push(if q + 1 == i {
                fire_row.clone()
            } else {
                zero_row.clone()
            });
        }
        trans_rows.push(vec![i; order]);
        out_rows.push(zero_row);
    } else {
        // States 0..i-1 count up to the first firing at position i, then a
        // cycle of length j returns to the firing state.
        let total = i - 1 + j;
        for q in 0..total {
            let next = if q + 1 < total { q + 1 } else { i - 1 };
            trans_rows.push(vec![next; order]);
            out_rows.push(if q + 1 == i {
                fire_row.clone()
            } else {
                zero_row.clone()
            });
        }
    }
    Ok(MealyMachine::new(group, 0, trans_rows, out_rows).expect("tables are well formed"))
}

/// An `α`-fixed machine as its sequence of per-position output maps: the
/// maps along the zero-transition orbit, split at the first repeated state
/// into a transient part and a repeating cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmnesiacDecomposition {
    pub transient: Vec<FunctionTable>,
    pub cycle: Vec<FunctionTable>,
}

/// Splits an `α`-fixed machine into its per-position output maps.
///
/// Follows `τ: q -> t(q, 0)` from the start state until a state repeats;
/// the maps before the repeat entry form the transient, the rest the
/// cycle. No minimality of the split is promised; the contract is that
/// [`reconstruct_from_decomposition`] yields an equivalent machine.
pub fn decompose_amnesiac(m: &MealyMachine) -> Result<AmnesiacDecomposition, RadicalError> {
    let am = alpha(m);
    if !equivalent(&am, m)? {
        return Err(RadicalError::NotAmnesiac);
    }
    let mut orbit = Vec::new();
    let mut position = vec![usize::MAX; am.state_count()];
    let mut q = am.start();
    while position[q] == usize::MAX {
        position[q] = orbit.len();
        orbit.push(q);
        q = am.trans(q, 0);
    }
    let entry = position[q];
    let maps: Vec<FunctionTable> = orbit.iter().map(|&s| am.output_map(s)).collect();
    let cycle = maps[entry..].to_vec();
    let transient = maps[..entry].to_vec();
    Ok(AmnesiacDecomposition { transient, cycle })
}

/// Builds the counter machine applying `transient` maps once and then the
/// `cycle` maps forever. The result ignores its input for transitions, so
/// it is `α`-fixed by construction.
pub fn reconstruct_from_decomposition(
    d: &AmnesiacDecomposition,
) -> Result<MealyMachine, RadicalError> {
    let first = d.cycle.first().ok_or(RadicalError::EmptyCycle)?;
    let group = Arc::clone(first.group());
    let order = group.order();
    let total = d.transient.len() + d.cycle.len();
    let mut trans_rows = Vec::with_capacity(total);
    let mut out_rows = Vec::with_capacity(total);
    for (q, map) in d.transient.iter().chain(d.cycle.iter()).enumerate() {
        let next = if q + 1 < total {
            q + 1
        } else {
            d.transient.len()
        };
        trans_rows.push(vec![next; order]);
        out_rows.push(map.values().to_vec());
    }
    Ok(MealyMachine::new(group, 0, trans_rows, out_rows)?)
}
