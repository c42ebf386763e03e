//! Exhaustive realization of tiny restricted nearrings and a definitional
//! brute-force radical computation.
//!
//! A prefix-preserving zero-symmetric map restricted to `G^n` is a
//! triangular tuple `(f_1, ..., f_n)` with `f_i : G^i -> G` and
//! `f_i(0,...,0) = 0`; all such tuples form the restricted nearring
//! `PP_n(G)` under pointwise addition and composition. At desk scale the
//! whole nearring can be enumerated, its left ideals listed by closure
//! search, and the Jacobson 2-radical computed straight from its
//! definition as the intersection of the annihilators of the type-2
//! quotients. Since the nearring has an identity, every monogenic
//! `N`-group is isomorphic to `N/(0:γ)` for the left ideal `(0:γ)`, so
//! quotients by left ideals exhaust the type-2 `N`-groups up to
//! isomorphism and the intersection below is the radical itself.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{property_x_solve, FiniteGroup};
use crate::mealy::{MachineError, MealyMachine};
use crate::radical::radical_identity_check_with;

/// Hard cap on the number of nearring elements [`enumerate_pp_n`] will
/// materialize.
pub const MAX_NEARRING_ELEMENTS: u128 = 5000;
/// Hard cap for the ideal machinery ([`enumerate_left_ideals`],
/// [`j2_bruteforce`]); masks are `u128` bit sets.
pub const MAX_IDEAL_NEARRING: usize = 100;
/// Cap on directly enumerated kernel / delaying element lists.
pub const MAX_SUBSET_ENUMERATION: u128 = 2000;

/// Upper bound on the restriction arity `n`.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("arity n must be between 1 and {MAX_ARITY}")]
    BadArity,
    #[error("{what} would have {count} elements, over the guard {max}")]
    SizeGuard {
        what: &'static str,
        count: u128,
        max: u128,
    },
    #[error("machine is not zero symmetric")]
    NotZeroSymmetric,
    #[error("maps belong to different nearrings")]
    Mismatch,
    #[error("enumerated nearring failed validation: {law}")]
    NotANearring { law: &'static str },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// An element of the restricted nearring `PP_n(G)`: component tables
/// `f_1, ..., f_n` with `f_i : G^i -> G`, stored row-major with the first
/// argument most significant. Zero symmetry (`f_i(0,...,0) = 0`) is a
/// construction invariant.
#[derive(Debug, Clone)]
pub struct TriangularMap {
    group: Arc<FiniteGroup>,
    n: usize,
    components: Vec<Vec<usize>>,
}

impl PartialEq for TriangularMap {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_table(&other.group) && self.components == other.components
    }
}
impl Eq for TriangularMap {}

impl std::hash::Hash for TriangularMap {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.order().hash(state);
        self.components.hash(state);
    }
}

impl TriangularMap {
    pub fn new(group: Arc<FiniteGroup>, components: Vec<Vec<usize>>) -> Result<Self, OracleError> {
        let n = components.len();
        if n == 0 || n > MAX_ARITY {
            return Err(OracleError::BadArity);
        }
        let order = group.order();
        let mut size = 1usize;
        for table in &components {
            size = size.checked_mul(order).ok_or(OracleError::BadArity)?;
            if table.len() != size || table.iter().any(|&v| v >= order) || table[0] != 0 {
                return Err(OracleError::NotZeroSymmetric);
            }
        }
        Ok(TriangularMap {
            group,
            n,
            components,
        })
    }

    pub fn zero(group: &Arc<FiniteGroup>, n: usize) -> Self {
        assert!((1..=MAX_ARITY).contains(&n), "arity out of range");
        let order = group.order();
        let components = (1..=n).map(|i| vec![0; order.pow(i as u32)]).collect();
        TriangularMap {
            group: Arc::clone(group),
            n,
            components,
        }
    }

    /// `f_i(x_1, ..., x_i) = x_i`.
    pub fn one(group: &Arc<FiniteGroup>, n: usize) -> Self {
        assert!((1..=MAX_ARITY).contains(&n), "arity out of range");
        let order = group.order();
        let components = (1..=n)
            .map(|i| (0..order.pow(i as u32)).map(|idx| idx % order).collect())
            .collect();
        TriangularMap {
            group: Arc::clone(group),
            n,
            components,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Packs `(x_1, ..., x_i)` into a table index.
    fn pack(&self, args: &[usize]) -> usize {
        let order = self.group.order();
        args.iter().fold(0, |acc, &x| acc * order + x)
    }

    /// Applies the map to a tuple of length at most `n`, producing one
    /// output per position.
    pub fn apply(&self, args: &[usize]) -> Vec<usize> {
        (1..=args.len())
            .map(|i| self.components[i - 1][self.pack(&args[..i])])
            .collect()
    }

    pub fn add(&self, other: &TriangularMap) -> TriangularMap {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| self.group.add(x, y))
                    .collect()
            })
            .collect();
        TriangularMap {
            group: Arc::clone(&self.group),
            n: self.n,
            components,
        }
    }

    pub fn negate(&self) -> TriangularMap {
        let components = self
            .components
            .iter()
            .map(|a| a.iter().map(|&x| self.group.neg(x)).collect())
            .collect();
        TriangularMap {
            group: Arc::clone(&self.group),
            n: self.n,
            components,
        }
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &TriangularMap) -> TriangularMap {
        let order = self.group.order();
        let mut components = Vec::with_capacity(self.n);
        let mut args = vec![0usize; self.n];
        for i in 1..=self.n {
            let mut table = Vec::with_capacity(order.pow(i as u32));
            for idx in 0..order.pow(i as u32) {
                let mut rest = idx;
                for pos in (0..i).rev() {
                    args[pos] = rest % order;
                    rest /= order;
                }
                let mid = other.apply(&args[..i]);
                table.push(self.components[i - 1][self.pack(&mid)]);
            }
            components.push(table);
        }
        TriangularMap {
            group: Arc::clone(&self.group),
            n: self.n,
            components,
        }
    }

    /// True iff every component ignores its last argument (and so `f_1`
    /// is identically zero).
    pub fn is_delaying(&self) -> bool {
        let order = self.group.order();
        self.components.iter().all(|table| {
            table
                .chunks(order)
                .all(|chunk| chunk.iter().all(|&v| v == chunk[0]))
        })
    }

    /// True iff `f_i(0, ..., 0, t) = 0` for every `i` and `t`: the
    /// restricted form of membership in the kernel of the amnesiac map.
    pub fn is_in_ker_alpha(&self) -> bool {
        let order = self.group.order();
        // (0, ..., 0, t) packs to index t.
        self.components
            .iter()
            .all(|table| table[..order].iter().all(|&v| v == 0))
    }
}

/// Counts the elements of `PP_n(G)` without enumerating them (saturating:
/// anything astronomically large comes back as `u128::MAX`).
pub fn pp_n_count(g: &FiniteGroup, n: usize) -> u128 {
    let order = g.order() as u128;
    let mut exp = 0u128;
    let mut power = 1u128;
    // Past 128 terms the exponent has saturated for any order > 1, and
    // for order 1 every term is zero.
    for _ in 1..=n.min(128) {
        power = power.saturating_mul(order);
        exp = exp.saturating_add(power - 1);
    }
    checked_power(order, exp)
}

/// Counts the delaying elements of `PP_n(G)`.
pub fn delaying_count(g: &FiniteGroup, n: usize) -> u128 {
    let order = g.order() as u128;
    let mut exp = 0u128;
    let mut power = 1u128; // order^(i-1)
    for _ in 1..=n.min(128) {
        exp = exp.saturating_add(power - 1);
        power = power.saturating_mul(order);
    }
    checked_power(order, exp)
}

/// Counts the kernel elements of `PP_n(G)`.
pub fn ker_alpha_count(g: &FiniteGroup, n: usize) -> u128 {
    let order = g.order() as u128;
    let mut exp = 0u128;
    let mut power = 1u128;
    for _ in 1..=n.min(128) {
        power = power.saturating_mul(order);
        exp = exp.saturating_add(power - order);
    }
    checked_power(order, exp)
}

fn checked_power(base: u128, exp: u128) -> u128 {
    if base <= 1 {
        return base;
    }
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX {
            return u128::MAX;
        }
    }
    acc
}

/// The fully enumerated restricted nearring `PP_n(G)`.
#[derive(Debug)]
pub struct FiniteNearring {
    group: Arc<FiniteGroup>,
    n: usize,
    elements: Vec<TriangularMap>,
    index: HashMap<Vec<Vec<usize>>, usize>,
    zero: usize,
    one: usize,
}

impl FiniteNearring {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[TriangularMap] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn identity_index(&self) -> usize {
        self.one
    }

    pub fn lookup(&self, map: &TriangularMap) -> Option<usize> {
        self.index.get(map.components()).copied()
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.lookup(&self.elements[a].add(&self.elements[b]))
            .expect("closed under addition")
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.lookup(&self.elements[a].negate())
            .expect("closed under negation")
    }

    pub fn compose_idx(&self, a: usize, b: usize) -> usize {
        self.lookup(&self.elements[a].compose(&self.elements[b]))
            .expect("closed under composition")
    }
}

/// Enumerates every zero-symmetric triangular map whose component free
/// entries satisfy `keep`, in lexicographic order of the flattened tables.
/// `free` marks which table entries may vary (the all-zero input of each
/// component is always pinned to 0).
fn enumerate_maps(
    g: &Arc<FiniteGroup>,
    n: usize,
    free: impl Fn(usize, usize) -> bool,
) -> Vec<TriangularMap> {
    let order = g.order();
    // Component table sizes and the list of free positions.
    let sizes: Vec<usize> = (1..=n).map(|i| order.pow(i as u32)).collect();
    let mut free_slots: Vec<(usize, usize)> = Vec::new();
    for (ci, &size) in sizes.iter().enumerate() {
        for idx in 1..size {
            if free(ci, idx) {
                free_slots.push((ci, idx));
            }
        }
    }
    let mut components: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    let mut out = Vec::new();
    loop {
        out.push(TriangularMap {
            group: Arc::clone(g),
            n,
            components: components.clone(),
        });
        // Odometer over the free slots, last slot fastest.
        let mut pos = free_slots.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            let (ci, idx) = free_slots[pos];
            components[ci][idx] += 1;
            if components[ci][idx] < order {
                break;
            }
            components[ci][idx] = 0;
        }
    }
}

/// Enumerates all of `PP_n(G)`: every triangular map with zero-symmetric
/// components. Includes the zero and identity elements; closure under the
/// nearring operations and right distributivity are validated on
/// construction (exhaustively for small nearrings, on a deterministic
/// sample above that).
pub fn enumerate_pp_n(g: &Arc<FiniteGroup>, n: usize) -> Result<FiniteNearring, OracleError> {
    if n == 0 || n > MAX_ARITY {
        return Err(OracleError::BadArity);
    }
    let count = pp_n_count(g, n);
    if count > MAX_NEARRING_ELEMENTS {
        return Err(OracleError::SizeGuard {
            what: "PP_n(G)",
            count,
            max: MAX_NEARRING_ELEMENTS,
        });
    }
    let elements = enumerate_maps(g, n, |_, _| true);
    let index: HashMap<Vec<Vec<usize>>, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.components().to_vec(), i))
        .collect();
    let zero = index[&TriangularMap::zero(g, n).components().to_vec()];
    let one = index[&TriangularMap::one(g, n).components().to_vec()];
    let nr = FiniteNearring {
        group: Arc::clone(g),
        n,
        elements,
        index,
        zero,
        one,
    };
    validate_nearring(&nr)?;
    Ok(nr)
}

/// Closure and right-distributivity checks for a freshly enumerated
/// nearring. Exhaustive up to 128 elements / 16 elements respectively,
/// and on a fixed pseudorandom sample beyond that.
fn validate_nearring(nr: &FiniteNearring) -> Result<(), OracleError> {
    let len = nr.len();
    let pairs: Vec<(usize, usize)> = if len <= 128 {
        (0..len)
            .flat_map(|a| (0..len).map(move |b| (a, b)))
            .collect()
    } else {
        (0..2000)
            .map(|t| ((t * 7919) % len, (t * 104_729 + 3) % len))
            .collect()
    };
    for &(a, b) in &pairs {
        let sum = nr.elements[a].add(&nr.elements[b]);
        let prod = nr.elements[a].compose(&nr.elements[b]);
        if nr.lookup(&sum).is_none() || nr.lookup(&prod).is_none() {
            return Err(OracleError::NotANearring {
                law: "closure under addition and composition",
            });
        }
    }
    for a in 0..len.min(128) {
        if nr.lookup(&nr.elements[a].negate()).is_none() {
            return Err(OracleError::NotANearring {
                law: "closure under negation",
            });
        }
    }
    let triples: Vec<(usize, usize, usize)> = if len <= 16 {
        (0..len)
            .flat_map(|a| (0..len).flat_map(move |b| (0..len).map(move |c| (a, b, c))))
            .collect()
    } else {
        (0..2000)
            .map(|t| {
                (
                    (t * 7919) % len,
                    (t * 104_729 + 3) % len,
                    (t * 15_485_863 + 7) % len,
                )
            })
            .collect()
    };
    for &(a, b, c) in &triples {
        let lhs = nr.elements[a].add(&nr.elements[b]).compose(&nr.elements[c]);
        let rhs = nr.elements[a]
            .compose(&nr.elements[c])
            .add(&nr.elements[b].compose(&nr.elements[c]));
        if lhs != rhs {
            return Err(OracleError::NotANearring {
                law: "right distributivity",
            });
        }
    }
    Ok(())
}

/// Enumerates the kernel elements of `PP_n(G)` directly (without the full
/// nearring): components with `f_i(0,...,0,t) = 0` for all `t`.
pub fn enumerate_ker_alpha_maps(
    g: &Arc<FiniteGroup>,
    n: usize,
) -> Result<Vec<TriangularMap>, OracleError> {
    if n == 0 || n > MAX_ARITY {
        return Err(OracleError::BadArity);
    }
    let count = ker_alpha_count(g.as_ref(), n);
    if count > MAX_SUBSET_ENUMERATION {
        return Err(OracleError::SizeGuard {
            what: "ker alpha in PP_n(G)",
            count,
            max: MAX_SUBSET_ENUMERATION,
        });
    }
    let order = g.order();
    Ok(enumerate_maps(g, n, |_, idx| idx >= order))
}

/// Enumerates the delaying elements of `PP_n(G)` directly: components
/// constant in their last argument.
pub fn enumerate_delaying_maps(
    g: &Arc<FiniteGroup>,
    n: usize,
) -> Result<Vec<TriangularMap>, OracleError> {
    if n == 0 || n > MAX_ARITY {
        return Err(OracleError::BadArity);
    }
    let count = delaying_count(g.as_ref(), n);
    if count > MAX_SUBSET_ENUMERATION {
        return Err(OracleError::SizeGuard {
            what: "delaying maps in PP_n(G)",
            count,
            max: MAX_SUBSET_ENUMERATION,
        });
    }
    let order = g.order();
    // Vary only the first entry of each constant chunk, then flood it.
    let generators = enumerate_maps(g, n, |_, idx| idx % order == 0);
    Ok(generators
        .into_iter()
        .map(|m| {
            let components = m
                .components
                .iter()
                .map(|table| {
                    table
                        .chunks(order)
                        .flat_map(|chunk| std::iter::repeat_n(chunk[0], order))
                        .collect()
                })
                .collect();
            TriangularMap {
                group: Arc::clone(&m.group),
                n: m.n,
                components,
            }
        })
        .collect())
}

/// Tabulates the restriction of a zero-symmetric machine to `G^n`.
pub fn restrict_machine(m: &MealyMachine, n: usize) -> Result<TriangularMap, OracleError> {
    if n == 0 || n > MAX_ARITY {
        return Err(OracleError::BadArity);
    }
    if !m.is_zero_symmetric() {
        return Err(OracleError::NotZeroSymmetric);
    }
    let g = m.group();
    let order = g.order();
    let table_cells: u128 = (1..=n)
        .map(|i| (order as u128).saturating_pow(i as u32))
        .sum();
    if table_cells > 1_000_000 {
        return Err(OracleError::SizeGuard {
            what: "restriction tables",
            count: table_cells,
            max: 1_000_000,
        });
    }
    let mut components = Vec::with_capacity(n);
    let mut args = vec![0usize; n];
    for i in 1..=n {
        let mut table = Vec::with_capacity(order.pow(i as u32));
        for idx in 0..order.pow(i as u32) {
            let mut rest = idx;
            for pos in (0..i).rev() {
                args[pos] = rest % order;
                rest /= order;
            }
            let out = m.evaluate(&args[..i])?;
            table.push(out[i - 1]);
        }
        components.push(table);
    }
    Ok(TriangularMap {
        group: Arc::clone(g),
        n,
        components,
    })
}

/// Realizes a triangular map as a machine whose states are the input
/// histories of length `< n`, with a zero-output sink afterwards.
/// `restrict_machine(triangular_to_machine(t), n)` recovers `t`.
pub fn triangular_to_machine(t: &TriangularMap) -> MealyMachine {
    let g = t.group();
    let order = g.order();
    let n = t.arity();
    // Level j holds order^j history states; the sink comes last.
    let mut level_offset = vec![0usize; n];
    for j in 1..n {
        level_offset[j] = level_offset[j - 1] + order.pow((j - 1) as u32);
    }
    let sink = level_offset[n - 1] + order.pow((n - 1) as u32);
    let mut trans_rows = Vec::with_capacity(sink + 1);
    let mut out_rows = Vec::with_capacity(sink + 1);
    for j in 0..n {
        for h in 0..order.pow(j as u32) {
            let out: Vec<usize> = (0..order).map(|x| t.components[j][h * order + x]).collect();
            let trans: Vec<usize> = (0..order)
                .map(|x| {
                    if j + 1 < n {
                        level_offset[j + 1] + h * order + x
                    } else {
                        sink
                    }
                })
                .collect();
            trans_rows.push(trans);
            out_rows.push(out);
        }
    }
    trans_rows.push(vec![sink; order]);
    out_rows.push(vec![0; order]);
    MealyMachine::new(Arc::clone(g), 0, trans_rows, out_rows).expect("tables are well formed")
}

/// A subset of a finite nearring recorded by sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeftIdealSet {
    pub members: Vec<usize>,
}

impl LeftIdealSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    /// Re-checks all three left-ideal conditions from scratch: additive
    /// subgroup, normality in `(N, +)`, and `n(m + l) - nm` landing back in
    /// the set.
    pub fn verify(&self, nr: &FiniteNearring) -> bool {
        let in_set = |i: usize| self.contains(i);
        if !in_set(nr.zero_index()) {
            return false;
        }
        for &a in &self.members {
            if !in_set(nr.neg_idx(a)) {
                return false;
            }
            for &b in &self.members {
                if !in_set(nr.add_idx(a, b)) {
                    return false;
                }
            }
        }
        for x in 0..nr.len() {
            for &l in &self.members {
                let conj = nr.add_idx(nr.add_idx(x, l), nr.neg_idx(x));
                if !in_set(conj) {
                    return false;
                }
            }
        }
        for n_el in 0..nr.len() {
            for m_el in 0..nr.len() {
                let nm = nr.compose_idx(n_el, m_el);
                for &l in &self.members {
                    let shifted = nr.compose_idx(n_el, nr.add_idx(m_el, l));
                    if !in_set(nr.add_idx(shifted, nr.neg_idx(nm))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff the set is also closed under multiplication from the
    /// right, making it a two-sided ideal.
    pub fn is_right_closed(&self, nr: &FiniteNearring) -> bool {
        self.members
            .iter()
            .all(|&l| (0..nr.len()).all(|x| self.contains(nr.compose_idx(l, x))))
    }
}

/// The kernel elements of an enumerated nearring, as a left ideal set.
pub fn ker_alpha_subset(nr: &FiniteNearring) -> LeftIdealSet {
    let members = (0..nr.len())
        .filter(|&i| nr.elements()[i].is_in_ker_alpha())
        .collect();
    LeftIdealSet { members }
}

/// The delaying elements of an enumerated nearring (sorted indices). This
/// is an `N`-subgroup, not necessarily a left ideal.
pub fn delaying_subset(nr: &FiniteNearring) -> Vec<usize> {
    (0..nr.len())
        .filter(|&i| nr.elements()[i].is_delaying())
        .collect()
}

/// Precomputed index-level operation tables for the ideal machinery.
struct OpTables {
    len: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    comp: Vec<usize>,
}

impl OpTables {
    fn build(nr: &FiniteNearring) -> OpTables {
        let len = nr.len();
        let mut add = vec![0; len * len];
        let mut comp = vec![0; len * len];
        let neg = (0..len).map(|a| nr.neg_idx(a)).collect();
        for a in 0..len {
            for b in 0..len {
                add[a * len + b] = nr.add_idx(a, b);
                comp[a * len + b] = nr.compose_idx(a, b);
            }
        }
        OpTables {
            len,
            add,
            neg,
            comp,
        }
    }

    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.len + b]
    }

    #[inline]
    fn comp(&self, a: usize, b: usize) -> usize {
        self.comp[a * self.len + b]
    }
}

/// Closes a bit mask under addition and negation.
fn close_subgroup(ops: &OpTables, seed: u128) -> u128 {
    let mut mask = seed | 1; // 0 is element index 0 by enumeration order
    loop {
        let mut grown = mask;
        let members: Vec<usize> = (0..ops.len).filter(|&i| mask >> i & 1 == 1).collect();
        for &a in &members {
            grown |= 1u128 << ops.neg[a];
            for &b in &members {
                grown |= 1u128 << ops.add(a, b);
            }
        }
        if grown == mask {
            return mask;
        }
        mask = grown;
    }
}

/// All additive subgroups of the nearring, as bit masks, via closure
/// search: starting from `{0}`, repeatedly extend each known subgroup by
/// one extra generator and close, until no new subgroup appears.
fn all_subgroups(ops: &OpTables) -> Vec<u128> {
    let mut found: BTreeSet<u128> = BTreeSet::new();
    found.insert(close_subgroup(ops, 1));
    let mut frontier: Vec<u128> = found.iter().copied().collect();
    while let Some(mask) = frontier.pop() {
        for x in 0..ops.len {
            if mask >> x & 1 == 1 {
                continue;
            }
            let bigger = close_subgroup(ops, mask | 1u128 << x);
            if found.insert(bigger) {
                frontier.push(bigger);
            }
        }
    }
    found.into_iter().collect()
}

fn mask_members(ops: &OpTables, mask: u128) -> Vec<usize> {
    (0..ops.len).filter(|&i| mask >> i & 1 == 1).collect()
}

fn guard_ideal_size(nr: &FiniteNearring) -> Result<(), OracleError> {
    if nr.len() > MAX_IDEAL_NEARRING {
        return Err(OracleError::SizeGuard {
            what: "left-ideal enumeration",
            count: nr.len() as u128,
            max: MAX_IDEAL_NEARRING as u128,
        });
    }
    Ok(())
}

/// Enumerates every left ideal of the nearring: additive subgroups, normal
/// in `(N, +)`, with `n(m + l) - nm` back in the set for all `n`, `m`,
/// `l`. Always contains `{0}` and `N`.
pub fn enumerate_left_ideals(nr: &FiniteNearring) -> Result<Vec<LeftIdealSet>, OracleError> {
    guard_ideal_size(nr)?;
    let ops = OpTables::build(nr);
    let mut ideals = Vec::new();
    'subgroup: for mask in all_subgroups(&ops) {
        let members = mask_members(&ops, mask);
        // Normality.
        for x in 0..ops.len {
            for &l in &members {
                let conj = ops.add(ops.add(x, l), ops.neg[x]);
                if mask >> conj & 1 == 0 {
                    continue 'subgroup;
                }
            }
        }
        // Left-ideal condition.
        for n_el in 0..ops.len {
            for m_el in 0..ops.len {
                let nm_neg = ops.neg[ops.comp(n_el, m_el)];
                for &l in &members {
                    let shifted = ops.comp(n_el, ops.add(m_el, l));
                    if mask >> ops.add(shifted, nm_neg) & 1 == 0 {
                        continue 'subgroup;
                    }
                }
            }
        }
        ideals.push(LeftIdealSet { members });
    }
    Ok(ideals)
}

/// Computes the Jacobson 2-radical of the nearring from its definition.
///
/// For each left ideal `L`, forms the quotient `N/L` with the induced
/// action `n · (m + L) = nm + L`, keeps the quotients that are `N`-groups
/// of type 2 (monogenic with no nontrivial `N`-subgroups), and intersects
/// their annihilators. If no type-2 quotient exists the radical is `N`
/// itself.
pub fn j2_bruteforce(nr: &FiniteNearring) -> Result<LeftIdealSet, OracleError> {
    guard_ideal_size(nr)?;
    let ops = OpTables::build(nr);
    let ideals = enumerate_left_ideals(nr)?;
    let full: u128 = if nr.len() == 128 {
        u128::MAX
    } else {
        (1u128 << nr.len()) - 1
    };
    let mut radical = full;
    for ideal in &ideals {
        if let Some(ann) = type2_annihilator(&ops, ideal) {
            radical &= ann;
        }
    }
    Ok(LeftIdealSet {
        members: mask_members(&ops, radical),
    })
}

/// If `N/L` is an `N`-group of type 2, returns the annihilator mask.
fn type2_annihilator(ops: &OpTables, ideal: &LeftIdealSet) -> Option<u128> {
    let len = ops.len;
    // Cosets of L: coset_of[x] identifies the coset of element x.
    let mut coset_of = vec![usize::MAX; len];
    let mut reps = Vec::new();
    for x in 0..len {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &l in &ideal.members {
            coset_of[ops.add(x, l)] = id;
        }
    }
    let q = reps.len();
    if q < 2 {
        return None; // the zero N-group is not of type 2
    }
    // Induced action and quotient addition, both well defined because L is
    // a normal left ideal.
    let act = |n_el: usize, coset: usize| coset_of[ops.comp(n_el, reps[coset])];
    let qadd: Vec<usize> = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .map(|(a, b)| coset_of[ops.add(reps[a], reps[b])])
        .collect();
    let qneg: Vec<usize> = (0..q).map(|a| coset_of[ops.neg[reps[a]]]).collect();

    // Monogenic: some coset generates everything under the action.
    let monogenic = (0..q).any(|gamma| {
        let mut hit = vec![false; q];
        for n_el in 0..len {
            hit[act(n_el, gamma)] = true;
        }
        hit.iter().all(|&h| h)
    });
    if !monogenic {
        return None;
    }

    // N-subgroups of the quotient: subgroups T of (Γ, +) with N·T ⊆ T.
    // Type 2 forbids anything strictly between {0} and Γ.
    let qops = OpTables {
        len: q,
        add: qadd,
        neg: qneg,
        comp: vec![0; q * q], // unused by close_subgroup
    };
    for mask in all_subgroups(&qops) {
        let size = mask.count_ones() as usize;
        if size == 1 || size == q {
            continue;
        }
        let members = mask_members(&qops, mask);
        let stable = members
            .iter()
            .all(|&t| (0..len).all(|n_el| mask >> act(n_el, t) & 1 == 1));
        if stable {
            return None; // nontrivial N-subgroup
        }
    }

    // Annihilator: everything that sends every coset to the zero coset.
    let zero_coset = coset_of[0];
    let mut ann = 0u128;
    for n_el in 0..len {
        if (0..q).all(|gamma| act(n_el, gamma) == zero_coset) {
            ann |= 1u128 << n_el;
        }
    }
    Some(ann)
}

/// One verdict line of a [`SandwichReport`].
fn verdict(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "holds",
        Some(false) => "FAILS",
        None => "not computed",
    }
}

/// Everything the oracle can say about `PP_n(G)` at one size: subset
/// sizes, the radical when computable, the containment verdicts, and the
/// generation-identity check when the group admits a translation-equation
/// witness.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub group: String,
    pub order: usize,
    pub n: usize,
    pub pp_size: u128,
    pub enumerated: bool,
    pub delaying_size: u128,
    pub ker_alpha_size: u128,
    pub j2_size: Option<usize>,
    pub j2_members: Option<Vec<usize>>,
    pub delaying_in_j2: Option<bool>,
    pub j2_in_ker_alpha: Option<bool>,
    pub delaying_in_ker_alpha: Option<bool>,
    pub has_property_x: bool,
    pub radical_identity_checked: usize,
    pub radical_identity_all_hold: Option<bool>,
    pub partial: bool,
    pub notes: Vec<String>,
}

impl fmt::Display for SandwichReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "restricted nearring PP_{}({})", self.n, self.group)?;
        writeln!(
            f,
            "  |PP_n|      = {}{}",
            self.pp_size,
            if self.enumerated {
                ""
            } else {
                " (counted, not enumerated)"
            }
        )?;
        writeln!(f, "  |D_n|       = {}", self.delaying_size)?;
        writeln!(f, "  |ker alpha| = {}", self.ker_alpha_size)?;
        match self.j2_size {
            Some(size) => writeln!(f, "  |J2|        = {size}")?,
            None => writeln!(f, "  |J2|        = not computed")?,
        }
        writeln!(f, "  D <= J2         : {}", verdict(self.delaying_in_j2))?;
        writeln!(f, "  J2 <= ker alpha : {}", verdict(self.j2_in_ker_alpha))?;
        writeln!(
            f,
            "  D <= ker alpha  : {}",
            verdict(self.delaying_in_ker_alpha)
        )?;
        writeln!(
            f,
            "  property X      : {}",
            if self.has_property_x { "yes" } else { "no" }
        )?;
        if self.radical_identity_checked > 0 {
            writeln!(
                f,
                "  generation identity f(d+c) - fd = d : {} on {} kernel elements",
                verdict(self.radical_identity_all_hold),
                self.radical_identity_checked
            )?;
        }
        if self.partial {
            writeln!(f, "  PARTIAL REPORT")?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

/// Builds the full sandwich report for `PP_n(G)`. Size guards never fail
/// the report; sections beyond a guard are marked not computed and the
/// report is flagged partial.
pub fn sandwich_report(g: &Arc<FiniteGroup>, n: usize) -> Result<SandwichReport, OracleError> {
    if n == 0 || n > MAX_ARITY {
        return Err(OracleError::BadArity);
    }
    let pp_size = pp_n_count(g.as_ref(), n);
    let delaying_size = delaying_count(g.as_ref(), n);
    let ker_size = ker_alpha_count(g.as_ref(), n);
    let witness = property_x_solve(g);
    let mut report = SandwichReport {
        group: g.label().to_string(),
        order: g.order(),
        n,
        pp_size,
        enumerated: false,
        delaying_size,
        ker_alpha_size: ker_size,
        j2_size: None,
        j2_members: None,
        delaying_in_j2: None,
        j2_in_ker_alpha: None,
        delaying_in_ker_alpha: None,
        has_property_x: witness.is_some(),
        radical_identity_checked: 0,
        radical_identity_all_hold: None,
        partial: false,
        notes: Vec::new(),
    };

    if pp_size <= MAX_NEARRING_ELEMENTS {
        let nr = enumerate_pp_n(g, n)?;
        report.enumerated = true;
        let ker = ker_alpha_subset(&nr);
        let del = delaying_subset(&nr);
        report.delaying_in_ker_alpha = Some(del.iter().all(|&i| ker.contains(i)));
        if nr.len() <= MAX_IDEAL_NEARRING {
            let j2 = j2_bruteforce(&nr)?;
            report.delaying_in_j2 = Some(del.iter().all(|&i| j2.contains(i)));
            report.j2_in_ker_alpha = Some(j2.members.iter().all(|&i| ker.contains(i)));
            report.j2_size = Some(j2.len());
            report.j2_members = Some(j2.members);
        } else {
            report.partial = true;
            report.notes.push(format!(
                "J2 not computed: |N| = {} over the ideal-machinery guard {}",
                nr.len(),
                MAX_IDEAL_NEARRING
            ));
        }
    } else {
        report.partial = true;
        report.notes.push(format!(
            "nearring not enumerated: {} elements over the guard {}",
            pp_size, MAX_NEARRING_ELEMENTS
        ));
        if delaying_size <= MAX_SUBSET_ENUMERATION && ker_size <= MAX_SUBSET_ENUMERATION {
            let ker: std::collections::HashSet<Vec<Vec<usize>>> = enumerate_ker_alpha_maps(g, n)?
                .into_iter()
                .map(|m| m.components().to_vec())
                .collect();
            let contained = enumerate_delaying_maps(g, n)?
                .iter()
                .all(|d| ker.contains(d.components()));
            report.delaying_in_ker_alpha = Some(contained);
        }
    }

    if let Some(witness) = witness {
        if ker_size <= MAX_SUBSET_ENUMERATION {
            let mut all_hold = true;
            let maps = enumerate_ker_alpha_maps(g, n)?;
            for map in &maps {
                let machine = triangular_to_machine(map);
                match radical_identity_check_with(&witness, &machine) {
                    Ok(true) => {}
                    _ => {
                        all_hold = false;
                        break;
                    }
                }
            }
            report.radical_identity_checked = maps.len();
            report.radical_identity_all_hold = Some(all_hold);
        } else {
            report.partial = true;
            report.notes.push(format!(
                "generation identity not checked: |ker alpha| = {} over the guard {}",
                ker_size, MAX_SUBSET_ENUMERATION
            ));
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::equivalent;
    use crate::radical::kernel_generator_c;

    fn z2() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(2).unwrap()
    }

    fn z3() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(3).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_pp_n(&z2(), 2).unwrap().len(), 16);
        assert_eq!(enumerate_pp_n(&z2(), 1).unwrap().len(), 2);
        assert_eq!(enumerate_pp_n(&z3(), 1).unwrap().len(), 9);
        assert_eq!(pp_n_count(&z3(), 2), 59049);
        assert!(matches!(
            enumerate_pp_n(&z3(), 2),
            Err(OracleError::SizeGuard { .. })
        ));
    }

    #[test]
    fn zero_and_identity_are_found() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        let zero = &nr.elements()[nr.zero_index()];
        assert!(zero.components().iter().all(|t| t.iter().all(|&v| v == 0)));
        let one = &nr.elements()[nr.identity_index()];
        assert_eq!(one.apply(&[1, 0]), vec![1, 0]);
        assert_eq!(one.apply(&[0, 1]), vec![0, 1]);
    }

    #[test]
    fn restriction_of_identity_and_zero() {
        let g = z3();
        let id = restrict_machine(&MealyMachine::identity(&g), 2).unwrap();
        assert_eq!(id, TriangularMap::one(&g, 2));
        let zero = restrict_machine(&MealyMachine::zero(&g), 2).unwrap();
        assert_eq!(zero, TriangularMap::zero(&g, 2));
    }

    #[test]
    fn restriction_of_the_lock_machine() {
        let g = z2();
        let c = kernel_generator_c(&g, 1).unwrap();
        let t = restrict_machine(&c, 2).unwrap();
        // f1 = 0; f2(x1, x2) = 1 exactly when x1 != 0.
        assert_eq!(t.components()[0], vec![0, 0]);
        assert_eq!(t.components()[1], vec![0, 0, 1, 1]);
    }

    #[test]
    fn restriction_requires_zero_symmetry() {
        let g = z2();
        let one = MealyMachine::from_function(&crate::group::FunctionTable::constant(&g, 1));
        assert!(matches!(
            restrict_machine(&one, 2),
            Err(OracleError::NotZeroSymmetric)
        ));
    }

    #[test]
    fn lift_round_trips_through_restriction() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        for t in nr.elements() {
            let m = triangular_to_machine(t);
            assert_eq!(&restrict_machine(&m, 2).unwrap(), t);
        }
    }

    #[test]
    fn lift_of_zero_and_identity() {
        let g = z2();
        let zm = triangular_to_machine(&TriangularMap::zero(&g, 2));
        assert!(equivalent(&zm, &MealyMachine::zero(&g)).unwrap());
        let om = triangular_to_machine(&TriangularMap::one(&g, 2));
        // Identity on the first 2 positions, zero afterwards.
        assert_eq!(om.evaluate(&[1, 1, 1]).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn kernel_subset_of_pp2_z2() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        let ker = ker_alpha_subset(&nr);
        assert_eq!(ker.len(), 4);
        assert!(ker.verify(&nr));
        assert_eq!(ker_alpha_count(&z3(), 2), 729);
    }

    #[test]
    fn kernel_subset_at_arity_one_is_zero_alone() {
        let nr = enumerate_pp_n(&z3(), 1).unwrap();
        let ker = ker_alpha_subset(&nr);
        assert_eq!(ker.members, vec![nr.zero_index()]);
    }

    #[test]
    fn delaying_subset_of_pp2_z2() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        let del = delaying_subset(&nr);
        assert_eq!(del.len(), 2);
        let ker = ker_alpha_subset(&nr);
        assert!(del.iter().all(|&i| ker.contains(i)));
        for &i in &del {
            let m = triangular_to_machine(&nr.elements()[i]);
            assert!(m.is_delaying());
        }
    }

    #[test]
    fn delaying_subset_at_arity_one() {
        let nr = enumerate_pp_n(&z3(), 1).unwrap();
        assert_eq!(delaying_subset(&nr), vec![nr.zero_index()]);
    }

    #[test]
    fn direct_subset_enumerations_match_filters() {
        let g = z2();
        let nr = enumerate_pp_n(&g, 2).unwrap();
        let ker_direct: BTreeSet<Vec<Vec<usize>>> = enumerate_ker_alpha_maps(&g, 2)
            .unwrap()
            .into_iter()
            .map(|m| m.components().to_vec())
            .collect();
        let ker_filtered: BTreeSet<Vec<Vec<usize>>> = ker_alpha_subset(&nr)
            .members
            .iter()
            .map(|&i| nr.elements()[i].components().to_vec())
            .collect();
        assert_eq!(ker_direct, ker_filtered);

        let del_direct: BTreeSet<Vec<Vec<usize>>> = enumerate_delaying_maps(&g, 2)
            .unwrap()
            .into_iter()
            .map(|m| m.components().to_vec())
            .collect();
        let del_filtered: BTreeSet<Vec<Vec<usize>>> = delaying_subset(&nr)
            .iter()
            .map(|&i| nr.elements()[i].components().to_vec())
            .collect();
        assert_eq!(del_direct, del_filtered);
    }

    #[test]
    fn left_ideals_of_pp2_z2_contain_the_named_sets() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        let ideals = enumerate_left_ideals(&nr).unwrap();
        let zero_only = LeftIdealSet {
            members: vec![nr.zero_index()],
        };
        let everything = LeftIdealSet {
            members: (0..nr.len()).collect(),
        };
        assert!(ideals.contains(&zero_only));
        assert!(ideals.contains(&everything));
        let ker = ker_alpha_subset(&nr);
        assert!(ideals.contains(&ker));
        let del = LeftIdealSet {
            members: delaying_subset(&nr),
        };
        assert!(ideals.contains(&del));
        for ideal in &ideals {
            assert!(ideal.verify(&nr));
        }
    }

    #[test]
    fn left_ideals_of_m0_z3() {
        let nr = enumerate_pp_n(&z3(), 1).unwrap();
        let ideals = enumerate_left_ideals(&nr).unwrap();
        assert!(ideals.iter().any(|i| i.members == vec![nr.zero_index()]));
        assert!(ideals.iter().any(|i| i.len() == nr.len()));
    }

    #[test]
    fn j2_of_m0_is_trivial() {
        for g in [z2(), z3()] {
            let nr = enumerate_pp_n(&g, 1).unwrap();
            let j2 = j2_bruteforce(&nr).unwrap();
            assert_eq!(j2.members, vec![nr.zero_index()]);
        }
    }

    #[test]
    fn j2_of_larger_function_nearrings_is_trivial() {
        // G is a type-2 module over its own zero-preserving maps, with
        // zero annihilator, for any G.
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let nr = enumerate_pp_n(&z4, 1).unwrap();
        assert_eq!(nr.len(), 64);
        let j2 = j2_bruteforce(&nr).unwrap();
        assert_eq!(j2.members, vec![nr.zero_index()]);

        let klein = FiniteGroup::product(&[z2(), z2()]).unwrap();
        let nr = enumerate_pp_n(&klein, 1).unwrap();
        assert_eq!(nr.len(), 64);
        let j2 = j2_bruteforce(&nr).unwrap();
        assert_eq!(j2.members, vec![nr.zero_index()]);
    }

    #[test]
    fn sandwich_report_partial_for_z2_n3() {
        let report = sandwich_report(&z2(), 3).unwrap();
        assert_eq!(report.pp_size, 2048);
        assert!(report.enumerated);
        assert_eq!(report.delaying_size, 16);
        assert_eq!(report.ker_alpha_size, 256);
        assert_eq!(report.j2_size, None);
        assert!(report.partial);
        assert_eq!(report.delaying_in_ker_alpha, Some(true));
    }

    #[test]
    fn j2_of_pp2_z2_sits_in_the_sandwich() {
        let nr = enumerate_pp_n(&z2(), 2).unwrap();
        let j2 = j2_bruteforce(&nr).unwrap();
        let ker = ker_alpha_subset(&nr);
        let del = delaying_subset(&nr);
        assert!(del.iter().all(|&i| j2.contains(i)));
        assert!(j2.members.iter().all(|&i| ker.contains(i)));
        assert!(j2.len() >= 2 && j2.len() <= 4);
        // The computed radical is a two-sided ideal.
        assert!(j2.verify(&nr));
        assert!(j2.is_right_closed(&nr));
    }

    #[test]
    fn sandwich_report_full_for_z2_n2() {
        let report = sandwich_report(&z2(), 2).unwrap();
        assert!(report.enumerated);
        assert_eq!(report.delaying_size, 2);
        assert_eq!(report.ker_alpha_size, 4);
        assert!(report.j2_size.is_some());
        assert_eq!(report.delaying_in_j2, Some(true));
        assert_eq!(report.j2_in_ker_alpha, Some(true));
        assert!(!report.partial);
        assert!(!report.has_property_x);
    }

    #[test]
    fn sandwich_report_partial_for_z3_n2() {
        let report = sandwich_report(&z3(), 2).unwrap();
        assert!(!report.enumerated);
        assert!(report.partial);
        assert_eq!(report.ker_alpha_size, 729);
        assert_eq!(report.j2_size, None);
        assert!(report.has_property_x);
        assert_eq!(report.radical_identity_checked, 729);
        assert_eq!(report.radical_identity_all_hold, Some(true));
        assert_eq!(report.delaying_in_ker_alpha, Some(true));
    }

    #[test]
    fn sandwich_report_degenerate_at_arity_one() {
        let report = sandwich_report(&z2(), 1).unwrap();
        assert_eq!(report.pp_size, 2);
        assert_eq!(report.delaying_size, 1);
        assert_eq!(report.ker_alpha_size, 1);
        assert_eq!(report.j2_size, Some(1));
        assert!(!report.partial);
    }
}
