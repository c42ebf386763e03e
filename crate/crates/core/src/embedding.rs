//! Embedding the zero-preserving self-maps of one group into machines over
//! another.
//!
//! Given a subgroup `S` of `K^n` together with a surjective homomorphism
//! `beta: S -> G` and a section `alpha: G -> S` (with `beta ∘ alpha = id`
//! and `alpha(0) = 0`), every zero-preserving map `f: G -> G` becomes a
//! machine over `K`: encode `g` as the periodic sequence repeating the
//! tuple `alpha(g)`, run a machine that recognizes leading zero blocks
//! followed by repeats of an `S`-element `s` and answers with the tuple
//! `alpha(f(beta(s)))`, and decode the eventually periodic output back to
//! an element of `G`. The assignment `f -> machine` is injective and
//! respects both addition and composition (each composition adds `n` more
//! positions of delay, tracked by the `depth` argument of
//! [`embedded_apply`]).

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{enumerate_zero_preserving, FiniteGroup, FunctionTable};
use crate::mealy::{add, compose, equivalent, MachineError, MealyMachine};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("block length n must be at least 1")]
    EmptyBlock,
    #[error("block length {n} exceeds the supported maximum {max}")]
    BlockTooLong { n: usize, max: usize },
    #[error("tuple {index} has length {len}, expected {expected}")]
    BadTupleLength {
        index: usize,
        len: usize,
        expected: usize,
    },
    #[error("tuple {index} contains {value}, not an element of K")]
    BadTupleEntry { index: usize, value: usize },
    #[error("tuple {index} is listed twice")]
    DuplicateTuple { index: usize },
    #[error("S is not a subgroup of K^n: {reason}")]
    NotASubgroup { reason: String },
    #[error("beta is not a homomorphism: beta(s{i} + s{j}) != beta(s{i}) + beta(s{j})")]
    NotAHomomorphism { i: usize, j: usize },
    #[error("beta is not surjective: element {element} of G is never hit")]
    NotSurjective { element: usize },
    #[error("alpha is not a section of beta: beta(alpha({element})) != {element}")]
    NotASection { element: usize },
    #[error("section is not normalized: alpha(0) is not the zero tuple")]
    SectionNotNormalized,
    #[error("beta table has {len} entries, expected one per tuple ({expected})")]
    BadBetaLength { len: usize, expected: usize },
    #[error("beta value {value} at tuple {index} is not an element of G")]
    BadBetaEntry { index: usize, value: usize },
    #[error("alpha table has {len} entries, expected one per element of G ({expected})")]
    BadAlphaLength { len: usize, expected: usize },
    #[error("alpha value {value} at element {index} is not a tuple index")]
    BadAlphaEntry { index: usize, value: usize },
    #[error("function table must be zero preserving")]
    NotZeroPreserving,
    #[error("machine is over a different group than the scheme's K")]
    GroupMismatch,
    #[error("element {value} is not in G")]
    ForeignElement { value: usize },
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("output did not cycle within the window for depth {depth}; wrong depth?")]
    CyclingNotReached { depth: usize },
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("|M0(G)| = {count} exceeds the enumeration guard {max}")]
    TooManyMaps { count: u128, max: u128 },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Upper bound on the block length `n` of a scheme.
pub const MAX_BLOCK_LEN: usize = 64;

/// A validated encoding of `G` inside `K^n`.
#[derive(Debug, Clone)]
pub struct EncodingScheme {
    k: Arc<FiniteGroup>,
    n: usize,
    tuples: Vec<Vec<usize>>,
    beta: Vec<usize>,
    alpha: Vec<usize>,
    g: Arc<FiniteGroup>,
    tuple_index: HashMap<Vec<usize>, usize>,
}

impl EncodingScheme {
    /// Validates every scheme invariant exhaustively and returns the
    /// scheme, or the first specific violation found.
    pub fn new(
        k: Arc<FiniteGroup>,
        n: usize,
        tuples: Vec<Vec<usize>>,
        beta: Vec<usize>,
        alpha: Vec<usize>,
        g: Arc<FiniteGroup>,
    ) -> Result<Self, SchemeError> {
        if n == 0 {
            return Err(SchemeError::EmptyBlock);
        }
        if n > MAX_BLOCK_LEN {
            return Err(SchemeError::BlockTooLong {
                n,
                max: MAX_BLOCK_LEN,
            });
        }
        let korder = k.order();
        for (index, t) in tuples.iter().enumerate() {
            if t.len() != n {
                return Err(SchemeError::BadTupleLength {
                    index,
                    len: t.len(),
                    expected: n,
                });
            }
            for &v in t {
                if v >= korder {
                    return Err(SchemeError::BadTupleEntry { index, value: v });
                }
            }
        }
        let mut tuple_index = HashMap::new();
        for (index, t) in tuples.iter().enumerate() {
            if tuple_index.insert(t.clone(), index).is_some() {
                return Err(SchemeError::DuplicateTuple { index });
            }
        }
        // Subgroup of K^n under componentwise addition: identity, closure,
        // inverses, each checked outright.
        let zero = vec![0usize; n];
        if !tuple_index.contains_key(&zero) {
            return Err(SchemeError::NotASubgroup {
                reason: "missing the zero tuple".to_string(),
            });
        }
        let tuple_add = |a: &[usize], b: &[usize]| -> Vec<usize> {
            a.iter().zip(b).map(|(&x, &y)| k.add(x, y)).collect()
        };
        for (i, a) in tuples.iter().enumerate() {
            for (j, b) in tuples.iter().enumerate() {
                if !tuple_index.contains_key(&tuple_add(a, b)) {
                    return Err(SchemeError::NotASubgroup {
                        reason: format!("s{i} + s{j} is not in S"),
                    });
                }
            }
            let inv: Vec<usize> = a.iter().map(|&x| k.neg(x)).collect();
            if !tuple_index.contains_key(&inv) {
                return Err(SchemeError::NotASubgroup {
                    reason: format!("-s{i} is not in S"),
                });
            }
        }
        if beta.len() != tuples.len() {
            return Err(SchemeError::BadBetaLength {
                len: beta.len(),
                expected: tuples.len(),
            });
        }
        for (index, &v) in beta.iter().enumerate() {
            if v >= g.order() {
                return Err(SchemeError::BadBetaEntry { index, value: v });
            }
        }
        for (i, a) in tuples.iter().enumerate() {
            for (j, b) in tuples.iter().enumerate() {
                let sum_idx = tuple_index[&tuple_add(a, b)];
                if beta[sum_idx] != g.add(beta[i], beta[j]) {
                    return Err(SchemeError::NotAHomomorphism { i, j });
                }
            }
        }
        for element in 0..g.order() {
            if !beta.contains(&element) {
                return Err(SchemeError::NotSurjective { element });
            }
        }
        if alpha.len() != g.order() {
            return Err(SchemeError::BadAlphaLength {
                len: alpha.len(),
                expected: g.order(),
            });
        }
        for (index, &v) in alpha.iter().enumerate() {
            if v >= tuples.len() {
                return Err(SchemeError::BadAlphaEntry { index, value: v });
            }
        }
        for element in 0..g.order() {
            if beta[alpha[element]] != element {
                return Err(SchemeError::NotASection { element });
            }
        }
        if tuples[alpha[0]] != zero {
            return Err(SchemeError::SectionNotNormalized);
        }
        Ok(EncodingScheme {
            k,
            n,
            tuples,
            beta,
            alpha,
            g,
            tuple_index,
        })
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn alpha_section(&self) -> &[usize] {
        &self.alpha
    }

    fn tuple_of(&self, g_elem: usize) -> &[usize] {
        &self.tuples[self.alpha[g_elem]]
    }

    fn s_index(&self, tuple: &[usize]) -> Option<usize> {
        self.tuple_index.get(tuple).copied()
    }
}

/// The eventually periodic sequence `prefix · period · period · ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicSequence {
    prefix: Vec<usize>,
    period: Vec<usize>,
}

impl PeriodicSequence {
    pub fn new(prefix: Vec<usize>, period: Vec<usize>) -> Result<Self, SchemeError> {
        if period.is_empty() {
            return Err(SchemeError::EmptyPeriod);
        }
        Ok(PeriodicSequence { prefix, period })
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// Symbol at 1-based position `i`.
    fn at(&self, i: usize) -> usize {
        if i <= self.prefix.len() {
            self.prefix[i - 1]
        } else {
            self.period[(i - self.prefix.len() - 1) % self.period.len()]
        }
    }

    /// The first `len` symbols.
    pub fn take(&self, len: usize) -> Vec<usize> {
        (1..=len).map(|i| self.at(i)).collect()
    }
}

/// Encodes a group element as the sequence repeating its section tuple.
pub fn encode(scheme: &EncodingScheme, g_elem: usize) -> Result<PeriodicSequence, SchemeError> {
    if g_elem >= scheme.g.order() {
        return Err(SchemeError::ForeignElement { value: g_elem });
    }
    PeriodicSequence::new(Vec::new(), scheme.tuple_of(g_elem).to_vec())
}

/// Decodes an eventually periodic sequence over `K` back to an element of
/// `G`.
///
/// Finds the least `m` such that the tail from position `mn` on satisfies
/// `x_i = x_{i-n}` (any tail whose period divides `n` counts as cycling),
/// reads the block at positions `mn+1 ..= mn+n`, and applies `beta` if the
/// block lies in `S`. Returns 0 when the sequence never settles into an
/// `n`-periodic tail or the block is outside `S`.
pub fn decode(scheme: &EncodingScheme, y: &PeriodicSequence) -> usize {
    let n = scheme.n;
    let period = &y.period;
    for r in 0..period.len() {
        if period[r] != period[(r + n) % period.len()] {
            return 0;
        }
    }
    // Beyond prefix + n both compared positions sit in the period, where
    // the check above guarantees agreement; only a finite window remains.
    let mut last_fail = 0usize;
    for i in (n + 1)..=(y.prefix.len() + n) {
        if y.at(i) != y.at(i - n) {
            last_fail = i;
        }
    }
    let m = if last_fail == 0 { 0 } else { last_fail / n + 1 };
    let block: Vec<usize> = ((m * n + 1)..=(m * n + n)).map(|i| y.at(i)).collect();
    match scheme.s_index(&block) {
        Some(idx) => scheme.beta[idx],
        None => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum BuildState {
    /// Reading zero blocks or the first copy of an `S`-element; holds the
    /// partial block read so far.
    Prefix(Vec<usize>),
    /// Locked onto tuple `s`, about to read its `i`-th symbol (1-based).
    Repeat(usize, usize),
    /// Input failed the encoding grammar; absorbs and outputs zero.
    Dead,
}

/// Builds the machine over `K` that realizes `f: G -> G` through the
/// scheme's encoding.
///
/// The machine recognizes inputs of the form "zero blocks, then repeats of
/// some `s` in `S`", outputting zeros until the first full copy of `s` has
/// been read and the componentwise image `alpha(f(beta(s)))` afterwards.
/// Inputs that break the grammar fall into an absorbing state that outputs
/// zero. Only reachable states are materialized.
pub fn build_embedding_automaton(
    scheme: &EncodingScheme,
    f: &FunctionTable,
) -> Result<MealyMachine, SchemeError> {
    if !f.group().same_table(&scheme.g) {
        return Err(SchemeError::GroupMismatch);
    }
    if !f.is_zero_preserving() {
        return Err(SchemeError::NotZeroPreserving);
    }
    let n = scheme.n;
    let korder = scheme.k.order();
    // Proper prefixes of S tuples, including the empty one.
    let mut prefixes: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    for t in &scheme.tuples {
        for l in 0..n {
            prefixes.insert(t[..l].to_vec());
        }
    }
    // Image tuple per S-element: alpha(f(beta(s))).
    let image: Vec<&[usize]> = (0..scheme.tuples.len())
        .map(|i| scheme.tuple_of(f.apply(scheme.beta[i])))
        .collect();
    let zero_block = vec![0usize; n];

    let mut index_of: HashMap<BuildState, usize> = HashMap::new();
    let mut states = vec![BuildState::Prefix(Vec::new())];
    index_of.insert(states[0].clone(), 0);
    let mut trans_rows: Vec<Vec<usize>> = Vec::new();
    let mut out_rows: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let state = states[next].clone();
        next += 1;
        let mut trans = Vec::with_capacity(korder);
        let mut out = Vec::with_capacity(korder);
        for sym in 0..korder {
            let (target, y) = match &state {
                BuildState::Prefix(p) => {
                    let mut ext = p.clone();
                    ext.push(sym);
                    let target = if ext.len() == n {
                        if ext == zero_block {
                            BuildState::Prefix(Vec::new())
                        } else if let Some(idx) = scheme.s_index(&ext) {
                            BuildState::Repeat(idx, 1)
                        } else {
                            BuildState::Dead
                        }
                    } else if prefixes.contains(&ext) {
                        BuildState::Prefix(ext)
                    } else {
                        BuildState::Dead
                    };
                    (target, 0)
                }
                BuildState::Repeat(idx, i) => {
                    let expected = scheme.tuples[*idx][i - 1];
                    let target = if sym == expected {
                        BuildState::Repeat(*idx, i % n + 1)
                    } else {
                        BuildState::Dead
                    };
                    (target, image[*idx][i - 1])
                }
                BuildState::Dead => (BuildState::Dead, 0),
            };
            let ti = *index_of.entry(target.clone()).or_insert_with(|| {
                states.push(target);
                states.len() - 1
            });
            trans.push(ti);
            out.push(y);
        }
        trans_rows.push(trans);
        out_rows.push(out);
    }
    Ok(MealyMachine::new(
        Arc::clone(&scheme.k),
        0,
        trans_rows,
        out_rows,
    )?)
}

/// Applies a machine over `K` to an element of `G` through the encoding:
/// decode ∘ machine ∘ encode.
///
/// `depth` is the number of chained built automata inside `a` (each one
/// delays the output by `n` positions). The machine runs on the first
/// `(depth + 2) * n` symbols of the encoding; the final two `n`-blocks of
/// the output must agree (the output has started cycling), and the last
/// block decodes through `beta`, with 0 for blocks outside `S`.
pub fn embedded_apply(
    scheme: &EncodingScheme,
    a: &MealyMachine,
    g_elem: usize,
    depth: usize,
) -> Result<usize, SchemeError> {
    if depth == 0 {
        return Err(SchemeError::BadDepth);
    }
    if !a.group().same_table(&scheme.k) {
        return Err(SchemeError::GroupMismatch);
    }
    let n = scheme.n;
    let window = (depth + 2) * n;
    let input = encode(scheme, g_elem)?.take(window);
    let output = a.evaluate(&input)?;
    if output[window - 2 * n..window - n] != output[window - n..] {
        return Err(SchemeError::CyclingNotReached { depth });
    }
    let block = &output[window - n..];
    Ok(match scheme.s_index(block) {
        Some(idx) => scheme.beta[idx],
        None => 0,
    })
}

/// Outcome of [`verify_embedding`]: counterexamples are index triples into
/// the lexicographic enumeration of the zero-preserving maps of `G`.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub map_count: usize,
    /// `(f index, g, got, expected)` for pointwise failures.
    pub pointwise_failures: Vec<(usize, usize, usize, usize)>,
    pub additive_pairs_checked: usize,
    /// `(f1 index, f2 index, g)` for failed additive identities.
    pub additive_failures: Vec<(usize, usize, usize)>,
    pub multiplicative_pairs_checked: usize,
    /// `(f1 index, f2 index, g)` for failed multiplicative identities.
    pub multiplicative_failures: Vec<(usize, usize, usize)>,
    /// Pairs of distinct maps whose machines turned out equivalent.
    pub injectivity_failures: Vec<(usize, usize)>,
    /// Whether injectivity was established by pairwise machine
    /// comparison (for small enumerations) or follows from pointwise
    /// exactness.
    pub injectivity_checked_pairwise: bool,
}

impl EmbeddingReport {
    pub fn all_verified(&self) -> bool {
        self.pointwise_failures.is_empty()
            && self.additive_failures.is_empty()
            && self.multiplicative_failures.is_empty()
            && self.injectivity_failures.is_empty()
    }
}

impl std::fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "maps checked:            {}", self.map_count)?;
        writeln!(
            f,
            "pointwise failures:      {}",
            self.pointwise_failures.len()
        )?;
        writeln!(
            f,
            "additive pairs:          {} ({} failures)",
            self.additive_pairs_checked,
            self.additive_failures.len()
        )?;
        writeln!(
            f,
            "multiplicative pairs:    {} ({} failures)",
            self.multiplicative_pairs_checked,
            self.multiplicative_failures.len()
        )?;
        writeln!(
            f,
            "injectivity:             {} ({})",
            if self.injectivity_failures.is_empty() {
                "ok"
            } else {
                "FAILED"
            },
            if self.injectivity_checked_pairwise {
                "pairwise machine comparison"
            } else {
                "from pointwise exactness"
            },
        )?;
        write!(
            f,
            "verdict:                 {}",
            if self.all_verified() { "ok" } else { "FAILED" }
        )
    }
}

/// Maximum number of zero-preserving maps [`verify_embedding`] will
/// enumerate.
pub const MAX_EMBEDDING_MAPS: u128 = 10_000;

/// Exhaustively verifies the embedding on a scheme: every zero-preserving
/// map of `G` is reproduced pointwise through encode/build/decode, the
/// additive and multiplicative identities hold on sampled pairs (all pairs
/// when few), and distinct maps yield inequivalent machines.
pub fn verify_embedding(scheme: &EncodingScheme) -> Result<EmbeddingReport, SchemeError> {
    let g = &scheme.g;
    let order = g.order() as u128;
    let count = order.checked_pow(g.order() as u32 - 1).unwrap_or(u128::MAX);
    if count > MAX_EMBEDDING_MAPS {
        return Err(SchemeError::TooManyMaps {
            count,
            max: MAX_EMBEDDING_MAPS,
        });
    }
    let maps = enumerate_zero_preserving(g);
    let machines: Vec<MealyMachine> = maps
        .iter()
        .map(|f| build_embedding_automaton(scheme, f))
        .collect::<Result<_, _>>()?;

    let mut report = EmbeddingReport {
        map_count: maps.len(),
        pointwise_failures: Vec::new(),
        additive_pairs_checked: 0,
        additive_failures: Vec::new(),
        multiplicative_pairs_checked: 0,
        multiplicative_failures: Vec::new(),
        injectivity_failures: Vec::new(),
        injectivity_checked_pairwise: maps.len() <= 100,
    };

    for (fi, (f, machine)) in maps.iter().zip(&machines).enumerate() {
        for x in 0..g.order() {
            let got = embedded_apply(scheme, machine, x, 1)?;
            if got != f.apply(x) {
                report.pointwise_failures.push((fi, x, got, f.apply(x)));
            }
        }
    }

    // All pairs when that stays small, otherwise a fixed pseudorandom
    // sample so the report is deterministic.
    let pair_budget = 10_000usize;
    let total_pairs = maps.len() * maps.len();
    let pairs: Vec<(usize, usize)> = if total_pairs <= pair_budget {
        (0..maps.len())
            .flat_map(|i| (0..maps.len()).map(move |j| (i, j)))
            .collect()
    } else {
        (0..200)
            .map(|t| ((t * 7919) % maps.len(), (t * 104_729 + 1) % maps.len()))
            .collect()
    };
    for &(i, j) in &pairs {
        let sum = add(&machines[i], &machines[j])?;
        report.additive_pairs_checked += 1;
        for x in 0..g.order() {
            let got = embedded_apply(scheme, &sum, x, 1)?;
            let want = g.add(maps[i].apply(x), maps[j].apply(x));
            if got != want {
                report.additive_failures.push((i, j, x));
                break;
            }
        }
        let prod = compose(&machines[i], &machines[j])?;
        report.multiplicative_pairs_checked += 1;
        for x in 0..g.order() {
            let got = embedded_apply(scheme, &prod, x, 2)?;
            let want = maps[i].apply(maps[j].apply(x));
            if got != want {
                report.multiplicative_failures.push((i, j, x));
                break;
            }
        }
    }

    if report.injectivity_checked_pairwise {
        for i in 0..machines.len() {
            for j in (i + 1)..machines.len() {
                if equivalent(&machines[i], &machines[j])? {
                    report.injectivity_failures.push((i, j));
                }
            }
        }
    }
    // For larger enumerations injectivity follows from pointwise
    // exactness: maps differing at g separate their machines on encode(g).

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    /// G = Z2 encoded on the diagonal of Z2^2.
    fn diagonal_scheme() -> EncodingScheme {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        EncodingScheme::new(
            Arc::clone(&z2),
            2,
            vec![vec![0, 0], vec![1, 1]],
            vec![0, 1],
            vec![0, 1],
            z2,
        )
        .unwrap()
    }

    /// G = Z2 x Z2 with S = K^2 and beta the identity.
    fn full_scheme() -> EncodingScheme {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::direct_product(&z2, &z2).unwrap();
        // Tuple (a, b) of K^2 corresponds to element a*2+b of G.
        let tuples: Vec<Vec<usize>> = (0..4).map(|e| vec![e / 2, e % 2]).collect();
        EncodingScheme::new(
            Arc::clone(&z2),
            2,
            tuples,
            (0..4).collect(),
            (0..4).collect(),
            g,
        )
        .unwrap()
    }

    #[test]
    fn diagonal_scheme_validates() {
        diagonal_scheme();
        full_scheme();
    }

    #[test]
    fn non_closed_s_is_rejected() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let err = EncodingScheme::new(
            Arc::clone(&z2),
            2,
            vec![vec![0, 0], vec![1, 0], vec![1, 1]],
            vec![0, 1, 1],
            vec![0, 1],
            Arc::clone(&z2),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::NotASubgroup { .. }));
    }

    #[test]
    fn section_must_hit_back() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        // alpha(1) points at the zero tuple, so beta(alpha(1)) = 0 != 1.
        let err = EncodingScheme::new(
            Arc::clone(&z2),
            2,
            vec![vec![0, 0], vec![1, 1]],
            vec![0, 1],
            vec![0, 0],
            Arc::clone(&z2),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::NotASection { .. }));
    }

    #[test]
    fn beta_must_be_a_surjective_homomorphism() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        // beta(1+1) = beta(2) = 1 but beta(1) + beta(1) = 0.
        let err = EncodingScheme::new(
            Arc::clone(&z4),
            1,
            (0..4).map(|e| vec![e]).collect(),
            vec![0, 1, 1, 1],
            vec![0, 1],
            Arc::clone(&z2),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::NotAHomomorphism { .. }));

        // The constant map is a homomorphism but misses 1.
        let err = EncodingScheme::new(
            Arc::clone(&z2),
            1,
            vec![vec![0], vec![1]],
            vec![0, 0],
            vec![0, 0],
            Arc::clone(&z2),
        )
        .unwrap_err();
        assert_eq!(err, SchemeError::NotSurjective { element: 1 });
    }

    #[test]
    fn section_must_send_zero_to_the_zero_tuple() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let trivial = FiniteGroup::cyclic(1).unwrap();
        // beta(alpha(0)) = 0 holds, but alpha(0) = (1) is not the zero
        // tuple.
        let err = EncodingScheme::new(
            Arc::clone(&z2),
            1,
            vec![vec![0], vec![1]],
            vec![0, 0],
            vec![1],
            trivial,
        )
        .unwrap_err();
        assert_eq!(err, SchemeError::SectionNotNormalized);
    }

    #[test]
    fn oversized_blocks_are_rejected() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let err = EncodingScheme::new(
            Arc::clone(&z2),
            1_000_000,
            vec![],
            vec![],
            vec![0, 0],
            Arc::clone(&z2),
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::BlockTooLong { .. }));
    }

    #[test]
    fn encode_repeats_the_section_tuple() {
        let s = diagonal_scheme();
        let e1 = encode(&s, 1).unwrap();
        assert_eq!(e1.period(), &[1, 1]);
        assert_eq!(e1.take(5), vec![1, 1, 1, 1, 1]);
        let e0 = encode(&s, 0).unwrap();
        assert_eq!(e0.period(), &[0, 0]);

        let full = full_scheme();
        let e = encode(&full, 2).unwrap(); // (1, 0)
        assert_eq!(e.period(), &[1, 0]);
    }

    #[test]
    fn decode_finds_the_cycling_block() {
        let s = diagonal_scheme();
        let y = PeriodicSequence::new(vec![0, 0], vec![1, 1]).unwrap();
        assert_eq!(decode(&s, &y), 1);

        let zero = PeriodicSequence::new(vec![], vec![0]).unwrap();
        assert_eq!(decode(&s, &zero), 0);

        // Cycling block outside S decodes to 0.
        let off = PeriodicSequence::new(vec![], vec![1, 0]).unwrap();
        assert_eq!(decode(&s, &off), 0);

        // Never n-periodic.
        let chaotic = PeriodicSequence::new(vec![], vec![1, 1, 0]).unwrap();
        assert_eq!(decode(&s, &chaotic), 0);
    }

    #[test]
    fn decode_handles_sub_periods_and_misaligned_prefixes() {
        let s = diagonal_scheme();
        // Period 1 divides n = 2: still counted as cycling.
        let constant = PeriodicSequence::new(vec![1, 1], vec![1]).unwrap();
        assert_eq!(decode(&s, &constant), 1);
        // The prefix breaks alignment at position 3 only; the block is
        // read from position 5.
        let shifted = PeriodicSequence::new(vec![0, 1], vec![1, 1]).unwrap();
        assert_eq!(decode(&s, &shifted), 1);
        // Cycling immediately but through a block outside S.
        let alternating = PeriodicSequence::new(vec![], vec![0, 1]).unwrap();
        assert_eq!(decode(&s, &alternating), 0);
    }

    #[test]
    fn built_machine_reproduces_the_map() {
        let s = diagonal_scheme();
        let g = s.g().clone();
        let id = FunctionTable::identity(&g);
        let a = build_embedding_automaton(&s, &id).unwrap();
        assert_eq!(embedded_apply(&s, &a, 1, 1).unwrap(), 1);
        assert_eq!(embedded_apply(&s, &a, 0, 1).unwrap(), 0);

        let zero = FunctionTable::zero(&g);
        let az = build_embedding_automaton(&s, &zero).unwrap();
        assert_eq!(embedded_apply(&s, &az, 1, 1).unwrap(), 0);
        assert_eq!(embedded_apply(&s, &az, 0, 1).unwrap(), 0);
    }

    #[test]
    fn grammar_violations_absorb_to_zero_output() {
        let s = diagonal_scheme();
        let g = s.g().clone();
        let id = FunctionTable::identity(&g);
        let a = build_embedding_automaton(&s, &id).unwrap();
        // (0,1) is neither a zero block nor in S: dead from position 2 on.
        let y = a.evaluate(&[0, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(y, vec![0; 8]);
    }

    #[test]
    fn state_count_stays_within_the_reachable_bound() {
        let s = full_scheme();
        let g = s.g().clone();
        let id = FunctionTable::identity(&g);
        let a = build_embedding_automaton(&s, &id).unwrap();
        // |S| * n + #prefixes + dead state.
        let prefixes = 3; // empty, (0), (1)
        assert!(a.state_count() <= s.tuples().len() * s.n() + prefixes + 1);
    }

    #[test]
    fn wrong_depth_is_reported() {
        let s = diagonal_scheme();
        let g = s.g().clone();
        let id = FunctionTable::identity(&g);
        let a = build_embedding_automaton(&s, &id).unwrap();
        let ab = compose(&a, &a).unwrap();
        assert_eq!(
            embedded_apply(&s, &ab, 1, 1).unwrap_err(),
            SchemeError::CyclingNotReached { depth: 1 }
        );
        assert_eq!(embedded_apply(&s, &ab, 1, 2).unwrap(), 1);
    }

    #[test]
    fn composition_goes_through_the_encoding() {
        let full = full_scheme();
        let g = full.g().clone();
        let maps = enumerate_zero_preserving(&g);
        let f1 = &maps[7];
        let f2 = &maps[41];
        let a1 = build_embedding_automaton(&full, f1).unwrap();
        let a2 = build_embedding_automaton(&full, f2).unwrap();
        let prod = compose(&a1, &a2).unwrap();
        for x in 0..g.order() {
            assert_eq!(
                embedded_apply(&full, &prod, x, 2).unwrap(),
                f1.apply(f2.apply(x))
            );
        }
    }

    #[test]
    fn verify_diagonal_scheme_exhaustively() {
        let s = diagonal_scheme();
        let report = verify_embedding(&s).unwrap();
        assert_eq!(report.map_count, 2);
        assert!(report.all_verified());
        assert!(report.injectivity_checked_pairwise);
    }

    #[test]
    fn verify_full_scheme_exhaustively() {
        let s = full_scheme();
        let report = verify_embedding(&s).unwrap();
        assert_eq!(report.map_count, 64);
        assert!(report.all_verified());
    }

    #[test]
    fn too_large_g_is_guarded() {
        let z7 = FiniteGroup::cyclic(7).unwrap();
        let tuples: Vec<Vec<usize>> = (0..7).map(|e| vec![e]).collect();
        let s = EncodingScheme::new(
            Arc::clone(&z7),
            1,
            tuples,
            (0..7).collect(),
            (0..7).collect(),
            Arc::clone(&z7),
        )
        .unwrap();
        assert!(matches!(
            verify_embedding(&s),
            Err(SchemeError::TooManyMaps { .. })
        ));
    }
}
