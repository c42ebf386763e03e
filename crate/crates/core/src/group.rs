//! Finite groups as explicit operation tables.
//!
//! Elements are indices `0..order`, with `0` always the identity. The
//! addition table is stored densely; inverses are tabulated once at
//! construction. Groups are deliberately small (desk scale), so an
//! exhaustive associativity scan at construction time is affordable.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on group order. The dense tables and the exhaustive scans
/// are cubic in the order, so anything past this is a mistake, not a use
/// case.
pub const MAX_GROUP_ORDER: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be at least 1")]
    EmptyGroup,
    #[error("group order {order} exceeds the supported maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("addition table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry add({x},{y}) = {value} is not a valid element index")]
    EntryOutOfRange { x: usize, y: usize, value: usize },
    #[error("element 0 is not a two-sided identity: add({x},{y}) = {value}")]
    MissingIdentity { x: usize, y: usize, value: usize },
    #[error("element {x} has no two-sided inverse")]
    MissingInverse { x: usize },
    #[error("addition is not associative at ({x},{y},{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("element index {value} is out of range for a group of order {order}")]
    InvalidElement { value: usize, order: usize },
    #[error("group of order {order} is too large for brute-force search (max {max})")]
    TooLargeForBrute { order: usize, max: usize },
}

/// A group presentation: how a [`FiniteGroup`] is described in files and on
/// the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Table { add: Vec<Vec<usize>> },
}

impl GroupSpec {
    /// Builds and validates the group this spec describes.
    pub fn build(&self) -> Result<Arc<FiniteGroup>, GroupError> {
        match self {
            GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupSpec::Product { factors } => {
                let mut built = Vec::with_capacity(factors.len());
                for f in factors {
                    built.push(f.build()?);
                }
                FiniteGroup::product(&built)
            }
            GroupSpec::Table { add } => FiniteGroup::from_table(add.clone(), "table"),
        }
    }

    /// Parses the text shorthand used on the command line:
    /// `cyclic:N` or `product:cyclic:N+cyclic:M+...`.
    pub fn parse_shorthand(text: &str) -> Result<GroupSpec, GroupSpecParseError> {
        let text = text.trim();
        if let Some(n) = text.strip_prefix("cyclic:") {
            let n: usize = n
                .parse()
                .map_err(|_| GroupSpecParseError::BadCyclicOrder(n.to_string()))?;
            return Ok(GroupSpec::Cyclic { n });
        }
        if let Some(rest) = text.strip_prefix("product:") {
            let mut factors = Vec::new();
            for part in rest.split('+') {
                let part = part.trim();
                match GroupSpec::parse_shorthand(part)? {
                    spec @ GroupSpec::Cyclic { .. } => factors.push(spec),
                    _ => return Err(GroupSpecParseError::BadProductFactor(part.to_string())),
                }
            }
            if factors.is_empty() {
                return Err(GroupSpecParseError::EmptyProduct);
            }
            return Ok(GroupSpec::Product { factors });
        }
        Err(GroupSpecParseError::UnknownForm(text.to_string()))
    }

    /// Human-readable label, e.g. `Z6` or `Z2xZ2`.
    pub fn label(&self) -> String {
        match self {
            GroupSpec::Cyclic { n } => format!("Z{n}"),
            GroupSpec::Product { factors } => factors
                .iter()
                .map(GroupSpec::label)
                .collect::<Vec<_>>()
                .join("x"),
            GroupSpec::Table { add } => format!("table({})", add.len()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupSpecParseError {
    #[error("bad cyclic order {0:?} (expected cyclic:N with N a positive integer)")]
    BadCyclicOrder(String),
    #[error("bad product factor {0:?} (factors must be cyclic:N)")]
    BadProductFactor(String),
    #[error("product needs at least one factor")]
    EmptyProduct,
    #[error("unrecognized group spec {0:?} (expected cyclic:N or product:cyclic:N+...)")]
    UnknownForm(String),
}

/// A finite group given by its full operation tables.
///
/// Element `0` is the identity. `add` is flattened row-major:
/// `add[x * order + y]` is `x + y`.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    label: String,
    spec: GroupSpec,
}

impl FiniteGroup {
    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Result<Arc<Self>, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge {
                order: n,
                max: MAX_GROUP_ORDER,
            });
        }
        let mut add = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = (x + y) % n;
            }
        }
        let neg = (0..n).map(|x| (n - x) % n).collect();
        Ok(Arc::new(FiniteGroup {
            order: n,
            add,
            neg,
            label: format!("Z{n}"),
            spec: GroupSpec::Cyclic { n },
        }))
    }

    /// Direct product of two groups. Element `(x, y)` has index
    /// `x * |B| + y`, so `(0, 0)` is again index 0.
    pub fn direct_product(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>, GroupError> {
        let order = a
            .order
            .checked_mul(b.order)
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or(GroupError::TooLarge {
                order: usize::MAX,
                max: MAX_GROUP_ORDER,
            })?;
        let mut add = vec![0; order * order];
        for xa in 0..a.order {
            for xb in 0..b.order {
                let x = xa * b.order + xb;
                for ya in 0..a.order {
                    for yb in 0..b.order {
                        let y = ya * b.order + yb;
                        add[x * order + y] = a.add(xa, ya) * b.order + b.add(xb, yb);
                    }
                }
            }
        }
        let neg = (0..order)
            .map(|x| a.neg(x / b.order) * b.order + b.neg(x % b.order))
            .collect();
        let mut factors = Vec::new();
        for g in [a, b] {
            match &g.spec {
                GroupSpec::Product { factors: inner } => factors.extend(inner.iter().cloned()),
                other => factors.push(other.clone()),
            }
        }
        let spec = GroupSpec::Product { factors };
        let label = spec.label();
        Ok(Arc::new(FiniteGroup {
            order,
            add,
            neg,
            label,
            spec,
        }))
    }

    /// Direct product of a nonempty list of groups.
    pub fn product(factors: &[Arc<Self>]) -> Result<Arc<Self>, GroupError> {
        let (first, rest) = factors.split_first().ok_or(GroupError::EmptyGroup)?;
        let mut acc = Arc::clone(first);
        for g in rest {
            acc = FiniteGroup::direct_product(&acc, g)?;
        }
        Ok(acc)
    }

    /// Builds a group from an explicit addition table and validates every
    /// axiom exhaustively. Fails rather than returning an invalid group.
    pub fn from_table(add_rows: Vec<Vec<usize>>, label: &str) -> Result<Arc<Self>, GroupError> {
        let order = add_rows.len();
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge {
                order,
                max: MAX_GROUP_ORDER,
            });
        }
        let mut add = Vec::with_capacity(order * order);
        for (row, r) in add_rows.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    order,
                });
            }
            add.extend_from_slice(r);
        }
        for x in 0..order {
            for y in 0..order {
                let v = add[x * order + y];
                if v >= order {
                    return Err(GroupError::EntryOutOfRange { x, y, value: v });
                }
            }
        }
        // Identity before inverses before associativity, so each failure
        // mode reports its own error.
        for x in 0..order {
            if add[x] != x {
                return Err(GroupError::MissingIdentity {
                    x: 0,
                    y: x,
                    value: add[x],
                });
            }
            if add[x * order] != x {
                return Err(GroupError::MissingIdentity {
                    x,
                    y: 0,
                    value: add[x * order],
                });
            }
        }
        let mut neg = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if add[x * order + y] == 0 && add[y * order + x] == 0 {
                    neg[x] = y;
                    break;
                }
            }
            if neg[x] == usize::MAX {
                return Err(GroupError::MissingInverse { x });
            }
        }
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    let xy_z = add[add[x * order + y] * order + z];
                    let x_yz = add[x * order + add[y * order + z]];
                    if xy_z != x_yz {
                        return Err(GroupError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        let spec = GroupSpec::Table { add: add_rows };
        Ok(Arc::new(FiniteGroup {
            order,
            add,
            neg,
            label: label.to_string(),
            spec,
        }))
    }

    /// Re-checks every structural invariant. Groups built by the
    /// constructors already hold them; this is the exhaustive scan used by
    /// tests and by `from_table`.
    pub fn validate(&self) -> Result<(), GroupError> {
        let rows: Vec<Vec<usize>> = (0..self.order)
            .map(|x| self.add[x * self.order..(x + 1) * self.order].to_vec())
            .collect();
        FiniteGroup::from_table(rows, &self.label).map(|_| ())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// `x + y`.
    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.order + y]
    }

    /// `-x`.
    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    /// `x - y` = `x + (-y)`.
    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    pub fn check_element(&self, x: usize) -> Result<(), GroupError> {
        if x < self.order {
            Ok(())
        } else {
            Err(GroupError::InvalidElement {
                value: x,
                order: self.order,
            })
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.add(x, y) == self.add(y, x)))
    }

    /// Two groups are interchangeable when their operation tables agree;
    /// labels and presentations do not matter.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.add == other.add
    }

    /// Least `m >= 1` with `m·x = 0`.
    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut m = 1;
        while acc != 0 {
            acc = self.add(acc, x);
            m += 1;
        }
        m
    }

    /// The cyclic subgroup generated by `k`, in orbit order `0, k, 2k, ...`.
    pub fn cyclic_subgroup(&self, k: usize) -> Vec<usize> {
        let mut elems = vec![0];
        let mut acc = k;
        while acc != 0 {
            elems.push(acc);
            acc = self.add(acc, k);
        }
        elems
    }

    /// Partition of the elements into left cosets `c + <k>`. Each coset is
    /// listed in orbit order starting from its least element; cosets are
    /// ordered by their least element, so the coset of 0 comes first.
    pub fn cosets_of_cyclic(&self, k: usize) -> Vec<Vec<usize>> {
        let subgroup = self.cyclic_subgroup(k);
        let mut seen = vec![false; self.order];
        let mut cosets = Vec::new();
        for c in 0..self.order {
            if seen[c] {
                continue;
            }
            let coset: Vec<usize> = subgroup.iter().map(|&h| self.add(c, h)).collect();
            for &e in &coset {
                seen[e] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.label, self.order)
    }
}

/// A total map `G -> G` as a value table: `values[x] = f(x)`.
#[derive(Debug, Clone)]
pub struct FunctionTable {
    group: Arc<FiniteGroup>,
    values: Vec<usize>,
}

impl PartialEq for FunctionTable {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_table(&other.group) && self.values == other.values
    }
}
impl Eq for FunctionTable {}

impl FunctionTable {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<usize>) -> Result<Self, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::NotSquare {
                row: 0,
                len: values.len(),
                order: group.order(),
            });
        }
        for &v in &values {
            group.check_element(v)?;
        }
        Ok(FunctionTable { group, values })
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        FunctionTable {
            group: Arc::clone(group),
            values: (0..group.order()).collect(),
        }
    }

    pub fn constant(group: &Arc<FiniteGroup>, value: usize) -> Self {
        FunctionTable {
            group: Arc::clone(group),
            values: vec![value; group.order()],
        }
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        FunctionTable::constant(group, 0)
    }

    pub fn negation(group: &Arc<FiniteGroup>) -> Self {
        FunctionTable {
            group: Arc::clone(group),
            values: (0..group.order()).map(|x| group.neg(x)).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn is_zero_preserving(&self) -> bool {
        self.values[0] == 0
    }

    /// Pointwise sum `x -> f(x) + g(x)`.
    pub fn add(&self, other: &FunctionTable) -> FunctionTable {
        FunctionTable {
            group: Arc::clone(&self.group),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| self.group.add(a, b))
                .collect(),
        }
    }

    /// Pointwise negation `x -> -f(x)`.
    pub fn negate(&self) -> FunctionTable {
        FunctionTable {
            group: Arc::clone(&self.group),
            values: self.values.iter().map(|&a| self.group.neg(a)).collect(),
        }
    }

    /// Composition `x -> self(other(x))`.
    pub fn compose(&self, other: &FunctionTable) -> FunctionTable {
        FunctionTable {
            group: Arc::clone(&self.group),
            values: other.values.iter().map(|&x| self.values[x]).collect(),
        }
    }
}

/// All zero-preserving function tables on `g`, in lexicographic order of
/// their value vectors. There are `order^(order-1)` of them.
pub fn enumerate_zero_preserving(g: &Arc<FiniteGroup>) -> Vec<FunctionTable> {
    let order = g.order();
    let mut out = Vec::new();
    let mut values = vec![0usize; order];
    loop {
        out.push(FunctionTable {
            group: Arc::clone(g),
            values: values.clone(),
        });
        // Odometer over positions 1..order; position 0 stays 0.
        let mut pos = order;
        loop {
            if pos == 1 {
                return out;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < order {
                break;
            }
            values[pos] = 0;
        }
    }
}

/// A solution of the translation equation: `f(x + k) - f(x) = x` for all x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyXWitness {
    pub k: usize,
    pub f: FunctionTable,
}

impl PropertyXWitness {
    /// Exhaustively checks the defining equation.
    pub fn verify(&self) -> bool {
        let g = self.f.group();
        self.k != 0
            && self.f.is_zero_preserving()
            && (0..g.order()).all(|x| g.sub(self.f.apply(g.add(x, self.k)), self.f.apply(x)) == x)
    }
}

/// Searches for a translation-equation witness `(k, f)` with
/// `f(x+k) - f(x) = x` for all `x`, normalizing `f(0) = 0`.
///
/// For each nonzero `k`, the equation fixes `f` on each left coset of `<k>`
/// up to one free value: rewriting it as `f(x+k) = x + f(x)` and following
/// the orbit `c, c+k, c+2k, ...` accumulates
/// `f(c + jk) = (c+(j-1)k) + ... + (c+k) + c + f(c)`.
/// Going once around the orbit (length `m`, the order of `k`) is consistent
/// exactly when the accumulated sum `(c+(m-1)k) + ... + (c+k) + c` is 0, and
/// the starting point within the orbit does not matter. So `k` admits a
/// witness iff that sum vanishes on every coset; the free values `f(c)` are
/// set to 0, which in particular normalizes `f(0) = 0`.
///
/// Returns `None` iff no `(k, f)` exists for any `k`. Every returned witness
/// is re-verified exhaustively before being handed out.
pub fn property_x_solve(g: &Arc<FiniteGroup>) -> Option<PropertyXWitness> {
    let order = g.order();
    for k in 1..order {
        let cosets = g.cosets_of_cyclic(k);
        let mut values = vec![0usize; order];
        let mut consistent = true;
        'coset: for coset in &cosets {
            let c = coset[0];
            let mut x = c;
            let mut acc = 0usize; // f(x) relative to the free choice f(c) = 0
            for _ in 1..coset.len() {
                acc = g.add(x, acc);
                x = g.add(x, k);
                values[x] = acc;
            }
            // Wrap-around: one more step must return f(c) itself.
            if g.add(x, acc) != 0 {
                consistent = false;
                break 'coset;
            }
        }
        if !consistent {
            continue;
        }
        let f = FunctionTable {
            group: Arc::clone(g),
            values,
        };
        let witness = PropertyXWitness { k, f };
        if witness.verify() {
            return Some(witness);
        }
    }
    None
}

/// Maximum group order accepted by [`property_x_brute`].
pub const MAX_BRUTE_ORDER: usize = 6;

/// Independent exhaustive search for a translation-equation witness: tries
/// every nonzero `k` against every zero-preserving table `f`.
///
/// Restricting to zero-preserving tables loses nothing: if `(k, f)` is a
/// witness then so is `(k, x -> f(x) - f(0))`.
pub fn property_x_brute(g: &Arc<FiniteGroup>) -> Result<Option<PropertyXWitness>, GroupError> {
    let order = g.order();
    if order > MAX_BRUTE_ORDER {
        return Err(GroupError::TooLargeForBrute {
            order,
            max: MAX_BRUTE_ORDER,
        });
    }
    for k in 1..order {
        for f in enumerate_zero_preserving(g) {
            let witness = PropertyXWitness { k, f };
            if witness.verify() {
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}
