use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default cap on the index-set size for exhaustive enumeration.
pub const DEFAULT_MAX_INDICES: usize = 16;

/// `Υ_{N,N′} = {1,…,N} ∪ {N+2,…,N+N′+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    pub n_left: usize,
    pub n_right: usize,
}

impl IndexSet {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        IndexSet { n_left, n_right }
    }

    /// The symmetric set `Υ_{n,n}`.
    pub fn symmetric(n: usize) -> Self {
        IndexSet::new(n, n)
    }

    pub fn members(&self) -> Vec<usize> {
        (1..=self.n_left)
            .chain(self.n_left + 2..=self.n_left + self.n_right + 1)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=self.n_left).contains(&i) || (self.n_left + 2..=self.n_left + self.n_right + 1).contains(&i)
    }

    /// `{i, i+1}` is a gate when both indices belong to the set.
    pub fn is_gate(&self, block: &[usize]) -> bool {
        block.len() == 2 && block[1] == block[0] + 1 && self.contains(block[0]) && self.contains(block[1])
    }
}

/// Partition of an index set into even blocks, kept in normal form
/// (each block sorted, blocks ordered by their smallest element).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b.is_empty() || b.len() % 2 != 0 {
                return Err(invalid(format!("block {b:?} has odd or zero size")));
            }
        }
        blocks.sort();
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("blocks are not disjoint"));
        }
        Ok(Partition { blocks })
    }

    /// Checks that the blocks cover exactly `set`.
    pub fn validate_for(&self, set: &IndexSet) -> Result<()> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != set.members() {
            return Err(invalid(format!("{self} does not cover {:?}", set.members())));
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    pub fn has_gate(&self, set: &IndexSet) -> bool {
        self.blocks.iter().any(|b| set.is_gate(b))
    }

    /// Block index containing `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }

    /// Whether `other` splits every block of `self` into smaller even blocks.
    pub fn is_refined_by(&self, other: &Partition) -> bool {
        other
            .blocks
            .iter()
            .all(|ob| self.blocks.iter().any(|sb| ob.iter().all(|i| sb.contains(i))))
            && {
                let a: usize = self.blocks.iter().map(|b| b.len()).sum();
                let b: usize = other.blocks.iter().map(|b| b.len()).sum();
                a == b
            }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, i) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Parses the display form, e.g. `{{1,3},{2,4}}`; whitespace is ignored.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| invalid(format!("partition must be wrapped in braces: {s}")))?;
        let mut blocks = Vec::new();
        for part in inner.split('}').filter(|p| !p.is_empty()) {
            let body = part
                .trim_start_matches(',')
                .strip_prefix('{')
                .ok_or_else(|| invalid(format!("malformed block in {s}")))?;
            let block = body
                .split(',')
                .map(|i| {
                    i.parse::<usize>()
                        .map_err(|_| invalid(format!("bad index {i:?} in {s}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        Partition::new(blocks)
    }
}

/// Exhaustive list of even partitions of `set`, in normal-form order.
pub fn enumerate_partitions(set: &IndexSet, pairings_only: bool, gate_free: bool) -> Result<Vec<Partition>> {
    enumerate_partitions_with_limit(set, pairings_only, gate_free, DEFAULT_MAX_INDICES)
}

pub fn enumerate_partitions_with_limit(
    set: &IndexSet,
    pairings_only: bool,
    gate_free: bool,
    max_indices: usize,
) -> Result<Vec<Partition>> {
    let members = set.members();
    if members.len() > max_indices {
        return Err(Error::TooLarge {
            what: "index set",
            size: members.len(),
            limit: max_indices,
        });
    }
    if !members.len().is_multiple_of(2) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    recurse(&members, set, pairings_only, gate_free, &mut current, &mut out);
    let mut parts: Vec<Partition> = out
        .into_iter()
        .map(|b| Partition::new(b).expect("enumeration yields valid blocks"))
        .collect();
    parts.sort();
    Ok(parts)
}

fn recurse(
    remaining: &[usize],
    set: &IndexSet,
    pairings_only: bool,
    gate_free: bool,
    current: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let Some((&first, rest)) = remaining.split_first() else {
        out.push(current.clone());
        return;
    };
    // Choose an odd number of companions for `first` from `rest`.
    let k = rest.len();
    let max_mask: u64 = 1 << k;
    for mask in 1..max_mask {
        let size = mask.count_ones() as usize;
        if size.is_multiple_of(2) || (pairings_only && size != 1) {
            continue;
        }
        let mut block = vec![first];
        let mut left = Vec::with_capacity(k - size);
        for (j, &i) in rest.iter().enumerate() {
            if mask >> j & 1 == 1 {
                block.push(i);
            } else {
                left.push(i);
            }
        }
        if gate_free && set.is_gate(&block) {
            continue;
        }
        current.push(block);
        recurse(&left, set, pairings_only, gate_free, current, out);
        current.pop();
    }
}

/// `(2n − 1)!!`.
pub fn double_factorial_odd(n: usize) -> u128 {
    (1..=n as u128).map(|k| 2 * k - 1).product()
}
