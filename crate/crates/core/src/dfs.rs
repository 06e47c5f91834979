//! Decoherence-free subspace analysis.
//!
//! The register basis is partitioned into exact signature classes; each
//! class spans one maximal DFS. The two-bit pair cases and the row
//! symmetries of G they require are exposed separately as diagnostics: the
//! partition gives the complete answer, the case analysis explains it in
//! terms of rows of G.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BasisIndex, InteractionMatrix, Rational, MAX_REGISTER};
use crate::spectrum::{signature, Signature};

/// One signature class: the sorted basis labels spanning a maximal DFS.
#[derive(Clone, Debug, PartialEq)]
pub struct DfsClass {
    signature: Signature,
    members: Vec<u64>,
}

impl DfsClass {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

/// Partition of `{0, .., 2^K - 1}` into signature classes.
#[derive(Clone, Debug, PartialEq)]
pub struct DfsPartition {
    width: usize,
    classes: Vec<DfsClass>,
}

impl DfsPartition {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn classes(&self) -> &[DfsClass] {
        &self.classes
    }

    pub fn largest_dim(&self) -> usize {
        self.classes.iter().map(DfsClass::dim).max().unwrap_or(0)
    }

    pub fn class_index_of(&self, value: u64) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.members.binary_search(&value).is_ok())
    }

    /// Class sizes sum to 2^K.
    pub fn total_size(&self) -> u64 {
        self.classes.iter().map(|c| c.dim() as u64).sum()
    }

    /// Same grouping of basis labels, ignoring class order and signatures.
    pub fn same_classes(&self, other: &DfsPartition) -> bool {
        if self.width != other.width || self.classes.len() != other.classes.len() {
            return false;
        }
        let mut a: Vec<&[u64]> = self.classes.iter().map(|c| c.members()).collect();
        let mut b: Vec<&[u64]> = other.classes.iter().map(|c| c.members()).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// Classification of a register pair by where the two labels differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairCase {
    /// k = k'.
    Identical,
    /// Differ at `l1 < l2` with equal digits there (`|..1..1..>` vs
    /// `|..0..0..>`).
    EqualSigns { l1: usize, l2: usize },
    /// Differ at `l1 < l2` with opposite digits there (`|..0..1..>` vs
    /// `|..1..0..>`).
    OppositeSigns { l1: usize, l2: usize },
    /// Single differing position `l >= 2`; the sign factor at the earlier
    /// slot vanishes.
    FirstZero { l: usize },
    /// Single differing position `l = 1`; the sign factor at the later slot
    /// vanishes.
    SecondZero { l: usize },
    /// More than two differing positions; outside the case analysis.
    TooFar { distance: usize },
}

impl PairCase {
    pub fn tag(&self) -> PairCaseTag {
        match self {
            PairCase::Identical => PairCaseTag::Identical,
            PairCase::EqualSigns { .. } => PairCaseTag::EqualSigns,
            PairCase::OppositeSigns { .. } => PairCaseTag::OppositeSigns,
            PairCase::FirstZero { .. } => PairCaseTag::FirstZero,
            PairCase::SecondZero { .. } => PairCaseTag::SecondZero,
            PairCase::TooFar { .. } => PairCaseTag::TooFar,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCaseTag {
    Identical,
    EqualSigns,
    OppositeSigns,
    FirstZero,
    SecondZero,
    TooFar,
}

/// Row symmetry of G required by a pair case, checkable exactly.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GSymmetry {
    /// Row `l2` is the negation of row `l1`.
    RowsOpposite { l1: usize, l2: usize },
    /// Rows `l1` and `l2` coincide.
    RowsEqual { l1: usize, l2: usize },
    /// Row `l` vanishes.
    RowZero { l: usize },
}

/// True iff the signatures of `k` and `k2` are exactly equal, which is
/// equivalent to the no-decoherence condition holding for every environment
/// configuration.
pub fn preserves_coherence(g: &InteractionMatrix, k: BasisIndex, k2: BasisIndex) -> Result<bool> {
    Ok(signature(g, k)? == signature(g, k2)?)
}

/// Group all 2^K register labels by exact signature. Classes are sorted by
/// size descending, then by smallest member; members ascend within a class.
///
/// Signatures are updated incrementally along a Gray-code walk, so the cost
/// is O(2^K · N) rational operations rather than O(2^K · K · N).
pub fn dfs_partition(g: &InteractionMatrix) -> Result<DfsPartition> {
    let width = g.register_size();
    let mut groups: HashMap<Signature, Vec<u64>> = HashMap::new();

    let mut values: Vec<Rational> = signature(g, BasisIndex::new(0, width)?)?.values().to_vec();
    groups
        .entry(Signature::from_values(values.clone()))
        .or_default()
        .push(0);

    let mut prev = 0u64;
    for j in 1..(1u64 << width) {
        let gray = j ^ (j >> 1);
        let flipped = gray ^ prev;
        let lsb_pos = flipped.trailing_zeros() as usize;
        let i = width - lsb_pos; // 1-based MSB-first row index
        let row = g.row(i)?;
        let became_one = gray & flipped != 0;
        for (jcol, entry) in row.iter().enumerate() {
            let twice = entry.doubled();
            if became_one {
                values[jcol] = &values[jcol] - &twice;
            } else {
                values[jcol] = &values[jcol] + &twice;
            }
        }
        groups
            .entry(Signature::from_values(values.clone()))
            .or_default()
            .push(gray);
        prev = gray;
    }

    let mut classes: Vec<DfsClass> = groups
        .into_iter()
        .map(|(signature, mut members)| {
            members.sort_unstable();
            DfsClass { signature, members }
        })
        .collect();
    classes.sort_by(|a, b| {
        b.dim()
            .cmp(&a.dim())
            .then_with(|| a.members[0].cmp(&b.members[0]))
    });
    Ok(DfsPartition { width, classes })
}

/// The Hamming-weight partition of a K-spin register: class `l` holds every
/// label with exactly `l` zero digits and has dimension `binomial(K, l)`.
/// Classes are listed for `l = 0..=K`; each carries the one-component
/// signature `[2l - K]`, the conserved quantity of the collective case.
pub fn collective_partition(width: usize) -> Result<DfsPartition> {
    if width == 0 || width > MAX_REGISTER {
        return Err(Error::RegisterSize(width));
    }
    let mut members_by_zeros: Vec<Vec<u64>> = vec![Vec::new(); width + 1];
    for v in 0..1u64 << width {
        let zeros = width - v.count_ones() as usize;
        members_by_zeros[zeros].push(v);
    }
    let classes = members_by_zeros
        .into_iter()
        .enumerate()
        .map(|(l, members)| DfsClass {
            signature: Signature::from_values(vec![Rational::from_integer(
                2 * l as i64 - width as i64,
            )]),
            members,
        })
        .collect();
    Ok(DfsPartition { width, classes })
}

/// Bitwise complement of a register label: `k` maps to `2^K - k - 1`.
pub fn conjugate_index(k: BasisIndex) -> BasisIndex {
    k.complement()
}

/// Image of a signature class under the complement map. The input must be a
/// full class of `dfs_partition(g)`; the image is again a class (the one
/// with the negated signature).
pub fn conjugate_class(g: &InteractionMatrix, class: &[u64]) -> Result<Vec<u64>> {
    let width = g.register_size();
    if class.is_empty() {
        return Err(Error::InvalidClass("class is empty".into()));
    }
    let mut sorted = class.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != class.len() {
        return Err(Error::InvalidClass("class has duplicate members".into()));
    }
    let sig = signature(g, BasisIndex::new(sorted[0], width)?)?;
    for &v in &sorted[1..] {
        if signature(g, BasisIndex::new(v, width)?)? != sig {
            return Err(Error::InvalidClass(format!(
                "members {} and {} have different signatures",
                sorted[0], v
            )));
        }
    }
    let full_count = (0..1u64 << width)
        .filter(|&v| {
            signature(g, BasisIndex::new(v, width).expect("valid label")).expect("valid widths")
                == sig
        })
        .count();
    if full_count != sorted.len() {
        return Err(Error::InvalidClass(format!(
            "class has {} members but its signature class has {}",
            sorted.len(),
            full_count
        )));
    }
    let mut image: Vec<u64> = sorted
        .iter()
        .map(|&v| conjugate_index(BasisIndex::new(v, width).expect("valid label")).value())
        .collect();
    image.sort_unstable();
    Ok(image)
}

/// Classify a register pair by its differing positions (1-based, MSB-first).
pub fn pair_case(k: BasisIndex, k2: BasisIndex) -> Result<PairCase> {
    if k.width() != k2.width() {
        return Err(Error::WidthMismatch {
            expected: k.width(),
            found: k2.width(),
        });
    }
    let width = k.width();
    let diff = k.value() ^ k2.value();
    let distance = diff.count_ones() as usize;
    if distance == 0 {
        return Ok(PairCase::Identical);
    }
    if distance > 2 {
        return Ok(PairCase::TooFar { distance });
    }
    let mut positions: Vec<usize> = (1..=width)
        .filter(|&i| (diff >> (width - i)) & 1 == 1)
        .collect();
    positions.sort_unstable();
    if distance == 2 {
        let (l1, l2) = (positions[0], positions[1]);
        if k.bit(l1)? == k.bit(l2)? {
            Ok(PairCase::EqualSigns { l1, l2 })
        } else {
            Ok(PairCase::OppositeSigns { l1, l2 })
        }
    } else {
        let l = positions[0];
        if l >= 2 {
            Ok(PairCase::FirstZero { l })
        } else {
            Ok(PairCase::SecondZero { l })
        }
    }
}

/// Row symmetry of G that makes the case's pair coherence-preserving.
pub fn required_symmetry(case: &PairCase) -> Result<GSymmetry> {
    match *case {
        PairCase::EqualSigns { l1, l2 } => Ok(GSymmetry::RowsOpposite { l1, l2 }),
        PairCase::OppositeSigns { l1, l2 } => Ok(GSymmetry::RowsEqual { l1, l2 }),
        PairCase::FirstZero { l } | PairCase::SecondZero { l } => Ok(GSymmetry::RowZero { l }),
        PairCase::Identical => Err(Error::InapplicableCase(
            "identical labels need no symmetry".into(),
        )),
        PairCase::TooFar { distance } => Err(Error::InapplicableCase(format!(
            "labels differ in {distance} > 2 positions"
        ))),
    }
}

/// Exact row comparison for a claimed symmetry of G.
pub fn check_symmetry(g: &InteractionMatrix, sym: &GSymmetry) -> Result<bool> {
    match *sym {
        GSymmetry::RowsOpposite { l1, l2 } => {
            let (a, b) = (g.row(l1)?, g.row(l2)?);
            Ok(a.iter().zip(b).all(|(x, y)| (x + y).is_zero()))
        }
        GSymmetry::RowsEqual { l1, l2 } => Ok(g.row(l1)? == g.row(l2)?),
        GSymmetry::RowZero { l } => Ok(g.row(l)?.iter().all(Rational::is_zero)),
    }
}

/// Number of two-dimensional DFS pairs a case contributes: `2^(K-2)` per
/// two-bit pattern with both positions fixed, `2^(K-1)` for a single-bit
/// case with the differing position fixed.
pub fn count_pair_dfs(width: usize, tag: PairCaseTag) -> Result<u64> {
    if width == 0 || width > MAX_REGISTER {
        return Err(Error::RegisterSize(width));
    }
    match tag {
        PairCaseTag::EqualSigns | PairCaseTag::OppositeSigns => {
            if width < 2 {
                Err(Error::InapplicableCase(format!(
                    "two-bit case needs K >= 2, got K = {width}"
                )))
            } else {
                Ok(1u64 << (width - 2))
            }
        }
        PairCaseTag::FirstZero | PairCaseTag::SecondZero => Ok(1u64 << (width - 1)),
        PairCaseTag::Identical | PairCaseTag::TooFar => Err(Error::InapplicableCase(
            "counts are defined for the four table cases only".into(),
        )),
    }
}

/// Every row symmetry that holds exactly: vanishing rows, then equal pairs,
/// then opposite pairs, positions ascending.
pub fn held_symmetries(g: &InteractionMatrix) -> Vec<GSymmetry> {
    let k = g.register_size();
    let mut found = Vec::new();
    for l in 1..=k {
        let sym = GSymmetry::RowZero { l };
        if check_symmetry(g, &sym).expect("row index in range") {
            found.push(sym);
        }
    }
    for l1 in 1..=k {
        for l2 in l1 + 1..=k {
            let sym = GSymmetry::RowsEqual { l1, l2 };
            if check_symmetry(g, &sym).expect("row index in range") {
                found.push(sym);
            }
        }
    }
    for l1 in 1..=k {
        for l2 in l1 + 1..=k {
            let sym = GSymmetry::RowsOpposite { l1, l2 };
            if check_symmetry(g, &sym).expect("row index in range") {
                found.push(sym);
            }
        }
    }
    found
}

/// Structural report over the full partition.
#[derive(Clone, Debug, Serialize)]
pub struct DfsReport {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub classes: Vec<ClassReport>,
    /// True iff the partition equals the Hamming-weight partition.
    pub collective: bool,
    pub largest_dim: usize,
    /// `largest_dim * sqrt(K) / 2^K` when collective, otherwise absent.
    pub collective_ratio: Option<f64>,
    pub symmetries: Vec<GSymmetry>,
    /// For each class index, the index of its image under complementation.
    pub conjugation: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub members: Vec<u64>,
    pub dim: usize,
    pub signature: Vec<[String; 2]>,
}

impl DfsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Aggregate analysis: partition, collective detection, held symmetries and
/// the conjugation permutation of the classes.
pub fn dfs_report(g: &InteractionMatrix) -> Result<DfsReport> {
    let k = g.register_size();
    let partition = dfs_partition(g)?;
    let largest_dim = partition.largest_dim();

    // Collective means the partition is exactly the Hamming-weight one:
    // every class holds all labels of one zero count.
    let collective = partition.classes().len() == k + 1
        && partition.classes().iter().all(|class| {
            let zeros = k - class.members()[0].count_ones() as usize;
            class.dim() as u64 == binomial(k as u64, zeros as u64)
                && class
                    .members()
                    .iter()
                    .all(|&v| k - v.count_ones() as usize == zeros)
        });

    let collective_ratio =
        collective.then(|| largest_dim as f64 * (k as f64).sqrt() / (1u64 << k) as f64);

    let by_signature: HashMap<&Signature, usize> = partition
        .classes()
        .iter()
        .enumerate()
        .map(|(idx, class)| (class.signature(), idx))
        .collect();
    let mut conjugation = Vec::with_capacity(partition.classes().len());
    for (idx, class) in partition.classes().iter().enumerate() {
        let negated = class.signature().negated();
        let target = by_signature
            .get(&negated)
            .copied()
            .ok_or_else(|| Error::InvalidClass("conjugate signature class missing".into()))?;
        conjugation.push([idx, target]);
    }

    let classes = partition
        .classes()
        .iter()
        .map(|class| ClassReport {
            members: class.members().to_vec(),
            dim: class.dim(),
            signature: class
                .signature()
                .values()
                .iter()
                .map(|r| [r.numer().to_string(), r.denom().to_string()])
                .collect(),
        })
        .collect();

    Ok(DfsReport {
        k,
        n: g.env_size(),
        classes,
        collective,
        largest_dim,
        collective_ratio,
        symmetries: held_symmetries(g),
        conjugation,
    })
}

/// Binomial coefficient with u128 intermediates; callers stay far below
/// overflow (n <= 64).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
