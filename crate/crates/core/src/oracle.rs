//! Exhaustive search over deterministic mappings.
//!
//! Every deterministic mapping of the public alphabet is a set partition, so
//! for small alphabets the whole achievable `(I(X;Y), I(S;Y))` region of
//! deterministic mappings can be enumerated and the funnel optimum found
//! exactly. Partitions are generated in restricted-growth-string order.

use rayon::prelude::*;

use crate::dist::{compose, entropy, mutual_information, Channel, Joint};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Real;

/// Largest alphabet enumerated unless the caller raises it. Bell(10) = 115975.
pub const DEFAULT_CAP: usize = 10;

/// Streaming enumerator of all set partitions of `{0, .., n-1}`.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    labels: Vec<usize>,
    /// `prefix_max[i] = max(labels[..=i])`.
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl SetPartitions {
    fn new(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        // Rightmost position that may grow without breaking the RGS rule.
        let Some(i) = (1..n)
            .rev()
            .find(|&i| self.labels[i] <= self.prefix_max[i - 1])
        else {
            return false;
        };
        self.labels[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
        for k in i + 1..n {
            self.labels[k] = 0;
            self.prefix_max[k] = self.prefix_max[i];
        }
        true
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Partition::from_rgs(self.labels.clone()).expect("enumerator keeps RGS form"))
    }
}

/// All set partitions of an `n`-element set, `1 <= n <= cap`.
pub fn enumerate_partitions(n: usize, cap: usize) -> Result<SetPartitions> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "cannot partition an empty set".into(),
        ));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(SetPartitions::new(n))
}

/// One deterministic mapping and its operating point.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPoint<T = f64> {
    pub partition: Partition,
    pub ixy: T,
    pub isy: T,
}

fn evaluate<T: Real>(joint: &Joint<T>, partition: Partition) -> PartitionPoint<T> {
    let channel = Channel::from_partition(&partition).expect("non-empty partition");
    let (sy, xy) = compose(joint, &channel).expect("partition covers the public alphabet");
    PartitionPoint {
        partition,
        ixy: mutual_information(&xy),
        isy: mutual_information(&sy),
    }
}

const CHUNK: usize = 4096;

/// Streams evaluated points in enumeration order, evaluating chunks in
/// parallel.
fn for_each_point<T: Real>(
    joint: &Joint<T>,
    cap: usize,
    mut f: impl FnMut(PartitionPoint<T>),
) -> Result<()> {
    let mut parts = enumerate_partitions(joint.cols(), cap)?;
    loop {
        let chunk: Vec<Partition> = parts.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(());
        }
        let points: Vec<PartitionPoint<T>> =
            chunk.into_par_iter().map(|p| evaluate(joint, p)).collect();
        points.into_iter().for_each(&mut f);
    }
}

/// Every deterministic mapping of the public alphabet with its operating
/// point, in restricted-growth-string order.
pub fn exact_region<T: Real>(joint: &Joint<T>, cap: usize) -> Result<Vec<PartitionPoint<T>>> {
    let mut out = Vec::new();
    for_each_point(joint, cap, |p| out.push(p))?;
    Ok(out)
}

/// Deterministic mapping with the least `I(S;Y)` among those with
/// `I(X;Y) >= r_bits`. Ties prefer larger `I(X;Y)`, then earlier partitions.
pub fn exact_funnel_optimum<T: Real>(
    joint: &Joint<T>,
    r_bits: T,
    cap: usize,
) -> Result<PartitionPoint<T>> {
    if !r_bits.is_finite() || r_bits < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "disclosure floor must be a finite non-negative number of bits, got {r_bits}"
        )));
    }
    let hx = entropy(&joint.col_marginal());
    if r_bits > hx + T::tolerance() {
        return Err(Error::InfeasibleDisclosure {
            requested: r_bits.as_f64(),
            max: hx.as_f64(),
        });
    }
    let mut best: Option<PartitionPoint<T>> = None;
    for_each_point(joint, cap, |p| {
        if p.ixy < r_bits - T::tolerance() {
            return;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                p.isy < b.isy - T::tie_tolerance()
                    || ((p.isy - b.isy).abs() <= T::tie_tolerance()
                        && p.ixy > b.ixy + T::tie_tolerance())
            }
        };
        if better {
            best = Some(p);
        }
    })?;
    // The identity mapping always meets any floor up to H(X).
    Ok(best.expect("identity partition is feasible"))
}
