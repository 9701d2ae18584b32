//! Finite discrete probability arithmetic.
//!
//! Distributions, joint distributions and row-stochastic channels over finite
//! alphabets, together with entropy, divergences and channel composition.
//! Terms with zero mass are skipped, so `0 log 0` is zero everywhere.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Real;

/// Logarithm base for information quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogBase {
    Bits,
    Nats,
}

impl LogBase {
    #[inline]
    pub fn log<T: Real>(self, x: T) -> T {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    /// Converts a quantity expressed in `self` into `to`.
    pub fn convert<T: Real>(self, value: T, to: LogBase) -> T {
        match (self, to) {
            (LogBase::Bits, LogBase::Nats) => value * T::LN_2(),
            (LogBase::Nats, LogBase::Bits) => value / T::LN_2(),
            _ => value,
        }
    }
}

fn check_masses<T: Real>(probs: &[T], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    let mut total = T::zero();
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < T::zero() {
            return Err(Error::InvalidDistribution(format!(
                "{what}: mass {p} at index {i} is not a finite non-negative number"
            )));
        }
        total += p;
    }
    if (total - T::one()).abs() > T::tolerance() {
        return Err(Error::InvalidDistribution(format!(
            "{what}: masses sum to {total}, not 1"
        )));
    }
    Ok(())
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidDistribution(format!(
                "duplicate alphabet label {l:?}"
            )));
        }
    }
    Ok(())
}

/// Entropy of a raw mass vector. Zero masses are skipped.
pub fn entropy_of<T: Real>(probs: &[T], base: LogBase) -> T {
    let mut acc = T::zero();
    for &p in probs {
        if p > T::zero() {
            acc += p * base.log(p);
        }
    }
    let h = -acc;
    if h > T::zero() {
        h
    } else {
        T::zero()
    }
}

/// A probability distribution over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct Dist<T = f64> {
    probs: Vec<T>,
    labels: Option<Vec<String>>,
}

impl<T: Real> Dist<T> {
    /// Symbols are identified by index.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        check_masses(&probs, "distribution")?;
        Ok(Self {
            probs,
            labels: None,
        })
    }

    pub fn with_labels(probs: Vec<T>, labels: Vec<String>) -> Result<Self> {
        check_masses(&probs, "distribution")?;
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: labels.len(),
            });
        }
        check_distinct(&labels)?;
        Ok(Self {
            probs,
            labels: Some(labels),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        Self::new(vec![T::one() / T::from_usize(n).unwrap(); n])
    }

    /// Point mass on symbol `k`.
    pub fn point(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidParameter(format!(
                "point mass at {k} outside alphabet of size {n}"
            )));
        }
        let mut probs = vec![T::zero(); n];
        probs[k] = T::one();
        Self::new(probs)
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_raw(probs: Vec<T>) -> Self {
        Self {
            probs,
            labels: None,
        }
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    /// Largest mass and the smallest index attaining it.
    pub fn mode(&self) -> (usize, T) {
        let mut best = (0, self.probs[0]);
        for (i, &p) in self.probs.iter().enumerate().skip(1) {
            if p > best.1 {
                best = (i, p);
            }
        }
        best
    }
}

fn same_alphabet<T: Real>(p: &Dist<T>, q: &Dist<T>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(())
}

/// Shannon entropy in bits.
pub fn entropy<T: Real>(d: &Dist<T>) -> T {
    entropy_of(d.probs(), LogBase::Bits)
}

pub fn entropy_in<T: Real>(d: &Dist<T>, base: LogBase) -> T {
    entropy_of(d.probs(), base)
}

/// `E_p[-log q]`; infinite when `q` misses part of the support of `p`.
pub fn cross_entropy<T: Real>(p: &Dist<T>, q: &Dist<T>, base: LogBase) -> Result<T> {
    same_alphabet(p, q)?;
    let mut acc = T::zero();
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > T::zero() {
            if b <= T::zero() {
                return Ok(T::infinity());
            }
            acc -= a * base.log(b);
        }
    }
    Ok(acc)
}

/// Relative entropy `D(p || q)`.
pub fn kl_divergence<T: Real>(p: &Dist<T>, q: &Dist<T>, base: LogBase) -> Result<T> {
    same_alphabet(p, q)?;
    let mut acc = T::zero();
    for (s, (&a, &b)) in p.probs().iter().zip(q.probs()).enumerate() {
        if a > T::zero() {
            if b <= T::zero() {
                return Err(Error::AbsoluteContinuityViolation { symbol: s });
            }
            acc += a * base.log(a / b);
        }
    }
    Ok(acc.max(T::zero()))
}

/// Total variation distance, half the L1 distance.
pub fn tv_distance<T: Real>(p: &Dist<T>, q: &Dist<T>) -> Result<T> {
    same_alphabet(p, q)?;
    let l1: T = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| (a - b).abs())
        .sum();
    Ok((l1 / T::lit(2.0)).min(T::one()))
}

/// Checks `TV(p, q) <= sqrt(D(p || q) / 2)` with the divergence in nats.
///
/// The inequality always holds; this is exposed as a test oracle.
pub fn pinsker_check<T: Real>(p: &Dist<T>, q: &Dist<T>) -> Result<bool> {
    let kl = kl_divergence(p, q, LogBase::Nats)?;
    let tv = tv_distance(p, q)?;
    Ok(tv <= (kl / T::lit(2.0)).sqrt() + T::tolerance())
}

/// Joint distribution over a row alphabet and a column alphabet.
///
/// Used for `P(S,X)` (rows private, columns public) as well as the outputs of
/// [`compose`], `P(S,Y)` and `P(X,Y)`. Columns with zero marginal mass are
/// removed at construction because their conditionals are undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct Joint<T = f64> {
    rows: usize,
    cols: usize,
    masses: Vec<T>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl<T: Real> Joint<T> {
    pub fn new(masses: Vec<Vec<T>>) -> Result<Self> {
        let rows = masses.len();
        let cols = masses.first().map_or(0, Vec::len);
        Self::with_labels(masses, default_labels(rows), default_labels(cols))
    }

    pub fn with_labels(
        masses: Vec<Vec<T>>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        let rows = masses.len();
        let cols = masses.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(rows * cols);
        for row in masses {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::from_flat(rows, cols, flat, row_labels, col_labels)
    }

    /// Row-major masses.
    pub fn from_flat(
        rows: usize,
        cols: usize,
        masses: Vec<T>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution(
                "joint has an empty alphabet".into(),
            ));
        }
        if masses.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: masses.len(),
            });
        }
        if row_labels.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: row_labels.len(),
            });
        }
        if col_labels.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: col_labels.len(),
            });
        }
        check_masses(&masses, "joint")?;
        check_distinct(&row_labels)?;
        check_distinct(&col_labels)?;

        let keep: Vec<usize> = (0..cols)
            .filter(|&c| (0..rows).any(|r| masses[r * cols + c] > T::zero()))
            .collect();
        if keep.len() == cols {
            return Ok(Self {
                rows,
                cols,
                masses,
                row_labels,
                col_labels,
            });
        }
        let new_cols = keep.len();
        let mut stripped = Vec::with_capacity(rows * new_cols);
        for r in 0..rows {
            stripped.extend(keep.iter().map(|&c| masses[r * cols + c]));
        }
        let col_labels = keep.iter().map(|&c| col_labels[c].clone()).collect();
        Ok(Self {
            rows,
            cols: new_cols,
            masses: stripped,
            row_labels,
            col_labels,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn mass(&self, r: usize, c: usize) -> T {
        self.masses[r * self.cols + c]
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_marginal(&self) -> Dist<T> {
        let probs = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.mass(r, c)).sum())
            .collect();
        Dist::from_raw(probs)
    }

    pub fn col_marginal(&self) -> Dist<T> {
        let probs = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.mass(r, c)).sum())
            .collect();
        Dist::from_raw(probs)
    }

    /// Conditional distribution of the row variable given column `c`.
    pub fn row_given_col(&self, c: usize) -> Dist<T> {
        let col: Vec<T> = (0..self.rows).map(|r| self.mass(r, c)).collect();
        let total: T = col.iter().copied().sum();
        Dist::from_raw(col.into_iter().map(|m| m / total).collect())
    }

    /// The same joint with rows and columns swapped.
    pub fn transpose(&self) -> Self {
        let mut masses = Vec::with_capacity(self.masses.len());
        for c in 0..self.cols {
            masses.extend((0..self.rows).map(|r| self.mass(r, c)));
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            masses,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }
}

/// Mutual information between the row and column variables, in bits.
pub fn mutual_information<T: Real>(joint: &Joint<T>) -> T {
    mutual_information_in(joint, LogBase::Bits)
}

/// `H(rows) - sum_c p(c) H(rows | c)`.
pub fn mutual_information_in<T: Real>(joint: &Joint<T>, base: LogBase) -> T {
    let prior = entropy_of(joint.row_marginal().probs(), base);
    let col = joint.col_marginal();
    let mut conditional = T::zero();
    for (c, &pc) in col.probs().iter().enumerate() {
        if pc > T::zero() {
            conditional += pc * entropy_of(joint.row_given_col(c).probs(), base);
        }
    }
    (prior - conditional).max(T::zero())
}

/// Row-stochastic matrix `P(Y = y | X = x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel<T = f64> {
    inputs: usize,
    outputs: usize,
    entries: Vec<T>,
    output_labels: Vec<String>,
}

impl<T: Real> Channel<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let outputs = rows.first().map_or(0, Vec::len);
        Self::with_labels(rows, default_labels(outputs))
    }

    pub fn with_labels(rows: Vec<Vec<T>>, output_labels: Vec<String>) -> Result<Self> {
        let inputs = rows.len();
        let outputs = rows.first().map_or(0, Vec::len);
        if inputs == 0 || outputs == 0 {
            return Err(Error::InvalidDistribution(
                "channel has an empty alphabet".into(),
            ));
        }
        if output_labels.len() != outputs {
            return Err(Error::DimensionMismatch {
                expected: outputs,
                found: output_labels.len(),
            });
        }
        check_distinct(&output_labels)?;
        let mut entries = Vec::with_capacity(inputs * outputs);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::DimensionMismatch {
                    expected: outputs,
                    found: row.len(),
                });
            }
            check_masses(&row, &format!("channel row {x}"))?;
            entries.extend(row);
        }
        Ok(Self {
            inputs,
            outputs,
            entries,
            output_labels,
        })
    }

    /// `Y = X`.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_partition(&Partition::identity(n))
    }

    /// Deterministic channel sending each input to the index of its block.
    pub fn from_partition(partition: &Partition) -> Result<Self> {
        let inputs = partition.len();
        let outputs = partition.num_blocks();
        if inputs == 0 {
            return Err(Error::InvalidDistribution(
                "channel has an empty alphabet".into(),
            ));
        }
        let mut entries = vec![T::zero(); inputs * outputs];
        for x in 0..inputs {
            entries[x * outputs + partition.block_of(x)] = T::one();
        }
        Ok(Self {
            inputs,
            outputs,
            entries,
            output_labels: default_labels(outputs),
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> T {
        self.entries[x * self.outputs + y]
    }

    pub fn row(&self, x: usize) -> &[T] {
        &self.entries[x * self.outputs..(x + 1) * self.outputs]
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    /// The preimage partition when every row is a 0/1 indicator.
    pub fn as_partition(&self) -> Option<Partition> {
        let mut owner = Vec::with_capacity(self.inputs);
        for x in 0..self.inputs {
            let row = self.row(x);
            let ones: Vec<usize> = (0..self.outputs).filter(|&y| row[y] == T::one()).collect();
            let zeros = row.iter().filter(|&&v| v == T::zero()).count();
            if ones.len() != 1 || zeros != self.outputs - 1 {
                return None;
            }
            owner.push(ones[0]);
        }
        Some(Partition::canonicalize(&owner))
    }

    pub fn is_deterministic(&self) -> bool {
        self.as_partition().is_some()
    }
}

/// Pushes `P(S,X)` through `P(Y|X)`, returning `(P(S,Y), P(X,Y))`.
///
/// `p(s,y) = sum_x p(s,x) P(y|x)` and `p(x,y) = p(x) P(y|x)`.
pub fn compose<T: Real>(joint: &Joint<T>, channel: &Channel<T>) -> Result<(Joint<T>, Joint<T>)> {
    if channel.inputs() != joint.cols() {
        return Err(Error::DimensionMismatch {
            expected: joint.cols(),
            found: channel.inputs(),
        });
    }
    let (ns, nx, ny) = (joint.rows(), joint.cols(), channel.outputs());
    let mut sy = vec![T::zero(); ns * ny];
    for s in 0..ns {
        for x in 0..nx {
            let m = joint.mass(s, x);
            if m == T::zero() {
                continue;
            }
            for y in 0..ny {
                sy[s * ny + y] += m * channel.prob(x, y);
            }
        }
    }
    let px = joint.col_marginal();
    let mut xy = Vec::with_capacity(nx * ny);
    for x in 0..nx {
        xy.extend((0..ny).map(|y| px.probs()[x] * channel.prob(x, y)));
    }
    let labels = channel.output_labels().to_vec();
    let joint_sy = Joint::from_flat(ns, ny, sy, joint.row_labels().to_vec(), labels.clone())?;
    let joint_xy = Joint::from_flat(nx, ny, xy, joint.col_labels().to_vec(), labels)?;
    Ok((joint_sy, joint_xy))
}
