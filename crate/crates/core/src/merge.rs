//! Agglomerative merging of output symbols.
//!
//! Both greedy algorithms start from the identity mapping `Y = X` and
//! repeatedly fuse two output symbols. Fusing `y_i` and `y_j` replaces their
//! posteriors with the mass-weighted mixture, and the drop in mutual
//! information only depends on the two fused symbols:
//!
//! ```text
//! I(S;Y) - I(S;Y') = p(y_ij) H(P(S|y_ij)) - p(y_i) H(P(S|y_i)) - p(y_j) H(P(S|y_j))
//! ```
//!
//! and likewise for `X`. The funnel picks the merge that removes the most
//! leakage while keeping `I(X;Y) >= R`; the bottleneck picks the merge that
//! removes the most disclosure while keeping `I(S;Y) >= Delta`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::curve::{cleanup_lower, cleanup_upper, CurvePoint, TradeoffCurve};
use crate::dist::{compose, entropy_of, mutual_information, Channel, Dist, Joint, LogBase};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Real;

#[derive(Clone, Debug)]
struct OutputSymbol<T> {
    /// Original public symbols mapped here, ascending.
    members: Vec<usize>,
    mass: T,
    post_s: Vec<T>,
    post_x: Vec<T>,
    h_s: T,
    h_x: T,
}

/// Working state of a merge sequence.
///
/// Output symbols are identified by the smallest original public symbol
/// they contain, so identifiers are stable across merges and their order
/// matches original-symbol order.
#[derive(Clone, Debug)]
pub struct MergeState<T = f64> {
    joint: Arc<Joint<T>>,
    slots: Vec<Option<OutputSymbol<T>>>,
    active: usize,
    isy: T,
    ixy: T,
    hx: T,
    isx: T,
}

/// Mass and posteriors of the symbol a merge would create.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedPosteriors<T = f64> {
    pub mass: T,
    pub posterior_s: Dist<T>,
    pub posterior_x: Dist<T>,
}

/// Audit record of one merge.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeTraceEntry<T = f64> {
    /// Identifier of the merged symbol (the smaller of the pair).
    pub kept: usize,
    pub absorbed: usize,
    pub delta_s: T,
    pub delta_x: T,
    pub isy: T,
    pub ixy: T,
}

fn mixture<T: Real>(a: &[T], wa: T, b: &[T], wb: T) -> Vec<T> {
    a.iter().zip(b).map(|(&u, &v)| wa * u + wb * v).collect()
}

/// `p_ij H(mix) - p_i H_i - p_j H_j` without materializing the mixture.
fn jsd_delta<T: Real>(pi: T, a: &[T], ha: T, pj: T, b: &[T], hb: T) -> T {
    let pij = pi + pj;
    let (wa, wb) = (pi / pij, pj / pij);
    let mut acc = T::zero();
    for (&u, &v) in a.iter().zip(b) {
        let m = wa * u + wb * v;
        if m > T::zero() {
            acc -= m * m.log2();
        }
    }
    pij * acc - pi * ha - pj * hb
}

impl<T: Real> MergeState<T> {
    /// Identity mapping: one output symbol per public symbol.
    pub fn new(joint: &Joint<T>) -> Self {
        Self::from_shared(Arc::new(joint.clone()))
    }

    pub fn from_shared(joint: Arc<Joint<T>>) -> Self {
        let nx = joint.cols();
        let px = joint.col_marginal();
        let slots = (0..nx)
            .map(|x| {
                let post_s = joint.row_given_col(x).into_probs();
                let mut post_x = vec![T::zero(); nx];
                post_x[x] = T::one();
                Some(OutputSymbol {
                    members: vec![x],
                    mass: px.probs()[x],
                    h_s: entropy_of(&post_s, LogBase::Bits),
                    h_x: T::zero(),
                    post_s,
                    post_x,
                })
            })
            .collect();
        let hx = entropy_of(px.probs(), LogBase::Bits);
        let isx = mutual_information(&joint);
        Self {
            joint,
            slots,
            active: nx,
            isy: isx,
            ixy: hx,
            hx,
            isx,
        }
    }

    pub fn joint(&self) -> &Joint<T> {
        &self.joint
    }

    /// Cached `I(S;Y)` in bits.
    pub fn isy(&self) -> T {
        self.isy
    }

    /// Cached `I(X;Y)` in bits.
    pub fn ixy(&self) -> T {
        self.ixy
    }

    /// `H(X)` of the source, in bits.
    pub fn hx(&self) -> T {
        self.hx
    }

    /// `I(S;X)` of the source, in bits.
    pub fn isx(&self) -> T {
        self.isx
    }

    pub fn num_symbols(&self) -> usize {
        self.active
    }

    /// Active symbol identifiers, ascending.
    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|_| i))
    }

    fn slot(&self, id: usize) -> Result<&OutputSymbol<T>> {
        self.slots
            .get(id)
            .and_then(Option::as_ref)
            .ok_or(Error::UnknownSymbol(id))
    }

    fn pair(&self, i: usize, j: usize) -> Result<(&OutputSymbol<T>, &OutputSymbol<T>)> {
        if i == j {
            return Err(Error::SelfMerge(i));
        }
        Ok((self.slot(i)?, self.slot(j)?))
    }

    pub fn mass(&self, id: usize) -> Result<T> {
        Ok(self.slot(id)?.mass)
    }

    pub fn members(&self, id: usize) -> Result<&[usize]> {
        Ok(&self.slot(id)?.members)
    }

    pub fn posterior_s(&self, id: usize) -> Result<Dist<T>> {
        Ok(Dist::from_raw(self.slot(id)?.post_s.clone()))
    }

    pub fn posterior_x(&self, id: usize) -> Result<Dist<T>> {
        Ok(Dist::from_raw(self.slot(id)?.post_x.clone()))
    }

    pub fn merged_posteriors(&self, i: usize, j: usize) -> Result<MergedPosteriors<T>> {
        let (a, b) = self.pair(i, j)?;
        let mass = a.mass + b.mass;
        let (wa, wb) = (a.mass / mass, b.mass / mass);
        Ok(MergedPosteriors {
            mass,
            posterior_s: Dist::from_raw(mixture(&a.post_s, wa, &b.post_s, wb)),
            posterior_x: Dist::from_raw(mixture(&a.post_x, wa, &b.post_x, wb)),
        })
    }

    /// Drop in `I(S;Y)` caused by merging `i` and `j`.
    pub fn merge_delta_s(&self, i: usize, j: usize) -> Result<T> {
        let (a, b) = self.pair(i, j)?;
        Ok(jsd_delta(
            a.mass, &a.post_s, a.h_s, b.mass, &b.post_s, b.h_s,
        ))
    }

    /// Drop in `I(X;Y)` caused by merging `i` and `j`.
    pub fn merge_delta_x(&self, i: usize, j: usize) -> Result<T> {
        let (a, b) = self.pair(i, j)?;
        Ok(jsd_delta(
            a.mass, &a.post_x, a.h_x, b.mass, &b.post_x, b.h_x,
        ))
    }

    /// Returns the state after merging `i` and `j`.
    pub fn apply_merge(&self, i: usize, j: usize) -> Result<Self> {
        let mut next = self.clone();
        next.merge_in_place(i, j)?;
        Ok(next)
    }

    /// Merges `i` and `j`, keeping the smaller identifier.
    pub fn merge_in_place(&mut self, i: usize, j: usize) -> Result<MergeTraceEntry<T>> {
        let delta_s = self.merge_delta_s(i, j)?;
        let delta_x = self.merge_delta_x(i, j)?;
        self.commit(i, j, delta_s, delta_x);
        Ok(MergeTraceEntry {
            kept: i.min(j),
            absorbed: i.max(j),
            delta_s,
            delta_x,
            isy: self.isy,
            ixy: self.ixy,
        })
    }

    fn commit(&mut self, i: usize, j: usize, delta_s: T, delta_x: T) {
        let (keep, drop) = (i.min(j), i.max(j));
        let b = self.slots[drop].take().expect("validated symbol");
        let a = self.slots[keep].as_mut().expect("validated symbol");
        let mass = a.mass + b.mass;
        let (wa, wb) = (a.mass / mass, b.mass / mass);
        a.post_s = mixture(&a.post_s, wa, &b.post_s, wb);
        a.post_x = mixture(&a.post_x, wa, &b.post_x, wb);
        a.h_s = entropy_of(&a.post_s, LogBase::Bits);
        a.h_x = entropy_of(&a.post_x, LogBase::Bits);
        a.mass = mass;
        a.members.extend(b.members);
        a.members.sort_unstable();
        self.active -= 1;
        self.isy = (self.isy - delta_s).max(T::zero());
        self.ixy = (self.ixy - delta_x).max(T::zero());
        if self.active == 1 {
            // A constant output carries no information.
            self.isy = T::zero();
            self.ixy = T::zero();
        }
    }

    /// Current mapping as a partition of the public alphabet.
    pub fn partition(&self) -> Partition {
        let mut owner = vec![0usize; self.joint.cols()];
        for (id, slot) in self.slots.iter().enumerate() {
            if let Some(sym) = slot {
                for &x in &sym.members {
                    owner[x] = id;
                }
            }
        }
        Partition::canonicalize(&owner)
    }

    /// Current mapping as a 0/1 row-stochastic matrix.
    pub fn channel(&self) -> Channel<T> {
        Channel::from_partition(&self.partition()).expect("non-empty alphabet")
    }

    /// `(I(S;Y), I(X;Y))` recomputed from scratch through [`compose`].
    pub fn recompute(&self) -> (T, T) {
        let (sy, xy) = compose(&self.joint, &self.channel()).expect("channel matches joint");
        (mutual_information(&sy), mutual_information(&xy))
    }

    fn curve_point(&self, constraint: Option<T>) -> CurvePoint<T> {
        CurvePoint {
            constraint,
            ixy: self.ixy,
            isy: self.isy,
            partition: self.partition(),
        }
    }
}

/// Result of one greedy run.
#[derive(Clone, Debug)]
pub struct GreedyOutcome<T = f64> {
    pub channel: Channel<T>,
    /// The initial identity state followed by the state after every merge.
    pub curve: TradeoffCurve<T>,
    pub trace: Vec<MergeTraceEntry<T>>,
    pub state: MergeState<T>,
}

impl<T: Real> GreedyOutcome<T> {
    pub fn isy(&self) -> T {
        self.state.isy()
    }

    pub fn ixy(&self) -> T {
        self.state.ixy()
    }

    pub fn partition(&self) -> Partition {
        self.state.partition()
    }
}

#[derive(Clone, Copy, Debug)]
enum Objective<T> {
    /// Maximize the leakage drop subject to `I(X;Y) >= floor`.
    Funnel { floor: T },
    /// Maximize the disclosure drop subject to `I(S;Y) >= floor`.
    Bottleneck { floor: T },
}

/// Cached `(delta_s, delta_x)` for every active pair, indexed by `i < j`.
struct PairCache<T> {
    n: usize,
    deltas: Vec<(T, T)>,
}

impl<T: Real> PairCache<T> {
    fn build(state: &MergeState<T>) -> Self {
        let n = state.slots.len();
        let mut deltas = vec![(T::zero(), T::zero()); n * n];
        let ids: Vec<usize> = state.symbols().collect();
        let rows: Vec<Vec<(usize, (T, T))>> = ids
            .par_iter()
            .enumerate()
            .map(|(k, &i)| {
                ids[k + 1..]
                    .iter()
                    .map(|&j| (j, Self::eval(state, i, j)))
                    .collect()
            })
            .collect();
        for (&i, row) in ids.iter().zip(rows) {
            for (j, d) in row {
                deltas[i * n + j] = d;
            }
        }
        Self { n, deltas }
    }

    fn eval(state: &MergeState<T>, i: usize, j: usize) -> (T, T) {
        let a = state.slots[i].as_ref().unwrap();
        let b = state.slots[j].as_ref().unwrap();
        (
            jsd_delta(a.mass, &a.post_s, a.h_s, b.mass, &b.post_s, b.h_s),
            jsd_delta(a.mass, &a.post_x, a.h_x, b.mass, &b.post_x, b.h_x),
        )
    }

    fn get(&self, i: usize, j: usize) -> (T, T) {
        self.deltas[i.min(j) * self.n + i.max(j)]
    }

    /// Refreshes every pair involving the freshly merged symbol `id`.
    fn refresh(&mut self, state: &MergeState<T>, id: usize) {
        let others: Vec<usize> = state.symbols().filter(|&k| k != id).collect();
        for k in others {
            self.deltas[id.min(k) * self.n + id.max(k)] = Self::eval(state, id, k);
        }
    }
}

fn select<T: Real>(
    state: &MergeState<T>,
    cache: &PairCache<T>,
    objective: Objective<T>,
) -> Option<(usize, usize)> {
    let ids: Vec<usize> = state.symbols().collect();
    let score = |i: usize, j: usize| -> Option<T> {
        let (ds, dx) = cache.get(i, j);
        match objective {
            Objective::Funnel { floor } => (state.ixy - dx >= floor - T::tolerance()).then_some(ds),
            Objective::Bottleneck { floor } => {
                (state.isy - ds >= floor - T::tolerance()).then_some(dx)
            }
        }
    };
    let mut best: Option<T> = None;
    for (k, &i) in ids.iter().enumerate() {
        for &j in &ids[k + 1..] {
            if let Some(v) = score(i, j) {
                if best.is_none_or(|b| v > b) {
                    best = Some(v);
                }
            }
        }
    }
    let best = best?;
    // Lexicographically first pair within the tie tolerance of the maximum.
    for (k, &i) in ids.iter().enumerate() {
        for &j in &ids[k + 1..] {
            if let Some(v) = score(i, j) {
                if v >= best - T::tie_tolerance() {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

fn run_greedy<T: Real>(joint: &Joint<T>, objective: Objective<T>) -> GreedyOutcome<T> {
    let mut state = MergeState::new(joint);
    let constraint = match objective {
        Objective::Funnel { floor } | Objective::Bottleneck { floor } => floor,
    };
    let mut curve = vec![state.curve_point(Some(constraint))];
    let mut trace = Vec::new();
    if state.num_symbols() > 1 {
        let mut cache = PairCache::build(&state);
        while let Some((i, j)) = select(&state, &cache, objective) {
            let (ds, dx) = cache.get(i, j);
            state.commit(i, j, ds, dx);
            trace.push(MergeTraceEntry {
                kept: i,
                absorbed: j,
                delta_s: ds,
                delta_x: dx,
                isy: state.isy,
                ixy: state.ixy,
            });
            curve.push(state.curve_point(Some(constraint)));
            cache.refresh(&state, i);
        }
    }
    GreedyOutcome {
        channel: state.channel(),
        curve: TradeoffCurve { points: curve },
        trace,
        state,
    }
}

fn check_level<T: Real>(value: T, name: &str) -> Result<()> {
    if !value.is_finite() || value < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be a finite non-negative number of bits, got {value}"
        )));
    }
    Ok(())
}

/// Greedy privacy funnel: minimize `I(S;Y)` subject to `I(X;Y) >= r_bits`.
pub fn greedy_funnel<T: Real>(joint: &Joint<T>, r_bits: T) -> Result<GreedyOutcome<T>> {
    check_level(r_bits, "disclosure floor")?;
    let hx = entropy_of(joint.col_marginal().probs(), LogBase::Bits);
    if r_bits > hx + T::tolerance() {
        return Err(Error::InfeasibleDisclosure {
            requested: r_bits.as_f64(),
            max: hx.as_f64(),
        });
    }
    Ok(run_greedy(joint, Objective::Funnel { floor: r_bits }))
}

/// Greedy bottleneck: minimize `I(X;Y)` subject to `I(S;Y) >= delta_bits`.
pub fn greedy_bottleneck<T: Real>(joint: &Joint<T>, delta_bits: T) -> Result<GreedyOutcome<T>> {
    check_level(delta_bits, "retention floor")?;
    let isx = mutual_information(joint);
    if delta_bits > isx + T::tolerance() {
        return Err(Error::InfeasibleRetention {
            requested: delta_bits.as_f64(),
            max: isx.as_f64(),
        });
    }
    Ok(run_greedy(
        joint,
        Objective::Bottleneck { floor: delta_bits },
    ))
}

fn final_point<T: Real>(outcome: &GreedyOutcome<T>) -> CurvePoint<T> {
    outcome
        .curve
        .points
        .last()
        .cloned()
        .expect("curve holds the initial state")
}

/// Independent funnel run per disclosure floor, then each point is replaced
/// by the least-leaking run that also satisfies its floor.
pub fn sweep_funnel<T: Real>(joint: &Joint<T>, grid: &[T]) -> Result<TradeoffCurve<T>> {
    let runs = grid
        .par_iter()
        .map(|&r| greedy_funnel(joint, r).map(|o| final_point(&o)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TradeoffCurve {
        points: cleanup_lower(&runs),
    })
}

/// Independent bottleneck run per retention floor, then each point is
/// replaced by the least-disclosing run that also satisfies its floor.
pub fn sweep_bottleneck<T: Real>(joint: &Joint<T>, grid: &[T]) -> Result<TradeoffCurve<T>> {
    let runs = grid
        .par_iter()
        .map(|&d| greedy_bottleneck(joint, d).map(|o| final_point(&o)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TradeoffCurve {
        points: cleanup_upper(&runs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::dirichlet_joint;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn diag2() -> Joint<f64> {
        Joint::<f64>::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap()
    }

    /// Recompute `I(S;Y)` after merging `i`, `j` by building the merged
    /// partition and composing from scratch.
    fn scratch_after(state: &MergeState<f64>, i: usize, j: usize) -> (f64, f64) {
        let mut owner = state.partition().labels().to_vec();
        let (bi, bj) = (owner[i], owner[j]);
        for o in owner.iter_mut() {
            if *o == bj {
                *o = bi;
            }
        }
        let p = Partition::canonicalize(&owner);
        let (sy, xy) = compose(state.joint(), &Channel::from_partition(&p).unwrap()).unwrap();
        (mutual_information(&sy), mutual_information(&xy))
    }

    fn state_with_posteriors(post: &[(f64, [f64; 2])]) -> MergeState<f64> {
        // Column x carries mass p_x spread over S by its posterior.
        let rows = (0..2)
            .map(|s| post.iter().map(|(p, q)| p * q[s]).collect())
            .collect();
        MergeState::new(&Joint::<f64>::new(rows).unwrap())
    }

    #[test]
    fn init_identity_examples() {
        let st = MergeState::new(&diag2());
        assert!((st.ixy() - 1.0).abs() < TOL);
        assert!((st.isy() - 1.0).abs() < TOL);
        assert_eq!(st.num_symbols(), 2);

        let product = Joint::<f64>::new(vec![vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        let st = MergeState::new(&product);
        assert!(st.isy().abs() < TOL);
        assert!((st.ixy() - st.hx()).abs() < TOL);
    }

    #[test]
    fn merged_posterior_examples() {
        let st = state_with_posteriors(&[(0.5, [1.0, 0.0]), (0.5, [0.0, 1.0])]);
        let m = st.merged_posteriors(0, 1).unwrap();
        assert!((m.mass - 1.0).abs() < TOL);
        assert_eq!(m.posterior_s.probs(), &[0.5, 0.5]);

        // 0.25 (1,0) + 0.75 (0.5,0.5) = (0.625, 0.375)
        let st = state_with_posteriors(&[(0.2, [1.0, 0.0]), (0.6, [0.5, 0.5]), (0.2, [0.0, 1.0])]);
        let m = st.merged_posteriors(0, 1).unwrap();
        assert!((m.mass - 0.8).abs() < TOL);
        assert!((m.posterior_s.probs()[0] - 0.625).abs() < TOL);
        assert!((m.posterior_s.probs()[1] - 0.375).abs() < TOL);
        assert!((m.posterior_x.probs()[0] - 0.25).abs() < TOL);

        let st = state_with_posteriors(&[(0.3, [0.2, 0.8]), (0.7, [0.2, 0.8])]);
        let m = st.merged_posteriors(0, 1).unwrap();
        assert!((m.posterior_s.probs()[0] - 0.2).abs() < TOL);
    }

    #[test]
    fn unknown_and_self_merges_rejected() {
        let st = MergeState::new(&diag2());
        assert!(matches!(
            st.merge_delta_s(0, 7),
            Err(Error::UnknownSymbol(7))
        ));
        assert!(matches!(st.merge_delta_x(1, 1), Err(Error::SelfMerge(1))));
        let merged = st.apply_merge(0, 1).unwrap();
        assert!(matches!(
            merged.merged_posteriors(0, 1),
            Err(Error::UnknownSymbol(1))
        ));
    }

    #[test]
    fn delta_examples() {
        let st = state_with_posteriors(&[(0.5, [1.0, 0.0]), (0.5, [0.0, 1.0])]);
        assert!((st.merge_delta_s(0, 1).unwrap() - 1.0).abs() < TOL);
        assert!((st.merge_delta_x(0, 1).unwrap() - 1.0).abs() < TOL);

        let st = state_with_posteriors(&[(0.3, [0.2, 0.8]), (0.7, [0.2, 0.8])]);
        assert!(st.merge_delta_s(0, 1).unwrap().abs() < TOL);
        // Disjoint X-posteriors always lose information.
        assert!(st.merge_delta_x(0, 1).unwrap() > 0.5);
    }

    #[test]
    fn delta_zero_for_identical_posteriors() {
        // Distinct output symbols never share an X-posterior, so check the
        // mixture formula directly.
        let a = [0.25, 0.75, 0.0];
        let h = entropy_of(&a, LogBase::Bits);
        assert!(jsd_delta(0.4f64, &a, h, 0.6, &a, h).abs() < TOL);
    }

    #[test]
    fn deltas_match_scratch_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (ns, nx) in [(3, 3), (2, 4), (4, 4)] {
            let joint = dirichlet_joint::<f64, _>(&mut rng, ns, nx);
            let st = MergeState::new(&joint);
            for i in 0..nx {
                for j in i + 1..nx {
                    let (s, x) = scratch_after(&st, i, j);
                    assert!((st.isy() - s - st.merge_delta_s(i, j).unwrap()).abs() < TOL);
                    assert!((st.ixy() - x - st.merge_delta_x(i, j).unwrap()).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn apply_merge_examples() {
        let st = MergeState::new(&diag2()).apply_merge(0, 1).unwrap();
        assert_eq!(st.num_symbols(), 1);
        assert!(st.isy().abs() < TOL && st.ixy().abs() < TOL);
        assert_eq!(st.members(0).unwrap(), &[0, 1]);

        let st = state_with_posteriors(&[(0.3, [0.2, 0.8]), (0.4, [0.2, 0.8]), (0.3, [0.9, 0.1])]);
        let merged = st.apply_merge(1, 0).unwrap();
        assert!((merged.isy() - st.isy()).abs() < TOL);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 5);
        let mut st = MergeState::new(&joint);
        for (i, j) in [(3, 4), (0, 3), (1, 2)] {
            let before = (st.isy(), st.ixy());
            let (ds, dx) = (
                st.merge_delta_s(i, j).unwrap(),
                st.merge_delta_x(i, j).unwrap(),
            );
            st = st.apply_merge(i, j).unwrap();
            assert!((before.0 - ds - st.isy()).abs() < TOL);
            assert!((before.1 - dx - st.ixy()).abs() < TOL);
        }
        let (s, x) = st.recompute();
        assert!((s - st.isy()).abs() < TOL && (x - st.ixy()).abs() < TOL);
        assert_eq!(st.partition().labels(), &[0, 1, 1, 0, 0]);
    }

    #[test]
    fn funnel_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 5);
        let out = greedy_funnel(&joint, 0.0).unwrap();
        assert_eq!(out.channel.outputs(), 1);
        assert!(out.isy().abs() < TOL && out.ixy().abs() < TOL);

        let hx = out.state.hx();
        let out = greedy_funnel(&joint, hx).unwrap();
        assert_eq!(out.partition(), Partition::identity(5));
        assert!((out.isy() - mutual_information(&joint)).abs() < TOL);
        assert_eq!(out.curve.len(), 1);

        assert!(matches!(
            greedy_funnel(&joint, hx + 1e-6),
            Err(Error::InfeasibleDisclosure { .. })
        ));
        assert!(greedy_funnel(&joint, -0.1).is_err());
        assert!(greedy_funnel(&joint, f64::NAN).is_err());
    }

    #[test]
    fn bottleneck_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 5);
        let out = greedy_bottleneck(&joint, 0.0).unwrap();
        assert!(out.ixy().abs() < TOL);

        let isx = mutual_information(&joint);
        let out = greedy_bottleneck(&joint, isx).unwrap();
        assert_eq!(out.partition(), Partition::identity(5));
        assert!(matches!(
            greedy_bottleneck(&joint, isx + 1e-6),
            Err(Error::InfeasibleRetention { .. })
        ));

        // Columns 0 and 2 share a posterior; merging them is free.
        let joint = Joint::<f64>::new(vec![vec![0.1, 0.3, 0.2], vec![0.1, 0.1, 0.2]]).unwrap();
        let out = greedy_bottleneck(&joint, mutual_information(&joint)).unwrap();
        assert_eq!(out.partition().labels(), &[0, 1, 0]);
    }

    #[test]
    fn single_symbol_source() {
        let joint = Joint::<f64>::new(vec![vec![0.4], vec![0.6]]).unwrap();
        let out = greedy_funnel(&joint, 0.0).unwrap();
        assert_eq!(out.channel.outputs(), 1);
        assert!(out.trace.is_empty());
        assert!(out.isy().abs() < TOL && out.ixy().abs() < TOL);
    }

    #[test]
    fn ties_break_toward_smallest_pair() {
        // Four symbols with identical S-posteriors and equal masses: every
        // pair has the same deltas.
        let joint = Joint::<f64>::new(vec![vec![0.125; 4], vec![0.125; 4]]).unwrap();
        let out = greedy_funnel(&joint, 1.0).unwrap();
        assert_eq!((out.trace[0].kept, out.trace[0].absorbed), (0, 1));
        assert_eq!((out.trace[1].kept, out.trace[1].absorbed), (2, 3));
        assert_eq!(out.trace.len(), 2);
    }

    #[test]
    fn bottleneck_above_funnel_at_matched_disclosure() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 6);
            let isx = mutual_information(&joint);
            let upper = greedy_bottleneck(&joint, 0.5 * isx).unwrap();
            let lower = greedy_funnel(&joint, upper.ixy()).unwrap();
            assert!(lower.ixy() >= upper.ixy() - TOL);
            assert!(lower.isy() <= upper.isy() + TOL);
        }
    }

    #[test]
    fn sweep_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 6);
        let st = MergeState::new(&joint);
        let top = sweep_funnel(&joint, &[st.hx()]).unwrap();
        assert_eq!(top.len(), 1);
        assert!((top.points[0].ixy - st.hx()).abs() < TOL);
        assert!((top.points[0].isy - st.isx()).abs() < TOL);
        let bottom = sweep_funnel(&joint, &[0.0]).unwrap();
        assert!(bottom.points[0].ixy.abs() < TOL && bottom.points[0].isy.abs() < TOL);

        let grid: Vec<f64> = (0..=10).map(|k| st.hx() * k as f64 / 10.0).collect();
        let curve = sweep_funnel(&joint, &grid).unwrap();
        for w in curve.points.windows(2) {
            assert!(w[1].isy >= w[0].isy - TOL);
            assert!(w[1].ixy >= w[0].ixy - TOL);
        }
        for (p, r) in curve.points.iter().zip(&grid) {
            assert!(p.ixy >= r - TOL);
        }
    }

    #[test]
    fn greedy_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let joint = dirichlet_joint::<f64, _>(&mut rng, 4, 7);
        let a = greedy_funnel(&joint, 1.0).unwrap();
        let b = greedy_funnel(&joint, 1.0).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.curve, b.curve);
    }

    #[test]
    fn single_precision_greedy() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let joint = dirichlet_joint::<f32, _>(&mut rng, 3, 5);
        let out = greedy_funnel(&joint, 0.5f32).unwrap();
        let (s, x) = out.state.recompute();
        assert!((s - out.isy()).abs() < 1e-4);
        assert!(x >= 0.5 - 1e-4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_merge_sequences_stay_consistent(
            seed in any::<u64>(),
            ns in 1usize..5,
            nx in 2usize..8,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let joint = dirichlet_joint::<f64, _>(&mut rng, ns, nx);
            let mut st = MergeState::new(&joint);
            while st.num_symbols() > 1 {
                let ids: Vec<usize> = st.symbols().collect();
                let a = ids[rng.gen_range(0..ids.len())];
                let mut b = a;
                while b == a {
                    b = ids[rng.gen_range(0..ids.len())];
                }
                let (s, x) = scratch_after(&st, a, b);
                let entry = st.merge_in_place(a, b).unwrap();
                prop_assert!(entry.delta_s >= -TOL && entry.delta_x >= -TOL);
                prop_assert!((st.isy() - s).abs() < TOL);
                prop_assert!((st.ixy() - x).abs() < TOL);
                prop_assert!(st.isy() <= st.ixy() + TOL);
                prop_assert!(st.ixy() <= st.hx() + TOL);
                let mass: f64 = st.symbols().map(|i| st.mass(i).unwrap()).sum();
                prop_assert!((mass - 1.0).abs() < TOL);
            }
        }

        #[test]
        fn greedy_outputs_are_feasible(seed in any::<u64>(), frac in 0.0f64..=1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 6);
            let st = MergeState::new(&joint);
            let f = greedy_funnel(&joint, frac * st.hx()).unwrap();
            let (s, x) = f.state.recompute();
            prop_assert!(x >= frac * st.hx() - TOL);
            prop_assert!((s - f.isy()).abs() < TOL);
            prop_assert!(f.channel.is_deterministic());
            let b = greedy_bottleneck(&joint, frac * st.isx()).unwrap();
            let (s, _) = b.state.recompute();
            prop_assert!(s >= frac * st.isx() - TOL);
        }
    }
}
