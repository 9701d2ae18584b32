//! Bayes-optimal inference adversary.
//!
//! The adversary picks a belief `q` over the private alphabet minimizing an
//! expected cost `E[C(S, q)]`, once from the prior and once from each
//! posterior `P(S | Y = y)`. The average improvement
//! `delta_C = c0* - E_Y[c_Y*]` measures the inference threat of releasing `Y`.
//! Under the log-loss it equals `I(S;Y)`; for any cost bounded by `L` it is at
//! most `2 sqrt(2) L sqrt(I(S;Y))` with the information in nats.

use crate::dist::{kl_divergence, mutual_information_in, Dist, Joint, LogBase};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// An inference cost `C(s, q)` with its bound and exact minimizer.
pub trait CostSpec<T: Real>: Send + Sync {
    /// Cost of belief `q` when the private symbol is `s`.
    fn cost(&self, s: usize, q: &Dist<T>) -> T;

    /// `sup |C(s, q)|`, or `None` when the cost is unbounded.
    fn bound(&self) -> Option<T>;

    /// `(q*, c*)` minimizing `E_p[C(S, q)]`, if known in closed form.
    fn minimize(&self, p: &Dist<T>) -> Option<(Dist<T>, T)>;

    /// `E_p[C(S, q)]`, skipping symbols outside the support of `p`.
    fn expected_cost(&self, p: &Dist<T>, q: &Dist<T>) -> T {
        p.probs()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > T::zero())
            .map(|(s, &m)| m * self.cost(s, q))
            .sum()
    }
}

/// `C(s, q) = -log q(s)`. The optimal belief is the distribution itself and
/// the optimal cost its entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogLoss {
    pub base: LogBase,
}

impl Default for LogLoss {
    fn default() -> Self {
        Self {
            base: LogBase::Bits,
        }
    }
}

impl<T: Real> CostSpec<T> for LogLoss {
    fn cost(&self, s: usize, q: &Dist<T>) -> T {
        let m = q.probs()[s];
        if m > T::zero() {
            -self.base.log(m)
        } else {
            T::infinity()
        }
    }

    fn bound(&self) -> Option<T> {
        None
    }

    fn minimize(&self, p: &Dist<T>) -> Option<(Dist<T>, T)> {
        Some((p.clone(), crate::dist::entropy_in(p, self.base)))
    }
}

/// `C(s, q) = 1 - q(s)`, bounded by one. The optimal belief is a point mass
/// on a mode; ties go to the smallest symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorProbability;

impl<T: Real> CostSpec<T> for ErrorProbability {
    fn cost(&self, s: usize, q: &Dist<T>) -> T {
        T::one() - q.probs()[s]
    }

    fn bound(&self) -> Option<T> {
        Some(T::one())
    }

    fn minimize(&self, p: &Dist<T>) -> Option<(Dist<T>, T)> {
        let (k, m) = p.mode();
        let q = Dist::point(p.len(), k).ok()?;
        Some((q, T::one() - m))
    }
}

type CostFn<T> = Box<dyn Fn(usize, &Dist<T>) -> T + Send + Sync>;
type MinimizerFn<T> = Box<dyn Fn(&Dist<T>) -> (Dist<T>, T) + Send + Sync>;

/// Caller-supplied cost. Without a minimizer it can be evaluated but not
/// used for [`inference_gain`].
pub struct CustomCost<T> {
    cost: CostFn<T>,
    bound: Option<T>,
    minimizer: Option<MinimizerFn<T>>,
}

impl<T: Real> CustomCost<T> {
    pub fn new(
        cost: impl Fn(usize, &Dist<T>) -> T + Send + Sync + 'static,
        bound: Option<T>,
    ) -> Self {
        Self {
            cost: Box::new(cost),
            bound,
            minimizer: None,
        }
    }

    pub fn with_minimizer(
        mut self,
        minimizer: impl Fn(&Dist<T>) -> (Dist<T>, T) + Send + Sync + 'static,
    ) -> Self {
        self.minimizer = Some(Box::new(minimizer));
        self
    }
}

impl<T: Real> CostSpec<T> for CustomCost<T> {
    fn cost(&self, s: usize, q: &Dist<T>) -> T {
        (self.cost)(s, q)
    }

    fn bound(&self) -> Option<T> {
        self.bound
    }

    fn minimize(&self, p: &Dist<T>) -> Option<(Dist<T>, T)> {
        self.minimizer.as_ref().map(|m| m(p))
    }
}

/// Per-output-symbol comparison of the local cost gain with its
/// divergence bound `2 sqrt(2) L sqrt(D(P(S|y) || P(S)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBound<T = f64> {
    pub y: usize,
    pub mass: T,
    /// `E_{P(S|y)}[C(S, q0*) - C(S, qy*)]`.
    pub gain: T,
    /// Divergence of the posterior from the prior, in nats.
    pub divergence_nats: T,
    pub bound: T,
    /// `bound - gain`; non-negative when the inequality holds.
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThreatReport<T = f64> {
    pub c0_star: T,
    pub expected_posterior_cost: T,
    pub delta_c: T,
    pub isy_bits: T,
    pub isy_nats: T,
    /// `2 sqrt(2) L sqrt(I(S;Y))` for bounded costs.
    pub gain_bound: Option<T>,
    /// Empty for unbounded costs.
    pub local_bounds: Vec<LocalBound<T>>,
}

/// Cost gain of the optimal adversary observing `Y`, from `P(S,Y)` with
/// private symbols on rows.
pub fn inference_gain<T: Real, C: CostSpec<T> + ?Sized>(
    cost: &C,
    joint_sy: &Joint<T>,
) -> Result<ThreatReport<T>> {
    let prior = joint_sy.row_marginal();
    let (q0, c0) = cost.minimize(&prior).ok_or(Error::UndefinedMinimizer)?;
    let py = joint_sy.col_marginal();
    let scale = cost.bound().map(|l| T::lit(2.0) * T::SQRT_2() * l);

    let mut expected = T::zero();
    let mut local_bounds = Vec::new();
    for (y, &mass) in py.probs().iter().enumerate() {
        if mass <= T::zero() {
            continue;
        }
        let post = joint_sy.row_given_col(y);
        let (qy, cy) = cost.minimize(&post).ok_or(Error::UndefinedMinimizer)?;
        expected += mass * cy;
        if let Some(scale) = scale {
            let gain = cost.expected_cost(&post, &q0) - cost.expected_cost(&post, &qy);
            let divergence_nats = kl_divergence(&post, &prior, LogBase::Nats)?;
            let bound = scale * divergence_nats.sqrt();
            local_bounds.push(LocalBound {
                y,
                mass,
                gain,
                divergence_nats,
                bound,
                margin: bound - gain,
            });
        }
    }

    let isy_nats = mutual_information_in(joint_sy, LogBase::Nats);
    Ok(ThreatReport {
        c0_star: c0,
        expected_posterior_cost: expected,
        delta_c: c0 - expected,
        isy_bits: mutual_information_in(joint_sy, LogBase::Bits),
        isy_nats,
        gain_bound: scale.map(|s| s * isy_nats.sqrt()),
        local_bounds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoglossIdentity<T = f64> {
    pub delta_c_bits: T,
    pub isy_bits: T,
    pub difference: T,
}

/// Log-loss cost gain next to `I(S;Y)`; the two agree exactly.
pub fn logloss_identity_check<T: Real>(joint_sy: &Joint<T>) -> LoglossIdentity<T> {
    let report = inference_gain(&LogLoss::default(), joint_sy).expect("log-loss has a minimizer");
    let isy = crate::dist::mutual_information(joint_sy);
    LoglossIdentity {
        delta_c_bits: report.delta_c,
        isy_bits: isy,
        difference: (report.delta_c - isy).abs(),
    }
}

/// An information quantity tagged with its unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Information<T> {
    Bits(T),
    Nats(T),
}

/// `2 sqrt(2) L sqrt(I)`; the information must be in nats.
pub fn leakage_gain_bound<T: Real>(l: T, info: Information<T>) -> Result<T> {
    let nats = match info {
        Information::Nats(v) => v,
        Information::Bits(_) => return Err(Error::UnitsError),
    };
    if l.is_nan() || l < T::zero() || nats.is_nan() || nats < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "bound and information must be non-negative, got L = {l}, I = {nats}"
        )));
    }
    Ok(T::lit(2.0) * T::SQRT_2() * l * nats.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainBoundCheck<T = f64> {
    pub delta_c: T,
    pub bound: T,
    pub holds: bool,
    /// Every per-symbol divergence bound holds.
    pub local_holds: bool,
    /// Smallest per-symbol margin (negative means violated).
    pub worst_local_margin: T,
    pub report: ThreatReport<T>,
}

/// Checks `delta_C <= 2 sqrt(2) L sqrt(I(S;Y))` and the per-symbol bounds.
pub fn verify_gain_bound<T: Real, C: CostSpec<T> + ?Sized>(
    cost: &C,
    joint_sy: &Joint<T>,
) -> Result<GainBoundCheck<T>> {
    if cost.bound().is_none() {
        return Err(Error::UnboundedCost);
    }
    let report = inference_gain(cost, joint_sy)?;
    let bound = report.gain_bound.expect("bounded cost");
    let worst = report
        .local_bounds
        .iter()
        .map(|b| b.margin)
        .fold(T::infinity(), T::min);
    Ok(GainBoundCheck {
        delta_c: report.delta_c,
        bound,
        holds: report.delta_c <= bound + T::tolerance(),
        local_holds: worst >= -T::tolerance(),
        worst_local_margin: worst,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{dirichlet, dirichlet_joint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn diag2() -> Joint<f64> {
        Joint::<f64>::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap()
    }

    fn crossover() -> Joint<f64> {
        Joint::<f64>::new(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap()
    }

    #[test]
    fn independent_joint_has_no_gain() {
        let j = Joint::<f64>::new(vec![vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        for r in [
            inference_gain(&LogLoss::default(), &j).unwrap(),
            inference_gain(&ErrorProbability, &j).unwrap(),
        ] {
            assert!(r.delta_c.abs() < TOL);
        }
        let check = verify_gain_bound(&ErrorProbability, &j).unwrap();
        assert!(check.holds && check.local_holds);
        assert!(check.bound.abs() < 1e-6);
    }

    #[test]
    fn logloss_on_identical_pair() {
        let r = inference_gain(&LogLoss::default(), &diag2()).unwrap();
        assert!((r.delta_c - 1.0).abs() < TOL);
        assert!((r.c0_star - 1.0).abs() < TOL);
        assert!(r.gain_bound.is_none() && r.local_bounds.is_empty());
    }

    #[test]
    fn error_probability_example() {
        // columns: (0.8, 0.2) and (0.2, 0.8) -> 1 - max = 0.2 each
        let r = inference_gain(&ErrorProbability, &crossover()).unwrap();
        assert!((r.c0_star - 0.5).abs() < TOL);
        assert!((r.expected_posterior_cost - 0.2).abs() < TOL);
        assert!((r.delta_c - 0.3).abs() < TOL);
    }

    #[test]
    fn mode_ties_go_to_smallest_symbol() {
        let p = Dist::new(vec![0.4, 0.4, 0.2]).unwrap();
        let (q, c) = CostSpec::<f64>::minimize(&ErrorProbability, &p).unwrap();
        assert_eq!(q.probs(), &[1.0, 0.0, 0.0]);
        assert!((c - 0.6).abs() < TOL);
    }

    #[test]
    fn identity_examples() {
        let j = Joint::<f64>::new(vec![vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        let id = logloss_identity_check(&j);
        assert!(id.delta_c_bits.abs() < TOL && id.isy_bits.abs() < TOL);
        let id = logloss_identity_check(&diag2());
        assert!((id.delta_c_bits - 1.0).abs() < TOL);
        assert!((id.isy_bits - 1.0).abs() < TOL);
        assert!(id.difference < TOL);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 0..200 {
            let j = dirichlet_joint::<f64, _>(&mut rng, 1 + k % 6, 1 + (k / 6) % 6);
            assert!(logloss_identity_check(&j).difference <= TOL);
        }
    }

    #[test]
    fn gain_bound_examples() {
        assert_eq!(
            leakage_gain_bound(1.0f64, Information::Nats(0.0)).unwrap(),
            0.0
        );
        assert!((leakage_gain_bound(1.0f64, Information::Nats(0.5)).unwrap() - 2.0).abs() < 1e-12);
        // 2 sqrt(2) sqrt(ln 2) = 2.35482
        let v = leakage_gain_bound(1.0f64, Information::Nats(2f64.ln())).unwrap();
        assert!((v - 2.3548).abs() < 1e-4);
        assert!(matches!(
            leakage_gain_bound(1.0f64, Information::Bits(1.0)),
            Err(Error::UnitsError)
        ));
        assert!(leakage_gain_bound(-1.0, Information::Nats(1.0)).is_err());
    }

    #[test]
    fn verify_examples() {
        let check = verify_gain_bound(&ErrorProbability, &diag2()).unwrap();
        assert!((check.delta_c - 0.5).abs() < TOL);
        assert!((check.bound - 2.3548).abs() < 1e-4);
        assert!(check.holds && check.local_holds);

        assert!(matches!(
            verify_gain_bound(&LogLoss::default(), &diag2()),
            Err(Error::UnboundedCost)
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 0..1000 {
            let j = dirichlet_joint::<f64, _>(&mut rng, 2 + k % 5, 1 + k % 7);
            let check = verify_gain_bound(&ErrorProbability, &j).unwrap();
            assert!(check.holds && check.local_holds);
            assert!(check.delta_c >= -TOL);
        }
    }

    #[test]
    fn custom_cost_requires_minimizer() {
        let c = CustomCost::new(
            |s, q: &Dist<f64>| 1.0 - q.probs()[s] * q.probs()[s],
            Some(1.0),
        );
        assert!(matches!(
            inference_gain(&c, &diag2()),
            Err(Error::UndefinedMinimizer)
        ));
        let c = c.with_minimizer(|p| {
            let (k, m) = p.mode();
            (Dist::point(p.len(), k).unwrap(), 1.0 - m)
        });
        assert!(verify_gain_bound(&c, &crossover()).unwrap().holds);
    }

    #[test]
    fn minimizers_beat_random_beliefs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = Dist::new(dirichlet::<f64, _>(&mut rng, 5)).unwrap();
        let logloss = LogLoss {
            base: LogBase::Nats,
        };
        let (_, c_log) = logloss.minimize(&p).unwrap();
        let (_, c_err) = CostSpec::<f64>::minimize(&ErrorProbability, &p).unwrap();
        for _ in 0..100 {
            let q = Dist::new(dirichlet::<f64, _>(&mut rng, 5)).unwrap();
            assert!(logloss.expected_cost(&p, &q) >= c_log - TOL);
            assert!(ErrorProbability.expected_cost(&p, &q) >= c_err - TOL);
        }
    }
}
