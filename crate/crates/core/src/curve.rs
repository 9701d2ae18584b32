//! Trade-off curves in the `(I(X;Y), I(S;Y))` plane.

use crate::dist::Channel;
use crate::error::Result;
use crate::partition::Partition;
use crate::scalar::Real;

/// One achieved operating point and the deterministic mapping behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint<T = f64> {
    /// Constraint level that produced the point (disclosure floor for the
    /// funnel, retention floor for the bottleneck), if any.
    pub constraint: Option<T>,
    /// Disclosure `I(X;Y)` in bits.
    pub ixy: T,
    /// Leakage `I(S;Y)` in bits.
    pub isy: T,
    pub partition: Partition,
}

impl<T: Real> CurvePoint<T> {
    pub fn channel(&self) -> Result<Channel<T>> {
        Channel::from_partition(&self.partition)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TradeoffCurve<T = f64> {
    pub points: Vec<CurvePoint<T>>,
}

impl<T: Real> TradeoffCurve<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CurvePoint<T>> {
        self.points.iter()
    }

    /// `(ixy, isy)` pairs in stored order.
    pub fn pairs(&self) -> Vec<(T, T)> {
        self.points.iter().map(|p| (p.ixy, p.isy)).collect()
    }
}

/// Which side of the achievable region a curve estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Envelope {
    Lower,
    Upper,
}

/// Sorted, de-duplicated abscissae with one ordinate each. Coincident
/// abscissae keep the extreme ordinate for the given envelope.
fn polyline<T: Real>(points: &[(T, T)], side: Envelope) -> Vec<(T, T)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.partial_cmp(&b.1).unwrap())
    });
    let mut out: Vec<(T, T)> = Vec::with_capacity(pts.len());
    for (x, y) in pts {
        match out.last_mut() {
            Some(last) if (x - last.0).abs() <= T::tie_tolerance() => {
                last.1 = match side {
                    Envelope::Lower => last.1.min(y),
                    Envelope::Upper => last.1.max(y),
                };
            }
            _ => out.push((x, y)),
        }
    }
    out
}

/// Piecewise-linear interpolation, clamped to the end ordinates outside the
/// sampled range.
fn interpolate<T: Real>(line: &[(T, T)], x: T) -> T {
    let first = line[0];
    let last = line[line.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let k = line.partition_point(|p| p.0 <= x);
    let (x0, y0) = line[k - 1];
    let (x1, y1) = line[k];
    if x1 - x0 <= T::zero() {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Comparison of a lower and an upper curve at one disclosure level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapPoint<T = f64> {
    pub ixy: T,
    pub lower_isy: T,
    pub upper_isy: T,
    /// `upper_isy - lower_isy`.
    pub gap: T,
}

/// Evaluates both curves at every abscissa of either curve.
///
/// Each curve is read as a polyline through its points (sorted by `I(X;Y)`),
/// clamped flat beyond its sampled range.
pub fn envelope_gap<T: Real>(
    lower: &TradeoffCurve<T>,
    upper: &TradeoffCurve<T>,
) -> Vec<GapPoint<T>> {
    if lower.is_empty() || upper.is_empty() {
        return Vec::new();
    }
    let lo = polyline(&lower.pairs(), Envelope::Lower);
    let up = polyline(&upper.pairs(), Envelope::Upper);
    let mut xs: Vec<T> = lo.iter().chain(up.iter()).map(|p| p.0).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() <= T::tie_tolerance());
    xs.into_iter()
        .map(|x| {
            let l = interpolate(&lo, x);
            let u = interpolate(&up, x);
            GapPoint {
                ixy: x,
                lower_isy: l,
                upper_isy: u,
                gap: u - l,
            }
        })
        .collect()
}

/// For each constraint `R_k`, the best run (lowest leakage) among all runs
/// that also meet `I(X;Y) >= R_k`. Ties prefer larger disclosure.
pub(crate) fn cleanup_lower<T: Real>(runs: &[CurvePoint<T>]) -> Vec<CurvePoint<T>> {
    runs.iter()
        .map(|target| {
            let floor = target.constraint.unwrap_or(target.ixy);
            let best = runs
                .iter()
                .filter(|p| p.ixy >= floor - T::tolerance())
                .fold(None::<&CurvePoint<T>>, |best, p| match best {
                    None => Some(p),
                    Some(b) if p.isy < b.isy - T::tie_tolerance() => Some(p),
                    Some(b)
                        if (p.isy - b.isy).abs() <= T::tie_tolerance()
                            && p.ixy > b.ixy + T::tie_tolerance() =>
                    {
                        Some(p)
                    }
                    keep => keep,
                })
                .unwrap_or(target);
            CurvePoint {
                constraint: target.constraint,
                ..best.clone()
            }
        })
        .collect()
}

/// For each constraint `Delta_k`, the run with least disclosure among all
/// runs that also meet `I(S;Y) >= Delta_k`. Ties prefer larger leakage.
pub(crate) fn cleanup_upper<T: Real>(runs: &[CurvePoint<T>]) -> Vec<CurvePoint<T>> {
    runs.iter()
        .map(|target| {
            let floor = target.constraint.unwrap_or(target.isy);
            let best = runs
                .iter()
                .filter(|p| p.isy >= floor - T::tolerance())
                .fold(None::<&CurvePoint<T>>, |best, p| match best {
                    None => Some(p),
                    Some(b) if p.ixy < b.ixy - T::tie_tolerance() => Some(p),
                    Some(b)
                        if (p.ixy - b.ixy).abs() <= T::tie_tolerance()
                            && p.isy > b.isy + T::tie_tolerance() =>
                    {
                        Some(p)
                    }
                    keep => keep,
                })
                .unwrap_or(target);
            CurvePoint {
                constraint: target.constraint,
                ..best.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: f64, x: f64, y: f64) -> CurvePoint<f64> {
        CurvePoint {
            constraint: Some(c),
            ixy: x,
            isy: y,
            partition: Partition::identity(1),
        }
    }

    #[test]
    fn interpolation_is_clamped() {
        let line = vec![(1.0, 1.0), (3.0, 2.0)];
        assert_eq!(interpolate(&line, 0.0), 1.0);
        assert_eq!(interpolate(&line, 2.0), 1.5);
        assert_eq!(interpolate(&line, 9.0), 2.0);
    }

    #[test]
    fn gap_on_union_of_abscissae() {
        let lower = TradeoffCurve {
            points: vec![pt(0.0, 0.0, 0.0), pt(2.0, 2.0, 0.5)],
        };
        let upper = TradeoffCurve {
            points: vec![pt(0.0, 0.0, 0.0), pt(1.0, 1.0, 1.0)],
        };
        let gap = envelope_gap(&lower, &upper);
        let xs: Vec<f64> = gap.iter().map(|g| g.ixy).collect();
        assert_eq!(xs, vec![0.0, 1.0, 2.0]);
        assert_eq!(gap[1].lower_isy, 0.25);
        assert_eq!(gap[1].upper_isy, 1.0);
        assert_eq!(gap[2].gap, 0.5);
    }

    #[test]
    fn lower_cleanup_takes_dominating_run() {
        // The run at floor 1.0 leaks more than the run at floor 2.0.
        let runs = vec![pt(1.0, 1.2, 0.9), pt(2.0, 2.1, 0.4)];
        let clean = cleanup_lower(&runs);
        assert_eq!(clean[0].isy, 0.4);
        assert_eq!(clean[0].constraint, Some(1.0));
        assert_eq!(clean[1].isy, 0.4);
    }

    #[test]
    fn upper_cleanup_takes_dominating_run() {
        let runs = vec![pt(0.5, 2.0, 0.6), pt(0.7, 1.5, 0.8)];
        let clean = cleanup_upper(&runs);
        assert_eq!(clean[0].ixy, 1.5);
        assert_eq!(clean[1].ixy, 1.5);
    }
}
