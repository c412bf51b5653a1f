//! C-richness of finite-codimensional kernels in `C(K)`, where `K` is a
//! finite union of convergent sequences: limits `0..limits`, and sequence
//! `s` consists of the isolated points `(s, 1), (s, 2), ...` converging to
//! the limit `sequences[s]`.
//!
//! Functionals are measures with finitely many atoms plus geometric tails
//! `c r^n` along sequences.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Limit(usize),
    Term { seq: usize, n: u64 },
}

impl Point {
    pub fn is_isolated(&self) -> bool {
        matches!(self, Point::Term { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KModel {
    pub limits: usize,
    /// Limit index of each sequence.
    pub sequences: Vec<usize>,
}

impl KModel {
    pub fn new(limits: usize, sequences: Vec<usize>) -> Result<Self> {
        let k = Self { limits, sequences };
        k.validate()?;
        Ok(k)
    }

    /// `N ∪ {∞}`: point `n` is `Term { seq: 0, n }`, `∞` is `Limit(0)`.
    pub fn one_point_compactification() -> Self {
        Self {
            limits: 1,
            sequences: vec![0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.limits == 0 {
            return Err(Error::input("K needs at least one limit point"));
        }
        if let Some(&l) = self.sequences.iter().find(|&&l| l >= self.limits) {
            return Err(Error::input(format!("sequence converges to unknown limit {l}")));
        }
        if let Some(l) = (0..self.limits).find(|l| !self.sequences.contains(l)) {
            return Err(Error::input(format!("limit {l} is not the limit of any sequence")));
        }
        Ok(())
    }

    pub fn check_point(&self, p: Point) -> Result<()> {
        let ok = match p {
            Point::Limit(l) => l < self.limits,
            Point::Term { seq, n } => seq < self.sequences.len() && n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!("unknown point {p:?}")))
        }
    }
}

/// Weights `c r^n` at the terms `n >= from` of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometric {
    pub seq: usize,
    pub from: u64,
    pub c: f64,
    pub r: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureModel {
    #[serde(default)]
    pub atoms: Vec<(Point, f64)>,
    #[serde(default)]
    pub geometric: Vec<Geometric>,
}

impl MeasureModel {
    pub fn dirac(p: Point) -> Self {
        Self {
            atoms: vec![(p, 1.0)],
            geometric: Vec::new(),
        }
    }

    fn validate(&self, k: &KModel) -> Result<()> {
        for &(p, w) in &self.atoms {
            k.check_point(p)?;
            if !w.is_finite() {
                return Err(Error::input("non-finite atom weight"));
            }
        }
        for g in &self.geometric {
            k.check_point(Point::Term {
                seq: g.seq,
                n: g.from.max(1),
            })?;
            if !(g.c.is_finite() && g.r.abs() < 1.0) {
                return Err(Error::input("geometric weights need finite c and |r| < 1"));
            }
        }
        Ok(())
    }

    fn atom_weight(&self, p: Point) -> f64 {
        self.atoms.iter().filter(|(q, _)| *q == p).map(|(_, w)| w).sum()
    }

    /// Total weight at a point.
    pub fn weight(&self, p: Point) -> f64 {
        let mut w = self.atom_weight(p);
        if let Point::Term { seq, n } = p {
            for g in self.geometric.iter().filter(|g| g.seq == seq && n >= g.from) {
                w += g.c * g.r.powf(n as f64);
            }
        }
        w
    }

    /// Weight of the terms `n > after` of sequence `seq`.
    fn tail_weight(&self, seq: usize, after: u64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|(p, _)| matches!(*p, Point::Term { seq: s, n } if s == seq && n > after))
            .map(|(_, w)| w)
            .sum();
        let geo: f64 = self
            .geometric
            .iter()
            .filter(|g| g.seq == seq)
            .map(|g| {
                let m = (after + 1).max(g.from).max(1);
                g.c * g.r.powf(m as f64) / (1.0 - g.r)
            })
            .sum();
        atoms + geo
    }

    /// Index beyond which only the geometric families contribute.
    fn explicit_horizon(&self) -> u64 {
        let atoms = self.atoms.iter().filter_map(|(p, _)| match p {
            Point::Term { n, .. } => Some(*n),
            Point::Limit(_) => None,
        });
        let froms = self.geometric.iter().map(|g| g.from);
        atoms.chain(froms).max().unwrap_or(0) + 1
    }

    /// Whether sequence `seq` carries infinitely many nonzero weights. Past
    /// the horizon the weight is a sum of distinct exponentials, which
    /// vanishes identically only if every grouped coefficient does.
    fn tail_is_nonzero(&self, seq: usize) -> bool {
        !self.merged_families(seq).is_empty()
    }

    /// Isolated points carrying nonzero weight; an infinite tail is
    /// represented by its first point past the explicit horizon.
    pub fn isolated_support(&self, k: &KModel) -> Vec<Point> {
        let horizon = self.explicit_horizon();
        let mut out = Vec::new();
        for seq in 0..k.sequences.len() {
            for n in 1..=horizon {
                let p = Point::Term { seq, n };
                if self.weight(p) != 0.0 {
                    out.push(p);
                }
            }
            if self.tail_is_nonzero(seq) {
                out.push(Point::Term { seq, n: horizon + 1 });
            }
        }
        out
    }

    /// Total variation; the geometric tail is summed in closed form.
    pub fn total_variation(&self, k: &KModel) -> f64 {
        let horizon = self.explicit_horizon();
        let limits: f64 = (0..k.limits).map(|l| self.atom_weight(Point::Limit(l)).abs()).sum();
        let mut total = limits;
        for seq in 0..k.sequences.len() {
            for n in 1..=horizon {
                total += self.weight(Point::Term { seq, n }).abs();
            }
            total += self.tail_variation(seq, horizon);
        }
        total
    }

    /// Geometric families of a sequence with equal ratios merged.
    fn merged_families(&self, seq: usize) -> Vec<(f64, f64)> {
        let mut groups: BTreeMap<u64, f64> = BTreeMap::new();
        for g in self.geometric.iter().filter(|g| g.seq == seq && g.r != 0.0) {
            *groups.entry(g.r.to_bits()).or_default() += g.c;
        }
        groups
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(r, c)| (c, f64::from_bits(r)))
            .collect()
    }

    fn tail_variation(&self, seq: usize, after: u64) -> f64 {
        let fams = self.merged_families(seq);
        let remainder = |n: u64| -> f64 {
            fams.iter()
                .map(|(c, r)| c.abs() * r.abs().powf(n as f64) / (1.0 - r.abs()))
                .sum()
        };
        match fams.as_slice() {
            [] => 0.0,
            [_] => remainder(after + 1),
            _ => {
                let mut sum = 0.0f64;
                let mut n = after + 1;
                while remainder(n) > 1e-17 * sum && n <= after + 1_000_000 {
                    sum += fams.iter().map(|(c, r)| c * r.powf(n as f64)).sum::<f64>().abs();
                    n += 1;
                }
                sum + remainder(n)
            }
        }
    }
}

/// The kernel `⋂ ker f_i` is C-rich iff no functional charges an isolated
/// point of `K`.
pub fn c_rich_criterion(k: &KModel, functionals: &[MeasureModel]) -> Result<bool> {
    k.validate()?;
    for f in functionals {
        f.validate(k)?;
    }
    Ok(functionals.iter().all(|f| f.isolated_support(k).is_empty()))
}

/// Tail `{(seq, n) : n >= start}` of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub seq: usize,
    pub start: u64,
}

/// Finitely many points together with finitely many sequence tails.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OpenSet {
    #[serde(default)]
    pub points: Vec<Point>,
    #[serde(default)]
    pub tails: Vec<Tail>,
}

impl OpenSet {
    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
            || matches!(p, Point::Term { seq, n } if self.tails.iter().any(|t| t.seq == seq && n >= t.start))
    }

    fn tail_start(&self, seq: usize) -> Option<u64> {
        self.tails.iter().filter(|t| t.seq == seq).map(|t| t.start.max(1)).min()
    }

    /// A limit point may only belong to the set together with a tail of
    /// every sequence converging to it.
    pub fn validate(&self, k: &KModel) -> Result<()> {
        if self.points.is_empty() && self.tails.is_empty() {
            return Err(Error::input("open set is empty"));
        }
        for &p in &self.points {
            k.check_point(p)?;
        }
        for t in &self.tails {
            k.check_point(Point::Term {
                seq: t.seq,
                n: t.start.max(1),
            })?;
        }
        for &p in &self.points {
            if let Point::Limit(l) = p {
                let missing = (0..k.sequences.len()).find(|&s| k.sequences[s] == l && self.tail_start(s).is_none());
                if let Some(s) = missing {
                    return Err(Error::input(format!(
                        "set is not open: contains limit {l} but no tail of sequence {s}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub epsilon: f64,
    pub start_truncation: u64,
    pub max_truncation: u64,
    /// Peak points tried per truncation level.
    pub max_peaks: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            start_truncation: 64,
            max_truncation: 1024,
            max_peaks: 128,
        }
    }
}

/// A function `0 <= h <= 1` with `max h = 1`. Points of a sequence beyond
/// `truncation[seq]` take the value at its limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub values: Vec<(Point, f64)>,
    pub truncation: Vec<u64>,
    pub peak: Point,
    /// Sup-norm distance from `h` to the kernel.
    pub distance: f64,
}

impl Witness {
    /// `h(p)`.
    pub fn value_on(&self, k: &KModel, p: Point) -> f64 {
        let p = match p {
            Point::Term { seq, n } if n > self.truncation[seq] => Point::Limit(k.sequences[seq]),
            p => p,
        };
        self.values.iter().find(|(q, _)| *q == p).map_or(0.0, |(_, v)| *v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Smallest distance reached, over all truncation levels.
    pub distance: f64,
    /// `(N, distance)` for each truncation level tried.
    pub history: Vec<(u64, f64)>,
    /// Present when `distance < epsilon`.
    pub witness: Option<Witness>,
    /// Lower bound `max_i |f_i(t0)| / ||f_i||` when `U = {t0}` is a single
    /// isolated point.
    pub atom_bound: Option<f64>,
}

/// Searches for a positive norm-one `h` supported in `U` within `epsilon`
/// of `⋂ ker f_i`.
///
/// At truncation `N`, functions are constant past the `N`-th term of each
/// sequence, and the tail mass of each functional is lumped into the limit.
/// Feasible sets grow with `N`, so the reported distances never increase.
pub fn c_rich_witness_search(
    k: &KModel,
    functionals: &[MeasureModel],
    open: &OpenSet,
    config: &WitnessConfig,
) -> Result<WitnessReport> {
    k.validate()?;
    for f in functionals {
        f.validate(k)?;
    }
    open.validate(k)?;
    if !(config.epsilon > 0.0) || config.start_truncation == 0 || config.max_truncation < config.start_truncation {
        return Err(Error::input("invalid witness search configuration"));
    }
    let atom_bound = match open.points.as_slice() {
        [p] if p.is_isolated() && open.tails.is_empty() => Some(
            functionals
                .iter()
                .map(|f| {
                    let tv = f.total_variation(k);
                    if tv > 0.0 {
                        f.weight(*p).abs() / tv
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max),
        ),
        _ => None,
    };
    let mut history = Vec::new();
    let mut best: Option<Witness> = None;
    let mut n = config.start_truncation;
    loop {
        let stage = solve_truncation(k, functionals, open, n, config.max_peaks)?;
        let improved = match &best {
            Some(b) => stage.distance < b.distance,
            None => true,
        };
        let previous = best.as_ref().map(|b| b.distance);
        if improved {
            best = Some(stage);
        }
        let d = best.as_ref().map_or(f64::INFINITY, |b| b.distance);
        history.push((n, d));
        let stable = previous.is_some_and(|p| p - d <= 1e-12);
        if d < config.epsilon || stable || n >= config.max_truncation {
            break;
        }
        n = (2 * n).min(config.max_truncation);
    }
    let distance = best.as_ref().map_or(f64::INFINITY, |b| b.distance);
    Ok(WitnessReport {
        distance,
        history,
        witness: best.filter(|b| b.distance < config.epsilon),
        atom_bound,
    })
}

/// Points of the truncated model, in a fixed order.
fn truncated_points(k: &KModel, truncation: &[u64]) -> Vec<Point> {
    let mut pts: Vec<Point> = (0..k.limits).map(Point::Limit).collect();
    for (seq, &m) in truncation.iter().enumerate() {
        pts.extend((1..=m).map(|n| Point::Term { seq, n }));
    }
    pts
}

fn solve_truncation(
    k: &KModel,
    functionals: &[MeasureModel],
    open: &OpenSet,
    n: u64,
    max_peaks: usize,
) -> Result<Witness> {
    let truncation: Vec<u64> = (0..k.sequences.len())
        .map(|s| open.tail_start(s).map_or(n, |t| n.max(t)))
        .collect();
    let points = truncated_points(k, &truncation);
    // Lumped weights: mu[i][j] for functional i at points[j].
    let mu: Vec<Vec<f64>> = functionals
        .iter()
        .map(|f| {
            points
                .iter()
                .map(|&p| match p {
                    Point::Limit(l) => {
                        f.weight(p)
                            + (0..k.sequences.len())
                                .filter(|&s| k.sequences[s] == l)
                                .map(|s| f.tail_weight(s, truncation[s]))
                                .sum::<f64>()
                    }
                    p => f.weight(p),
                })
                .collect()
        })
        .collect();
    // The truncation reaches every tail start, so a limit in U carries its
    // lumped tail inside U as well.
    let admissible: Vec<bool> = points.iter().map(|&p| open.contains(p)).collect();
    let charged: Vec<bool> = (0..points.len()).map(|j| mu.iter().any(|m| m[j] != 0.0)).collect();
    let scale: Vec<f64> = mu.iter().map(|m| m.iter().map(|w| w.abs()).sum::<f64>()).collect();

    let free_peak = (0..points.len()).find(|&j| admissible[j] && !charged[j]);
    if let Some(j) = free_peak {
        return Ok(Witness {
            values: vec![(points[j], 1.0)],
            truncation,
            peak: points[j],
            distance: 0.0,
        });
    }
    let mut peaks: Vec<usize> = (0..points.len()).filter(|&j| admissible[j]).collect();
    if peaks.is_empty() {
        return Err(Error::input("open set has no point in the model"));
    }
    // Lightest points first: they are the cheapest peaks.
    let load = |j: usize| -> f64 {
        mu.iter()
            .zip(&scale)
            .map(|(m, s)| if *s > 0.0 { m[j].abs() / s } else { 0.0 })
            .fold(0.0, f64::max)
    };
    peaks.sort_by(|&a, &b| load(a).total_cmp(&load(b)).then(a.cmp(&b)));
    peaks.truncate(max_peaks.max(1));

    let active: Vec<usize> = (0..points.len()).filter(|&j| charged[j]).collect();
    // (distance, values, peak)
    type Candidate = (f64, Vec<(Point, f64)>, usize);
    let mut best: Option<Candidate> = None;
    for &peak in &peaks {
        // A peak whose program the solver cannot factor is skipped.
        let Ok((d, vals)) = peak_program(&mu, &active, &admissible, peak) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| d < b.0) {
            best = Some((d, vals.into_iter().map(|(j, v)| (points[j], v)).collect(), peak));
        }
    }
    let (mut distance, values, peak) =
        best.ok_or_else(|| Error::Internal("witness search: no peak program could be solved".into()))?;
    if let [m] = mu.as_slice() {
        // One functional: dist(h, ker f) = |f(h)| / ||f||, exactly.
        let weight: f64 = m.iter().map(|w| w.abs()).sum();
        let fh: f64 = values
            .iter()
            .map(|(p, v)| v * m[points.iter().position(|q| q == p).expect("point of the model")])
            .sum();
        distance = fh.abs() / weight;
    }
    Ok(Witness {
        values,
        truncation,
        peak: points[peak],
        distance,
    })
}

/// `min ||h - y||_inf` over `0 <= h <= 1` with `h(peak) = 1`, `h = 0` off
/// `U`, and `y` in the joint kernel. Uncharged points other than the peak
/// are set to zero, where `y = h` costs nothing.
fn peak_program(
    mu: &[Vec<f64>],
    active: &[usize],
    admissible: &[bool],
    peak: usize,
) -> Result<(f64, Vec<(usize, f64)>)> {
    let mut lp = LinearProgram::new(Sense::Minimize);
    let r = lp.var(1.0, 0.0, f64::INFINITY);
    let mut support: Vec<usize> = active.to_vec();
    if !support.contains(&peak) {
        support.push(peak);
    }
    let mut h = Vec::with_capacity(support.len());
    let mut y = Vec::with_capacity(support.len());
    for &j in &support {
        let hi = if admissible[j] { 1.0 } else { 0.0 };
        let lo = if j == peak { 1.0 } else { 0.0 };
        let hv = lp.var(0.0, lo, hi);
        let yv = lp.free_var(0.0);
        lp.le(&[(hv, 1.0), (yv, -1.0), (r, -1.0)], 0.0);
        lp.le(&[(yv, 1.0), (hv, -1.0), (r, -1.0)], 0.0);
        h.push(hv);
        y.push(yv);
    }
    for m in mu {
        // Weights below the solver's resolution only make the basis singular.
        let scale = support.iter().map(|&j| m[j].abs()).fold(0.0, f64::max);
        let row: Vec<(usize, f64)> = support
            .iter()
            .zip(&y)
            .filter(|&(&j, _)| m[j].abs() > 1e-12 * scale)
            .map(|(&j, &yv)| (yv, m[j] / scale))
            .collect();
        if !row.is_empty() {
            lp.eq(&row, 0.0);
        }
    }
    let sol = lp.solve_expected("witness search")?;
    let vals = support
        .iter()
        .zip(&h)
        .map(|(&j, &hv)| (j, sol.values[hv]))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    Ok((sol.objective.max(0.0), vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Point {
        Point::Term { seq: 0, n }
    }

    const INF: Point = Point::Limit(0);

    fn k() -> KModel {
        KModel::one_point_compactification()
    }

    fn geometric_half() -> MeasureModel {
        MeasureModel {
            atoms: vec![],
            geometric: vec![Geometric {
                seq: 0,
                from: 1,
                c: 1.0,
                r: 0.5,
            }],
        }
    }

    #[test]
    fn criterion_examples() {
        assert!(c_rich_criterion(&k(), &[MeasureModel::dirac(INF)]).unwrap());
        assert!(!c_rich_criterion(&k(), &[MeasureModel::dirac(nat(1))]).unwrap());
        let mixed = MeasureModel {
            atoms: vec![(nat(3), 0.5), (INF, 0.5)],
            geometric: vec![],
        };
        assert!(!c_rich_criterion(&k(), &[mixed]).unwrap());
        assert!(!c_rich_criterion(&k(), &[geometric_half()]).unwrap());
        assert!(c_rich_criterion(&k(), &[]).unwrap());
    }

    #[test]
    fn cancelling_weights_leave_no_support() {
        let f = MeasureModel {
            atoms: vec![(nat(2), 1.0), (nat(2), -1.0)],
            geometric: vec![
                Geometric {
                    seq: 0,
                    from: 1,
                    c: 1.0,
                    r: 0.5,
                },
                Geometric {
                    seq: 0,
                    from: 1,
                    c: -1.0,
                    r: 0.5,
                },
            ],
        };
        assert!(c_rich_criterion(&k(), &[f]).unwrap());
        let g = MeasureModel {
            atoms: vec![(nat(1), -0.5)],
            geometric: vec![Geometric {
                seq: 0,
                from: 1,
                c: 1.0,
                r: 0.5,
            }],
        };
        // weight at 1 cancels; 3 stands for the infinite tail
        assert_eq!(g.isolated_support(&k()), vec![nat(2), nat(3)]);
    }

    #[test]
    fn total_variation_closed_form() {
        assert!((geometric_half().total_variation(&k()) - 1.0).abs() < 1e-15);
        let two = MeasureModel {
            atoms: vec![(INF, -2.0)],
            geometric: vec![
                Geometric {
                    seq: 0,
                    from: 1,
                    c: 1.0,
                    r: 0.5,
                },
                Geometric {
                    seq: 0,
                    from: 1,
                    c: 1.0,
                    r: -0.25,
                },
            ],
        };
        let direct: f64 = 2.0
            + (1..200)
                .map(|n| (0.5f64.powi(n) + (-0.25f64).powi(n)).abs())
                .sum::<f64>();
        assert!((two.total_variation(&k()) - direct).abs() < 1e-14);
    }

    #[test]
    fn unknown_points_are_rejected() {
        let f = MeasureModel::dirac(Point::Limit(3));
        assert!(matches!(c_rich_criterion(&k(), &[f]), Err(Error::Input(_))));
        let f = MeasureModel::dirac(Point::Term { seq: 1, n: 1 });
        assert!(c_rich_criterion(&k(), &[f]).is_err());
        let f = MeasureModel::dirac(nat(0));
        assert!(c_rich_criterion(&k(), &[f]).is_err());
        assert!(KModel::new(2, vec![0]).is_err());
    }

    #[test]
    fn open_set_checks() {
        let f = [MeasureModel::dirac(INF)];
        let cfg = WitnessConfig::default();
        let empty = OpenSet::default();
        assert!(c_rich_witness_search(&k(), &f, &empty, &cfg).is_err());
        let not_open = OpenSet {
            points: vec![INF],
            tails: vec![],
        };
        assert!(matches!(
            c_rich_witness_search(&k(), &f, &not_open, &cfg),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn dirac_at_infinity_has_exact_witness() {
        let u = OpenSet {
            points: vec![],
            tails: vec![Tail { seq: 0, start: 5 }],
        };
        let rep = c_rich_witness_search(&k(), &[MeasureModel::dirac(INF)], &u, &WitnessConfig::default()).unwrap();
        let w = rep.witness.expect("witness");
        assert_eq!(w.distance, 0.0);
        assert!(w.peak.is_isolated());
        assert!(u.contains(w.peak));
        assert_eq!(w.value_on(&k(), INF), 0.0);
    }

    #[test]
    fn dirac_at_one_has_no_witness() {
        let u = OpenSet {
            points: vec![nat(1)],
            tails: vec![],
        };
        let cfg = WitnessConfig {
            epsilon: 0.5,
            ..Default::default()
        };
        let rep = c_rich_witness_search(&k(), &[MeasureModel::dirac(nat(1))], &u, &cfg).unwrap();
        assert!(rep.witness.is_none());
        assert!((rep.distance - 1.0).abs() < 1e-12);
        assert_eq!(rep.atom_bound, Some(1.0));
    }

    #[test]
    fn geometric_weights_single_points() {
        let f = [geometric_half()];
        let cfg = WitnessConfig::default();
        for m in 1..8u64 {
            let u = OpenSet {
                points: vec![nat(m)],
                tails: vec![],
            };
            let rep = c_rich_witness_search(&k(), &f, &u, &cfg).unwrap();
            let mass = 0.5f64.powi(m as i32);
            assert!((rep.distance - mass).abs() < 1e-12, "m={m}: {}", rep.distance);
            assert_eq!(rep.witness.is_some(), mass < 0.1);
        }
    }

    #[test]
    fn geometric_weights_far_tail() {
        let u = OpenSet {
            points: vec![],
            tails: vec![Tail { seq: 0, start: 10 }],
        };
        let rep = c_rich_witness_search(&k(), &[geometric_half()], &u, &WitnessConfig::default()).unwrap();
        assert!(rep.witness.is_some());
        assert!(rep.distance < 1e-15);
    }

    #[test]
    fn two_functionals() {
        // f1 = delta_inf, f2 = delta_1 - delta_2: the kernel contains
        // chi_{1,2}, so U = {1, 2} admits an exact witness.
        let f2 = MeasureModel {
            atoms: vec![(nat(1), 1.0), (nat(2), -1.0)],
            geometric: vec![],
        };
        let fs = [MeasureModel::dirac(INF), f2];
        assert!(!c_rich_criterion(&k(), &fs).unwrap());
        let u = OpenSet {
            points: vec![nat(1), nat(2)],
            tails: vec![],
        };
        let rep = c_rich_witness_search(&k(), &fs, &u, &WitnessConfig::default()).unwrap();
        assert!(rep.distance < 1e-12);
        let w = rep.witness.unwrap();
        assert!((w.value_on(&k(), nat(1)) - 1.0).abs() < 1e-12);
        assert!((w.value_on(&k(), nat(2)) - 1.0).abs() < 1e-12);
        // U = {1} alone: best is h = chi_1, at distance 1/2.
        let u = OpenSet {
            points: vec![nat(1)],
            tails: vec![],
        };
        let rep = c_rich_witness_search(&k(), &fs, &u, &WitnessConfig::default()).unwrap();
        assert!((rep.distance - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distances_do_not_increase() {
        let f = MeasureModel {
            atoms: vec![(INF, 1.0)],
            geometric: vec![Geometric {
                seq: 0,
                from: 1,
                c: 1.0,
                r: 0.9,
            }],
        };
        let u = OpenSet {
            points: vec![INF],
            tails: vec![Tail { seq: 0, start: 3 }],
        };
        let cfg = WitnessConfig {
            epsilon: 1e-30,
            start_truncation: 4,
            max_truncation: 64,
            max_peaks: 16,
        };
        let rep = c_rich_witness_search(&k(), &[f], &u, &cfg).unwrap();
        for w in rep.history.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
    }
}
