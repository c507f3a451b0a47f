//! Annealing-schedule parameterizations.
//!
//! A schedule is a control `u(t) ∈ [0, 1]` on `[0, t_f]` for
//! `H(t) = u(t)·B + (1 − u(t))·C`: `u = 0` is the pure problem Hamiltonian,
//! `u = 1` the pure mixer.

pub mod poly;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_STEEPNESS: f64 = 1e4;

/// Projection onto `[0, 1]`.
pub fn clip01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Which Hamiltonian opens each QAOA layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerOrder {
    /// `e^{−iγC}` then `e^{−iβB}` within each layer.
    #[default]
    CostFirst,
    MixerFirst,
}

impl LayerOrder {
    fn is_default(&self) -> bool {
        *self == LayerOrder::CostFirst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// `u = 0`, evolution under `C`.
    Problem,
    /// `u = 1`, evolution under `B`.
    Mixer,
}

/// A stretch of the time axis with a known control shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlSegment {
    Problem { start: f64, end: f64 },
    Mixer { start: f64, end: f64 },
    /// `u` varies strictly inside `(0, 1)` somewhere in this span.
    Ramp { start: f64, end: f64 },
}

impl ControlSegment {
    pub fn span(&self) -> (f64, f64) {
        match *self {
            ControlSegment::Problem { start, end }
            | ControlSegment::Mixer { start, end }
            | ControlSegment::Ramp { start, end } => (start, end),
        }
    }
}

/// Anything that can drive the annealing Hamiltonian.
pub trait Control {
    fn total_time(&self) -> f64;

    /// `u(t)`; `t` is clamped to `[0, t_f]`.
    fn value_at(&self, t: f64) -> f64;

    /// Partition of `[0, t_f]` into plateaus and ramps, in time order.
    fn segments(&self) -> Vec<ControlSegment> {
        vec![ControlSegment::Ramp {
            start: 0.0,
            end: self.total_time(),
        }]
    }
}

fn check_durations(name: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid(format!("{name} must be finite and nonnegative")));
    }
    Ok(())
}

/// QAOA-style control: alternating pulses of `C` (durations `gammas`) and
/// `B` (durations `betas`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBangBang")]
pub struct BangBangSchedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
    #[serde(default, skip_serializing_if = "LayerOrder::is_default")]
    order: LayerOrder,
}

#[derive(Deserialize)]
struct RawBangBang {
    gammas: Vec<f64>,
    betas: Vec<f64>,
    #[serde(default)]
    order: LayerOrder,
}

impl TryFrom<RawBangBang> for BangBangSchedule {
    type Error = Error;

    fn try_from(raw: RawBangBang) -> Result<Self> {
        BangBangSchedule::with_order(raw.gammas, raw.betas, raw.order)
    }
}

impl BangBangSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        Self::with_order(gammas, betas, LayerOrder::CostFirst)
    }

    pub fn with_order(gammas: Vec<f64>, betas: Vec<f64>, order: LayerOrder) -> Result<Self> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(invalid(format!(
                "need p >= 1 gammas and betas of equal length, got {} and {}",
                gammas.len(),
                betas.len()
            )));
        }
        check_durations("gammas", &gammas)?;
        check_durations("betas", &betas)?;
        let s = BangBangSchedule {
            gammas,
            betas,
            order,
        };
        if s.total_time() <= 0.0 {
            return Err(invalid("bang-bang schedule has zero total time"));
        }
        Ok(s)
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn order(&self) -> LayerOrder {
        self.order
    }

    pub fn total_time(&self) -> f64 {
        self.gammas.iter().sum::<f64>() + self.betas.iter().sum::<f64>()
    }

    /// Pulses in the order they act on the state.
    pub fn pulses(&self) -> Vec<(PulseKind, f64)> {
        let mut out = Vec::with_capacity(2 * self.p());
        for (&g, &b) in self.gammas.iter().zip(&self.betas) {
            match self.order {
                LayerOrder::CostFirst => {
                    out.push((PulseKind::Problem, g));
                    out.push((PulseKind::Mixer, b));
                }
                LayerOrder::MixerFirst => {
                    out.push((PulseKind::Mixer, b));
                    out.push((PulseKind::Problem, g));
                }
            }
        }
        out
    }

    /// Parameters in the `β_1..β_p, γ_1..γ_p` layout.
    pub fn bg(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    /// Shortest schedule with the same measured energy distribution.
    ///
    /// Zero-length pulses are removed and neighbours of the same kind merged.
    /// Leading mixer pulses act trivially on the uniform superposition and
    /// trailing problem pulses are diagonal, so both are dropped. The result
    /// is cost-first and ends on a mixer pulse; `None` if nothing is left.
    pub fn compact(&self) -> Option<BangBangSchedule> {
        let mut merged: Vec<(PulseKind, f64)> = Vec::new();
        for (kind, d) in self.pulses() {
            if d <= 0.0 {
                continue;
            }
            match merged.last_mut() {
                Some((k, acc)) if *k == kind => *acc += d,
                _ => merged.push((kind, d)),
            }
        }
        if merged.first().is_some_and(|(k, _)| *k == PulseKind::Mixer) {
            merged.remove(0);
        }
        if merged.last().is_some_and(|(k, _)| *k == PulseKind::Problem) {
            merged.pop();
        }
        if merged.is_empty() {
            return None;
        }
        let gammas = merged.iter().step_by(2).map(|p| p.1).collect();
        let betas = merged.iter().skip(1).step_by(2).map(|p| p.1).collect();
        BangBangSchedule::new(gammas, betas).ok()
    }
}

impl Control for BangBangSchedule {
    fn total_time(&self) -> f64 {
        BangBangSchedule::total_time(self)
    }

    fn value_at(&self, t: f64) -> f64 {
        let pulses = self.pulses();
        let mut elapsed = 0.0;
        for (kind, d) in &pulses {
            elapsed += d;
            if t < elapsed {
                return kind_value(*kind);
            }
        }
        pulses
            .iter()
            .rev()
            .find(|(_, d)| *d > 0.0)
            .map_or(0.0, |(k, _)| kind_value(*k))
    }

    fn segments(&self) -> Vec<ControlSegment> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for (kind, d) in self.pulses() {
            if d <= 0.0 {
                continue;
            }
            let end = start + d;
            out.push(match kind {
                PulseKind::Problem => ControlSegment::Problem { start, end },
                PulseKind::Mixer => ControlSegment::Mixer { start, end },
            });
            start = end;
        }
        out
    }
}

fn kind_value(kind: PulseKind) -> f64 {
    match kind {
        PulseKind::Problem => 0.0,
        PulseKind::Mixer => 1.0,
    }
}

/// `u(t) = clip01(Σ_j c_j s^j)` with normalized time `s = t / t_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly")]
pub struct PolynomialSchedule {
    coeffs: Vec<f64>,
    t_f: f64,
}

#[derive(Deserialize)]
struct RawPoly {
    coeffs: Vec<f64>,
    t_f: f64,
}

impl TryFrom<RawPoly> for PolynomialSchedule {
    type Error = Error;

    fn try_from(raw: RawPoly) -> Result<Self> {
        PolynomialSchedule::new(raw.coeffs, raw.t_f)
    }
}

impl PolynomialSchedule {
    pub fn new(coeffs: Vec<f64>, t_f: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() % 2 != 0 {
            return Err(invalid(format!(
                "polynomial schedule needs an even, nonzero number of coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("polynomial coefficients must be finite"));
        }
        if !(t_f.is_finite() && t_f > 0.0) {
            return Err(invalid(format!("t_f must be positive, got {t_f}")));
        }
        Ok(PolynomialSchedule { coeffs, t_f })
    }

    /// The ramp `u = 1 − s` padded to `n_coeffs` coefficients.
    pub fn linear_ramp(n_coeffs: usize, t_f: f64) -> Result<Self> {
        let mut coeffs = vec![0.0; n_coeffs];
        if n_coeffs >= 2 {
            coeffs[0] = 1.0;
            coeffs[1] = -1.0;
        }
        PolynomialSchedule::new(coeffs, t_f)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn with_t_f(&self, t_f: f64) -> Result<Self> {
        PolynomialSchedule::new(self.coeffs.clone(), t_f)
    }

    /// Zero-extends the coefficient list (same schedule, more parameters).
    pub fn padded(&self, n_coeffs: usize) -> Result<Self> {
        if n_coeffs < self.coeffs.len() {
            return Err(invalid("cannot pad to fewer coefficients"));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n_coeffs, 0.0);
        PolynomialSchedule::new(coeffs, self.t_f)
    }

    /// Unclipped polynomial at normalized time `s`.
    pub fn raw(&self, s: f64) -> f64 {
        poly::horner(&self.coeffs, s)
    }
}

impl Control for PolynomialSchedule {
    fn total_time(&self) -> f64 {
        self.t_f
    }

    fn value_at(&self, t: f64) -> f64 {
        clip01(self.raw((t / self.t_f).clamp(0.0, 1.0)))
    }

    fn segments(&self) -> Vec<ControlSegment> {
        let mut knots = vec![0.0];
        knots.extend(poly::real_roots_in(&self.coeffs, 0.0, 1.0));
        let mut shifted = self.coeffs.clone();
        shifted[0] -= 1.0;
        knots.extend(poly::real_roots_in(&shifted, 0.0, 1.0));
        knots.push(1.0);
        knots.sort_by(f64::total_cmp);
        knots.dedup();

        let mut out: Vec<ControlSegment> = Vec::new();
        for w in knots.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let mid = self.raw(0.5 * (w[0] + w[1]));
            let (start, end) = (w[0] * self.t_f, w[1] * self.t_f);
            let seg = if mid <= 0.0 {
                ControlSegment::Problem { start, end }
            } else if mid >= 1.0 {
                ControlSegment::Mixer { start, end }
            } else {
                ControlSegment::Ramp { start, end }
            };
            match (out.last_mut(), seg) {
                (Some(ControlSegment::Problem { end: e, .. }), ControlSegment::Problem { end, .. })
                | (Some(ControlSegment::Mixer { end: e, .. }), ControlSegment::Mixer { end, .. })
                | (Some(ControlSegment::Ramp { end: e, .. }), ControlSegment::Ramp { end, .. }) => {
                    *e = end
                }
                _ => out.push(seg),
            }
        }
        out
    }
}

/// Node values on an equally spaced grid over `[0, t_f]`, linearly
/// interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise")]
pub struct PiecewiseSchedule {
    values: Vec<f64>,
    t_f: f64,
}

#[derive(Deserialize)]
struct RawPiecewise {
    values: Vec<f64>,
    t_f: f64,
}

impl TryFrom<RawPiecewise> for PiecewiseSchedule {
    type Error = Error;

    fn try_from(raw: RawPiecewise) -> Result<Self> {
        PiecewiseSchedule::new(raw.values, raw.t_f)
    }
}

impl PiecewiseSchedule {
    pub fn new(values: Vec<f64>, t_f: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(invalid("piecewise schedule needs at least two grid points"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(invalid("piecewise values must lie in [0, 1]"));
        }
        if !(t_f.is_finite() && t_f > 0.0) {
            return Err(invalid(format!("t_f must be positive, got {t_f}")));
        }
        Ok(PiecewiseSchedule { values, t_f })
    }

    /// Samples another control on `n_points` equally spaced nodes.
    pub fn sampled(control: &dyn Control, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(invalid("piecewise schedule needs at least two grid points"));
        }
        let t_f = control.total_time();
        let values = (0..n_points)
            .map(|k| clip01(control.value_at(t_f * k as f64 / (n_points - 1) as f64)))
            .collect();
        PiecewiseSchedule::new(values, t_f)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    /// Interpolation weights at `t`: `(left node, weight of right node)`.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let intervals = self.values.len() - 1;
        let x = (t / self.t_f).clamp(0.0, 1.0) * intervals as f64;
        let k = (x.floor() as usize).min(intervals - 1);
        (k, x - k as f64)
    }
}

impl Control for PiecewiseSchedule {
    fn total_time(&self) -> f64 {
        self.t_f
    }

    fn value_at(&self, t: f64) -> f64 {
        let (k, w) = self.locate(t);
        (1.0 - w) * self.values[k] + w * self.values[k + 1]
    }
}

/// Any of the supported parameterizations, tagged by `kind` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    #[serde(rename = "bangbang")]
    BangBang(BangBangSchedule),
    Poly(PolynomialSchedule),
    Piecewise(PiecewiseSchedule),
}

impl Schedule {
    fn inner(&self) -> &dyn Control {
        match self {
            Schedule::BangBang(s) => s,
            Schedule::Poly(s) => s,
            Schedule::Piecewise(s) => s,
        }
    }
}

impl Control for Schedule {
    fn total_time(&self) -> f64 {
        self.inner().total_time()
    }

    fn value_at(&self, t: f64) -> f64 {
        self.inner().value_at(t)
    }

    fn segments(&self) -> Vec<ControlSegment> {
        self.inner().segments()
    }
}

/// `u(t)` with a domain check.
pub fn eval_schedule(s: &dyn Control, t: f64) -> Result<f64> {
    let t_f = s.total_time();
    if !(0.0..=t_f).contains(&t) {
        return Err(invalid(format!("t = {t} outside [0, {t_f}]")));
    }
    Ok(s.value_at(t))
}

/// Interior switching times of the pulse train, ascending.
pub fn bangbang_to_switch_times(bb: &BangBangSchedule) -> Result<Vec<f64>> {
    let pulses = bb.pulses();
    if pulses.iter().any(|(_, d)| *d <= 0.0) {
        return Err(invalid("switch times need strictly positive pulse durations"));
    }
    let mut t = 0.0;
    Ok(pulses[..pulses.len() - 1]
        .iter()
        .map(|(_, d)| {
            t += d;
            t
        })
        .collect())
}

/// Steep polynomial whose clipped value tracks a cost-first bang-bang train.
///
/// `q(0) = −M` and `q` vanishes at every normalized switch time `τ_j`, so
/// `q(s) = −M · Π (s − τ_j) / Π (−τ_j)`. Between consecutive roots the sign
/// alternates, giving plateaus 0, 1, 0, … once clipped; each transition is
/// `O(1/M)` wide and sits just after its switch time.
pub fn lagrange_emulation(bb: &BangBangSchedule, steepness: f64) -> Result<PolynomialSchedule> {
    if !(steepness.is_finite() && steepness > 0.0) {
        return Err(invalid("steepness must be positive"));
    }
    if bb.order() != LayerOrder::CostFirst {
        return Err(invalid("Lagrange embedding needs a cost-first schedule"));
    }
    let t_f = bb.total_time();
    let taus: Vec<f64> = bangbang_to_switch_times(bb)
        .map_err(|e| Error::DegenerateInterpolation(e.to_string()))?
        .into_iter()
        .map(|t| t / t_f)
        .collect();
    let min_gap = taus
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(taus.first().copied())
        .chain(taus.last().map(|t| 1.0 - t))
        .fold(f64::INFINITY, f64::min);
    if min_gap <= 1e-12 {
        return Err(Error::DegenerateInterpolation(
            "coincident switch times".into(),
        ));
    }
    let denom: f64 = taus.iter().map(|t| -t).product();
    let scale = -steepness / denom;
    let coeffs = poly::from_roots(&taus)
        .into_iter()
        .map(|c| c * scale)
        .collect();
    PolynomialSchedule::new(coeffs, t_f)
}
