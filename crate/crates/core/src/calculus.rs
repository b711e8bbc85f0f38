//! Discrete slopes, the q-Cheeger energy and the graph q-Laplacian.
//!
//! Two slope notions coexist on purpose. The vertex slope (max of difference
//! quotients over graph neighbors) mirrors the local Lipschitz constant and
//! only matches edge quantities in the refinement limit. The edge
//! differential carries the Cheeger energy and the Laplacian, and every
//! identity asserted exactly in this crate is stated on edges:
//!
//!   Ch_q(f)     = (1/q) sum_e w_e l_e |delta_e f|^q
//!   (D_q f)(i)  = (1/mu_i) sum_{j ~ i} w_ij |delta_ij f|^{q-2} delta_ij f
//!
//! with delta_e f = (f_j - f_i)/l_e. The Laplacian is minus the L^2(mu)
//! gradient of the energy; summation by parts against any vertex field is
//! exact by the antisymmetric per-edge assembly.
//!
//! For q in (1,2) the edge energy is not differentiable at delta = 0 and is
//! replaced by (delta^2 + eps^2)^{q/2} - eps^q with eps tied to the scale of
//! the input differentials. The substitution error is O(eps^q) per edge.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::MetricMeasureSpace;

/// Relative smoothing scale for the q < 2 edge energy.
const SMOOTHING_REL: f64 = 1e-9;

/// A real-valued function on the vertices of a space.
#[derive(Debug, Clone)]
pub struct DensityField {
    space: Arc<MetricMeasureSpace>,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(space: Arc<MetricMeasureSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWeight("non-finite field value".into()));
        }
        Ok(Self { space, values })
    }

    pub fn constant(space: Arc<MetricMeasureSpace>, c: f64) -> Self {
        let n = space.len();
        Self {
            space,
            values: vec![c; n],
        }
    }

    pub fn from_fn(space: Arc<MetricMeasureSpace>, f: impl FnMut(usize) -> f64) -> Result<Self> {
        let values = (0..space.len()).map(f).collect();
        Self::new(space, values)
    }

    pub fn space(&self) -> &Arc<MetricMeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Integral against the vertex measure.
    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .zip(self.space.measure())
            .map(|(v, m)| v * m)
            .sum()
    }

    /// L^2(mu) inner product.
    pub fn inner_mu(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.space.measure())
            .map(|((a, b), m)| a * b * m)
            .sum()
    }

    /// L^r(mu) norm, r >= 1.
    pub fn lr_norm(&self, r: f64) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(self.space.measure())
            .map(|(v, m)| v.abs().powf(r) * m)
            .sum();
        s.powf(1.0 / r)
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_nonnegative(&self, slack: f64) -> bool {
        self.min_value() >= -slack
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise power with the continuous extension 0^r = 0 for r > 0.
    /// Values in (-slack, 0) caused by solver rounding are treated as 0.
    pub fn powf_nonneg(&self, r: f64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            if v < -1e-9 {
                return Err(Error::InvalidWeight(format!(
                    "negative value {v} in nonnegative power"
                )));
            }
            let v = v.max(0.0);
            out.push(if v == 0.0 { 0.0 } else { v.powf(r) });
        }
        Ok(Self {
            space: self.space.clone(),
            values: out,
        })
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.space.len() != other.space.len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.zip_with(other, |a, b| a + factor * b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }
}

/// Per-edge difference quotients delta_e f = (f_j - f_i)/l_e in the stored
/// edge orientation. Antisymmetric under orientation flip.
#[derive(Debug, Clone)]
pub struct EdgeDifferential {
    space: Arc<MetricMeasureSpace>,
    values: Vec<f64>,
}

impl EdgeDifferential {
    pub fn of(f: &DensityField) -> Self {
        let space = f.space().clone();
        let values = space
            .edges()
            .iter()
            .map(|e| (f.values()[e.j] - f.values()[e.i]) / e.length)
            .collect();
        Self { space, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Difference quotient oriented from `from` to `to` along edge `idx`.
    pub fn oriented(&self, idx: usize, from: usize, to: usize) -> f64 {
        let e = &self.space.edges()[idx];
        if (e.i, e.j) == (from, to) {
            self.values[idx]
        } else {
            debug_assert_eq!((e.j, e.i), (from, to));
            -self.values[idx]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeSide {
    Both,
    Ascending,
    Descending,
}

/// Vertex slope: max over neighbors y of the (one-sided) difference quotient
/// |f(y) - f(x)| / l_xy.
pub fn slope(f: &DensityField, side: SlopeSide) -> DensityField {
    let space = f.space().clone();
    let vals = f.values();
    let values = (0..space.len())
        .map(|x| {
            let mut best: f64 = 0.0;
            for &(y, e) in space.neighbors(x) {
                let d = vals[y] - vals[x];
                let quot = match side {
                    SlopeSide::Both => d.abs(),
                    SlopeSide::Ascending => d.max(0.0),
                    SlopeSide::Descending => (-d).max(0.0),
                } / space.edges()[e].length;
                best = best.max(quot);
            }
            best
        })
        .collect();
    DensityField {
        space,
        values,
    }
}

/// Scalar maps with 0 <= phi' <= 1 used by the interpolation pair and the
/// Laplacian monotonicity test.
#[derive(Debug, Clone, Copy)]
pub enum ContractionMap {
    Zero,
    Identity,
    /// s -> max(s, 0)
    PositivePart,
    /// s -> s / (1 + |s|)
    SoftClamp,
    /// s -> clamp(s, lo, hi), lo <= 0 <= hi so that phi(0) = 0
    Clamp { lo: f64, hi: f64 },
}

impl ContractionMap {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            ContractionMap::Zero => 0.0,
            ContractionMap::Identity => s,
            ContractionMap::PositivePart => s.max(0.0),
            ContractionMap::SoftClamp => s / (1.0 + s.abs()),
            ContractionMap::Clamp { lo, hi } => s.clamp(lo, hi),
        }
    }

    /// Whether phi(0) = 0, the flag required by the monotonicity statement
    /// on infinite-measure spaces.
    pub fn preserves_zero(&self) -> bool {
        self.eval(0.0) == 0.0
    }
}

/// The interpolation pair f~ = f + phi(g - f), g~ = g - phi(g - f).
///
/// On every edge the pair of difference quotients of (f~, g~) is a doubly
/// stochastic mix of those of (f, g), hence for any convex nondecreasing psi
///
///   psi(|delta_e f~|) + psi(|delta_e g~|) <= psi(|delta_e f|) + psi(|delta_e g|)
///
/// holds exactly, edge by edge.
pub fn contraction_pair(
    f: &DensityField,
    g: &DensityField,
    phi: ContractionMap,
) -> Result<(DensityField, DensityField)> {
    let moved = f.zip_with(g, |a, b| phi.eval(b - a))?;
    let f_tilde = f.zip_with(&moved, |a, m| a + m)?;
    let g_tilde = g.zip_with(&moved, |b, m| b - m)?;
    Ok((f_tilde, g_tilde))
}

fn smoothing_eps(diff: &EdgeDifferential, q: f64) -> f64 {
    if q >= 2.0 {
        0.0
    } else {
        let scale = diff.max_abs();
        SMOOTHING_REL * if scale > 0.0 { scale } else { 1.0 }
    }
}

/// |t|^{q-2} t, smoothed to t (t^2 + eps^2)^{(q-2)/2} when eps > 0.
fn edge_flux(t: f64, q: f64, eps: f64) -> f64 {
    if eps > 0.0 {
        t * (t * t + eps * eps).powf(0.5 * (q - 2.0))
    } else if t == 0.0 {
        0.0
    } else {
        t * t.abs().powf(q - 2.0)
    }
}

/// Edge-based q-Cheeger energy (1/q) sum_e w_e l_e |delta_e f|^q.
pub fn cheeger_energy(f: &DensityField, q: f64) -> f64 {
    let diff = EdgeDifferential::of(f);
    let mut sum = 0.0;
    for (e, &d) in f.space().edges().iter().zip(diff.values()) {
        sum += e.conductance * e.length * d.abs().powf(q);
    }
    sum / q
}

/// Smoothed energy used by the proximal solver for q < 2; equals
/// `cheeger_energy` when eps = 0.
pub(crate) fn cheeger_energy_smoothed(f: &DensityField, q: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        return cheeger_energy(f, q);
    }
    let diff = EdgeDifferential::of(f);
    let floor = eps.powf(q);
    let mut sum = 0.0;
    for (e, &d) in f.space().edges().iter().zip(diff.values()) {
        sum += e.conductance * e.length * ((d * d + eps * eps).powf(0.5 * q) - floor);
    }
    sum / q
}

pub(crate) fn q_laplacian_with_eps(f: &DensityField, q: f64, eps: f64) -> DensityField {
    let space = f.space().clone();
    let diff = EdgeDifferential::of(f);
    let mut acc = vec![0.0; space.len()];
    for (e, &d) in space.edges().iter().zip(diff.values()) {
        let flux = e.conductance * edge_flux(d, q, eps);
        acc[e.i] += flux;
        acc[e.j] -= flux;
    }
    for (a, m) in acc.iter_mut().zip(space.measure()) {
        *a /= m;
    }
    DensityField {
        space,
        values: acc,
    }
}

pub(crate) fn auto_eps(f: &DensityField, q: f64) -> f64 {
    smoothing_eps(&EdgeDifferential::of(f), q)
}

/// Graph q-Laplacian, minus the L^2(mu) gradient of the edge Cheeger energy:
///
///   (D_q f)(i) = (1/mu_i) sum_{j ~ i} w_ij |delta_ij f|^{q-2} delta_ij f.
///
/// For q in (1,2) the flux is evaluated with the smoothed energy; the
/// smoothing scale is proportional to max_e |delta_e f|, which keeps the
/// homogeneity D_q(c f) = c |c|^{q-2} D_q f exact.
pub fn q_laplacian(f: &DensityField, q: f64) -> DensityField {
    q_laplacian_with_eps(f, q, auto_eps(f, q))
}

/// Edge pairing sum_e w_e l_e |delta_e f|^{q-2} (delta_e f)(delta_e g).
///
/// Equals -<g, D_q f>_{L^2(mu)} by summation by parts, and is nonnegative
/// whenever g = phi(f) for a nondecreasing phi.
pub fn dissipation_pairing(phi_of_f: &DensityField, f: &DensityField, q: f64) -> f64 {
    let eps = smoothing_eps(&EdgeDifferential::of(f), q);
    dissipation_pairing_with_eps(phi_of_f, f, q, eps)
}

pub(crate) fn dissipation_pairing_with_eps(
    phi_of_f: &DensityField,
    f: &DensityField,
    q: f64,
    eps: f64,
) -> f64 {
    let df = EdgeDifferential::of(f);
    let dg = EdgeDifferential::of(phi_of_f);
    let mut sum = 0.0;
    for ((e, &a), &b) in f.space().edges().iter().zip(df.values()).zip(dg.values()) {
        sum += e.conductance * e.length * edge_flux(a, q, eps) * b;
    }
    sum
}

/// <D_q g - D_q f, phi(g - f)>_{L^2(mu)}, which is nonpositive for any
/// nondecreasing Lipschitz phi with phi(0) = 0. Both Laplacians are
/// evaluated with a common smoothing scale so the per-edge monotonicity
/// argument applies verbatim.
pub fn laplacian_monotonicity_gap(
    f: &DensityField,
    g: &DensityField,
    phi: ContractionMap,
    q: f64,
) -> Result<f64> {
    let eps = smoothing_eps(&EdgeDifferential::of(f), q)
        .max(smoothing_eps(&EdgeDifferential::of(g), q));
    let lap_f = q_laplacian_with_eps(f, q, eps);
    let lap_g = q_laplacian_with_eps(g, q, eps);
    let h = f.zip_with(g, |a, b| phi.eval(b - a))?;
    let diff = lap_g.zip_with(&lap_f, |a, b| a - b)?;
    Ok(diff.inner_mu(&h))
}
