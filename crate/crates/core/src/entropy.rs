//! The (3-p)-Renyi entropy, the q-Fisher information, and estimators for the
//! descending slope of the entropy in the p-Wasserstein geometry.
//!
//! The entropy of nu = rho mu is sum U_p(rho_i) mu_i with
//!
//!   U_p(x) = (x^{3-p} - x) / ((3-p)(2-p)),    U_p''(x) = x^{1-p} > 0.
//!
//! On a finite space every measure is absolutely continuous with respect to
//! mu, so the U'(infinity)-weighted singular term of the general functional
//! is identically zero here.
//!
//! Two Fisher forms are provided: the edge form q r^{-q} Ch_q(f^r) driving
//! the exact dissipation identities, and the vertex form
//! sum slope(f)^q / f^{p-1} mu, which matches it only in the refinement
//! limit. The golden case q = (1+sqrt 5)/2 (r = 0) replaces f^r by log f.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{cheeger_energy, slope, DensityField, SlopeSide};
use crate::error::{Error, Result};
use crate::space::Exponents;
use crate::transport::{wasserstein_p, ProbabilityVector};

/// U_p(x) for x >= 0 (continuous extension at 0).
pub fn renyi_integrand(x: f64, p: f64) -> f64 {
    let pow = if x == 0.0 { 0.0 } else { x.powf(3.0 - p) };
    (pow - x) / ((3.0 - p) * (2.0 - p))
}

/// Entropy of a nonnegative density (not necessarily normalized):
/// sum U_p(f_i) mu_i. Rounding-level negatives are clamped to zero.
pub fn renyi_entropy_of_density(f: &DensityField, p: f64) -> Result<f64> {
    Exponents::new(p)?;
    if (p - 2.0).abs() < 1e-12 {
        return Err(Error::UseLogEntropy);
    }
    if !f.is_nonnegative(1e-9) {
        return Err(Error::InvalidWeight(format!(
            "entropy of a density with min value {}",
            f.min_value()
        )));
    }
    Ok(f.values()
        .iter()
        .zip(f.space().measure())
        .map(|(&x, &m)| renyi_integrand(x.max(0.0), p) * m)
        .sum())
}

/// Entropy of a probability measure relative to the vertex measure.
pub fn renyi_entropy(nu: &ProbabilityVector, p: f64) -> Result<f64> {
    renyi_entropy_of_density(&nu.density(), p)
}

/// Edge-based q-Fisher information: q r^{-q} Ch_q(f^r), and q Ch_q(log f)
/// in the golden case r = 0.
pub fn fisher_information(f: &DensityField, exps: &Exponents) -> Result<f64> {
    if exps.golden_case {
        if f.min_value() <= 0.0 {
            return Err(Error::LogOfZero);
        }
        return Ok(exps.q * cheeger_energy(&f.map(f64::ln), exps.q));
    }
    let fr = f.powf_nonneg(exps.r)?;
    Ok(exps.q * exps.r.powf(-exps.q) * cheeger_energy(&fr, exps.q))
}

/// Vertex-based Fisher form: sum over {f > 0} of slope(f)^q / f^{p-1} mu.
pub fn fisher_vertex_form(f: &DensityField, exps: &Exponents) -> Result<f64> {
    if !f.is_nonnegative(1e-9) {
        return Err(Error::InvalidWeight(format!(
            "vertex Fisher form of a density with min value {}",
            f.min_value()
        )));
    }
    let sl = slope(f, SlopeSide::Both);
    let mut total = 0.0;
    for ((&s, &x), &m) in sl
        .values()
        .iter()
        .zip(f.values())
        .zip(f.space().measure())
    {
        if x > 0.0 {
            total += s.powf(exps.q) / x.powf(exps.p - 1.0) * m;
        }
    }
    Ok(total)
}

/// Certified upper estimate for the descending slope of the entropy at the
/// measure rho mu: (sum slope(rho)^q / rho^{p-1} mu)^{1/q}. Requires rho
/// bounded away from zero.
pub fn slope_upper_bound(rho: &DensityField, p: f64) -> Result<f64> {
    let exps = Exponents::new(p)?;
    if rho.min_value() <= 0.0 {
        return Err(Error::DensityNotBoundedBelow);
    }
    Ok(fisher_vertex_form(rho, &exps)?.powf(1.0 / exps.q))
}

/// Outcome of the dense simplex search for the descending slope.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeBruteforce {
    /// max over sampled nu of (U_p(mu0) - U_p(nu))_+ / w_p(mu0, nu)
    /// (plus the K/2 d correction when K != 0); a certified lower bound for
    /// the true supremum
    pub value: f64,
    pub best_candidate: Vec<f64>,
    pub samples: usize,
    pub grid_resolution: usize,
}

fn compositions(n: usize, m: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(n: usize, m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=m {
            prefix.push(k);
            rec(n - 1, m - k, prefix, out);
            prefix.pop();
        }
    }
    rec(n, m, &mut Vec::new(), out);
}

/// Dense sampling of the probability simplex: a regular grid, a refinement
/// cloud around mu0 at geometric scales, and seeded random points. Every
/// candidate is scored with an exact transport solve, so the reported max is
/// an honest lower bound for the slope supremum.
pub fn slope_bruteforce(
    mu0: &ProbabilityVector,
    p: f64,
    k_convexity: f64,
) -> Result<SlopeBruteforce> {
    const MAX: usize = 6;
    let n = mu0.len();
    if n > MAX {
        return Err(Error::BruteforceLimit { n, max: MAX });
    }
    let grid_resolution = match n {
        2 => 2000,
        3 => 60,
        4 => 24,
        5 => 14,
        _ => 10,
    };

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut grid = Vec::new();
    compositions(n, grid_resolution, &mut grid);
    for g in grid {
        candidates.push(g.iter().map(|&k| k as f64 / grid_resolution as f64).collect());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x51_0b_e5);
    for scale in [0.3, 0.1, 0.03, 0.01, 0.003, 0.001] {
        for _ in 0..120 {
            let mut w: Vec<f64> = mu0
                .weights()
                .iter()
                .map(|&x| (x + scale * rng.gen_range(-1.0..1.0)).max(0.0))
                .collect();
            let total: f64 = w.iter().sum();
            if total <= 0.0 {
                continue;
            }
            for x in &mut w {
                *x /= total;
            }
            candidates.push(w);
        }
    }
    for _ in 0..1000 {
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
        let total: f64 = raw.iter().sum();
        candidates.push(raw.iter().map(|x| x / total).collect());
    }

    let base_entropy = renyi_entropy(mu0, p)?;
    let mut best = 0.0f64;
    let mut best_candidate = mu0.weights().to_vec();
    let mut samples = 0;
    for w in candidates {
        let nu = match ProbabilityVector::new(mu0.space().clone(), w) {
            Ok(nu) => nu,
            Err(_) => continue,
        };
        if nu.linf_distance(mu0) < 1e-12 {
            continue;
        }
        let (d, _) = wasserstein_p(mu0, &nu, p)?;
        if d <= 1e-12 {
            continue;
        }
        samples += 1;
        let quotient = (base_entropy - renyi_entropy(&nu, p)?) / d + 0.5 * k_convexity * d;
        if quotient > best {
            best = quotient;
            best_candidate = nu.weights().to_vec();
        }
    }

    Ok(SlopeBruteforce {
        value: best,
        best_candidate,
        samples,
        grid_resolution,
    })
}

/// Bundled entropy diagnostics for one measure.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub value: f64,
    pub fisher: f64,
    pub fisher_vertex: f64,
    pub slope_estimate: f64,
    pub slope_bruteforce: Option<f64>,
}

pub fn entropy_report(
    nu: &ProbabilityVector,
    exps: &Exponents,
    with_bruteforce: bool,
) -> Result<EntropyReport> {
    let rho = nu.density();
    let value = renyi_entropy(nu, exps.p)?;
    let fisher = fisher_information(&rho, exps)?;
    let fisher_vertex = fisher_vertex_form(&rho, exps)?;
    let slope_estimate = slope_upper_bound(&rho, exps.p)?;
    let slope_bruteforce = if with_bruteforce {
        Some(slope_bruteforce(nu, exps.p, 0.0)?.value)
    } else {
        None
    };
    Ok(EntropyReport {
        value,
        fisher,
        fisher_vertex,
        slope_estimate,
        slope_bruteforce,
    })
}
