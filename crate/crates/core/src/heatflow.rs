//! Gradient flow of the q-Cheeger energy in L^2(mu) via implicit Euler.
//!
//! One step from f solves
//!
//!   min_g  Ch_q(g) + ||g - f||^2_{L^2(mu)} / (2 tau)
//!
//! to a first-order residual below the configured tolerance. The minimizer
//! satisfies g = f + tau D_q g, so mass is conserved by the null mass of the
//! Laplacian; the solver moves along L^2(mu) gradients starting from f, which
//! have zero mu-mean, so conservation holds for the iterates as well and does
//! not depend on how tightly the subproblem is solved.
//!
//! The per-step diagnostics realize the flow calculus: mass, energy, Renyi
//! entropy, both Fisher forms, and the weighted moment M^q(t) with its
//! Gronwall bound S_t.

use crate::calculus::{
    auto_eps, cheeger_energy, cheeger_energy_smoothed, q_laplacian_with_eps,
    DensityField,
};
use crate::entropy::{fisher_information, fisher_vertex_form, renyi_entropy_of_density};
use crate::error::{Error, Result};
use crate::space::{exp_p, Exponents};
use serde::Serialize;

/// Configuration of the proximal (implicit Euler) subproblem solver.
#[derive(Debug, Clone, Copy)]
pub struct ProximalConfig {
    /// time step tau > 0
    pub step: f64,
    /// termination threshold on the L^2(mu) norm of the subproblem gradient
    pub tol: f64,
    pub max_iters: usize,
    /// override for the q < 2 smoothing scale; None picks it from the data
    pub smoothing: Option<f64>,
}

impl ProximalConfig {
    pub fn new(step: f64) -> Self {
        Self {
            step,
            tol: 1e-11,
            max_iters: 500_000,
            smoothing: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "proximal config needs positive step and tol, got step = {}, tol = {}",
                self.step, self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProxInfo {
    pub residual: f64,
    pub iterations: usize,
    pub smoothing: f64,
}

/// Per-state diagnostics along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct StepDiagnostics {
    pub time: f64,
    pub mass: f64,
    pub cheeger: f64,
    pub entropy: Option<f64>,
    pub fisher: Option<f64>,
    pub fisher_vertex: Option<f64>,
    /// weighted moment  M^q(t) = sum V^p f mu
    pub moment: Option<f64>,
    /// Gronwall bound S_t for the moment
    pub moment_bound: Option<f64>,
    /// right-endpoint integral of the vertex-form Fisher information
    pub dissipation_integral: Option<f64>,
    /// residual of the proximal solve producing this state (0 at t = 0)
    pub residual: f64,
    /// transport distance from the previous state (minimizing-movement flows)
    pub wp_increment: Option<f64>,
}

/// Time-stamped states of a flow with their diagnostics.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityField>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl FlowTrajectory {
    pub fn last_state(&self) -> &DensityField {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn subproblem_gradient(g: &DensityField, f: &DensityField, tau: f64, q: f64, eps: f64) -> DensityField {
    let lap = q_laplacian_with_eps(g, q, eps);
    g.zip_with(f, |gv, fv| (gv - fv) / tau)
        .expect("same space")
        .zip_with(&lap, |a, l| a - l)
        .expect("same space")
}

/// Per-edge second derivative of the (smoothed) edge energy integrand at
/// the current differentials: (q-1)|d|^{q-2} for the plain energy,
/// (d^2+eps^2)^{(q-4)/2}((q-1)d^2 + eps^2) for the smoothed one.
fn hessian_coefficients(g: &DensityField, q: f64, eps: f64) -> Vec<f64> {
    crate::calculus::EdgeDifferential::of(g)
        .values()
        .iter()
        .map(|&d| {
            if eps > 0.0 {
                (d * d + eps * eps).powf(0.5 * (q - 4.0)) * ((q - 1.0) * d * d + eps * eps)
            } else if d == 0.0 {
                if q == 2.0 {
                    q - 1.0
                } else {
                    0.0
                }
            } else {
                (q - 1.0) * d.abs().powf(q - 2.0)
            }
        })
        .collect()
}

/// Hessian-vector product of the subproblem in the L^2(mu) geometry:
/// (H v)_i = v_i / tau + (1/mu_i) sum_{j~i} w_ij coeff_ij (v_i - v_j)/l_ij.
/// H is positive definite (>= 1/tau) and maps fields of zero mu-mean to
/// fields of zero mu-mean.
fn hessian_apply(v: &DensityField, coeff: &[f64], tau: f64) -> DensityField {
    let space = v.space().clone();
    let mut acc: Vec<f64> = v.values().iter().map(|x| x / tau).collect();
    for (e, &c) in space.edges().iter().zip(coeff) {
        let flux = e.conductance * c * (v.values()[e.i] - v.values()[e.j]) / e.length;
        acc[e.i] += flux / space.measure()[e.i];
        acc[e.j] -= flux / space.measure()[e.j];
    }
    DensityField::from_fn(space, |i| acc[i]).expect("finite")
}

/// Conjugate gradients in the L^2(mu) inner product for H s = b with the
/// implicit Hessian. All iterates inherit the zero mu-mean of b.
fn cg_solve(
    b: &DensityField,
    coeff: &[f64],
    tau: f64,
    rel_tol: f64,
    max_iters: usize,
) -> DensityField {
    let mut x = DensityField::constant(b.space().clone(), 0.0);
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rr = r.inner_mu(&r);
    let target = rel_tol * rel_tol * rr;
    for _ in 0..max_iters {
        if rr <= target || rr == 0.0 {
            break;
        }
        let hp = hessian_apply(&p, coeff, tau);
        let php = p.inner_mu(&hp);
        if !(php > 0.0) {
            break;
        }
        let alpha = rr / php;
        x = x.add_scaled(&p, alpha).expect("same space");
        r = r.add_scaled(&hp, -alpha).expect("same space");
        let rr_new = r.inner_mu(&r);
        let beta = rr_new / rr;
        p = r.add_scaled(&p, beta).expect("same space");
        rr = rr_new;
    }
    x
}

fn mu_norm(v: &DensityField) -> f64 {
    v.inner_mu(v).sqrt()
}

/// One implicit Euler step of the q-heat flow, with solve details.
pub fn implicit_step_detailed(
    f: &DensityField,
    cfg: &ProximalConfig,
    q: f64,
) -> Result<(DensityField, ProxInfo)> {
    cfg.validate()?;
    let tau = cfg.step;
    let eps = cfg.smoothing.unwrap_or_else(|| auto_eps(f, q));

    let objective = |g: &DensityField| -> f64 {
        let quad = g
            .values()
            .iter()
            .zip(f.values())
            .zip(f.space().measure())
            .map(|((gv, fv), m)| (gv - fv) * (gv - fv) * m)
            .sum::<f64>();
        cheeger_energy_smoothed(g, q, eps) + 0.5 * quad / tau
    };

    // Damped Newton with CG inner solves. The gradient has zero mu-mean
    // along the iteration and the Hessian preserves that mean, so the mass
    // telescoping of the implicit scheme is exact regardless of how tightly
    // each subproblem is solved.
    let mut g = f.clone();
    let mut grad = subproblem_gradient(&g, f, tau, q, eps);
    let mut res = mu_norm(&grad);
    let mut obj = objective(&g);

    let mut iterations = 0;
    let mut best_res = res;
    let mut last_progress = 0usize;
    while res > cfg.tol {
        if iterations >= cfg.max_iters || iterations - last_progress > 40 {
            return Err(Error::ProxNotConverged {
                residual: best_res.min(res),
                tol: cfg.tol,
                iterations,
            });
        }
        iterations += 1;

        let coeff = hessian_coefficients(&g, q, eps);
        let step = cg_solve(&grad, &coeff, tau, 1e-2, 4 * g.len() + 32);
        let slope = grad.inner_mu(&step);
        if !(slope > 0.0) {
            break;
        }

        // Backtracking on the Newton step, accepted on sufficient objective
        // decrease or plain residual decrease (the latter carries the
        // iteration once objective differences sink below rounding).
        let mut accepted = None;
        let mut trial = 1.0f64;
        for _ in 0..60 {
            let cand = g.add_scaled(&step, -trial).expect("same space");
            let obj_c = objective(&cand);
            let grad_c = subproblem_gradient(&cand, f, tau, q, eps);
            let res_c = mu_norm(&grad_c);
            let armijo =
                obj_c <= obj - 1e-4 * trial * slope + 4.0 * f64::EPSILON * obj.abs();
            if armijo || res_c < res * (1.0 - 1e-3) {
                accepted = Some((cand, obj_c, grad_c, res_c));
                break;
            }
            trial *= 0.5;
        }
        let Some((cand, obj_c, grad_c, res_c)) = accepted else {
            // numerically stationary
            break;
        };

        g = cand;
        obj = obj_c;
        grad = grad_c;
        res = res_c;
        if res < best_res * (1.0 - 1e-3) {
            best_res = res;
            last_progress = iterations;
        }
    }

    if res > cfg.tol {
        return Err(Error::ProxNotConverged {
            residual: res,
            tol: cfg.tol,
            iterations,
        });
    }

    Ok((
        g,
        ProxInfo {
            residual: res,
            iterations,
            smoothing: eps,
        },
    ))
}

/// One implicit Euler step of the q-heat flow: the unique minimizer of
/// Ch_q(g) + ||g - f||^2 / (2 tau).
pub fn implicit_step(f: &DensityField, cfg: &ProximalConfig, q: f64) -> Result<DensityField> {
    implicit_step_detailed(f, cfg, q).map(|(g, _)| g)
}

/// Constants of the moment bound S_t, fixed by the initial data and the
/// weight V.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentBound {
    pub c_p: f64,
    pub l_p: f64,
    pub i_p: f64,
    pub z: f64,
    pub lip_v: f64,
    /// S_0; the bound at time t is s0 * exp(c_p * lip_v^q * t)
    pub s0: f64,
    /// integral of exp_p(-V^p) d mu
    pub weight_integral: f64,
    /// integral of V^p exp_p(-V^p) d mu (the stronger condition; reported,
    /// not asserted)
    pub weight_moment_integral: f64,
    /// conjugate exponent, the power of Lip(V) in the growth factor
    pub q: f64,
}

impl MomentBound {
    pub fn at(&self, t: f64) -> f64 {
        self.s0 * (self.c_p * self.lip_v.powf(self.q) * t).exp()
    }
}

/// Graph Lipschitz constant: max over edges of |V_j - V_i| / l_e. For the
/// shortest-path metric this equals the metric Lipschitz constant.
pub fn graph_lipschitz_constant(v: &DensityField) -> f64 {
    crate::calculus::EdgeDifferential::of(v).max_abs()
}

/// Assembles the moment-bound constants for weight V, exponent p and initial
/// datum f0 (nonnegative). For p in (2,3) the hypothesis
/// `int exp_p(-V^p) d mu <= 1` is enforced.
pub fn moment_bound(f0: &DensityField, v: &DensityField, p: f64) -> Result<MomentBound> {
    let exps = Exponents::new(p)?;
    if (p - 2.0).abs() < 1e-12 {
        return Err(Error::UseLogEntropy);
    }
    if v.min_value() <= 0.0 {
        return Err(Error::InvalidConfig(
            "weight V must be bounded below by a positive constant".into(),
        ));
    }
    if !f0.is_nonnegative(0.0) {
        return Err(Error::InvalidConfig(
            "moment bound needs nonnegative initial data".into(),
        ));
    }
    let mu = f0.space().measure();
    let q = exps.q;

    let mut weight_integral = 0.0;
    let mut weight_moment_integral = 0.0;
    for (i, &m) in mu.iter().enumerate() {
        let vp = v.values()[i].powf(p);
        let e = exp_p(-vp, p)?;
        weight_integral += e * m;
        weight_moment_integral += vp * e * m;
    }
    if p > 2.0 && weight_integral > 1.0 {
        return Err(Error::WeightConditionViolated {
            integral: weight_integral,
        });
    }

    let mass0 = f0.mass();
    let i_p = if p < 2.0 {
        0.0
    } else {
        (p - 2.0) / (3.0 - p) * weight_moment_integral
    };
    let l_p = (1.0 / (2.0 - p)).max(1.0);
    let ratio = mass0 / weight_integral;
    let z = if p > 2.0 { ratio } else { ratio.min(1.0) };

    let moment0 = weighted_moment(f0, v, p);
    let entropy_term: f64 = f0
        .values()
        .iter()
        .zip(mu)
        .map(|(&x, &m)| {
            let pow = if x == 0.0 { 0.0 } else { x.powf(3.0 - p) };
            (pow - x) / (2.0 - p) * m
        })
        .sum();
    let s0 = i_p + entropy_term + p * moment0 + mass0 * l_p / z;
    let c_p = (p / (3.0 - p)).powf(q) / q;

    Ok(MomentBound {
        c_p,
        l_p,
        i_p,
        z,
        lip_v: graph_lipschitz_constant(v),
        s0,
        weight_integral,
        weight_moment_integral,
        q,
    })
}

/// sum V^p f mu
pub fn weighted_moment(f: &DensityField, v: &DensityField, p: f64) -> f64 {
    f.values()
        .iter()
        .zip(v.values())
        .zip(f.space().measure())
        .map(|((&fv, &vv), &m)| vv.powf(p) * fv * m)
        .sum()
}

fn state_diagnostics(
    state: &DensityField,
    exps: &Exponents,
    time: f64,
    residual: f64,
    weight: Option<(&DensityField, &MomentBound)>,
    dissipation_integral: Option<f64>,
) -> StepDiagnostics {
    let nonneg = state.is_nonnegative(1e-9);
    let entropy = if nonneg && (exps.p - 2.0).abs() > 1e-12 {
        renyi_entropy_of_density(state, exps.p).ok()
    } else {
        None
    };
    let fisher = if nonneg {
        fisher_information(state, exps).ok()
    } else {
        None
    };
    let fisher_vertex = if nonneg {
        fisher_vertex_form(state, exps).ok()
    } else {
        None
    };
    let (moment, moment_bound) = match weight {
        Some((v, bound)) => (
            Some(weighted_moment(state, v, exps.p)),
            Some(bound.at(time)),
        ),
        None => (None, None),
    };
    StepDiagnostics {
        time,
        mass: state.mass(),
        cheeger: cheeger_energy(state, exps.q),
        entropy,
        fisher,
        fisher_vertex,
        moment,
        moment_bound,
        dissipation_integral,
        residual,
        wp_increment: None,
    }
}

/// Runs the q-heat flow to time T (ceil(T / tau) implicit steps) and records
/// diagnostics at every state. The flow exponent is exps.q; the entropy and
/// Fisher diagnostics use the conjugate pair. If a weight V is supplied the
/// moment M^q(t) and its bound S_t are recorded as well (p != 2 required for
/// the bound constants).
pub fn run_flow(
    f0: &DensityField,
    t_final: f64,
    cfg: &ProximalConfig,
    exps: &Exponents,
    weight: Option<&DensityField>,
) -> Result<FlowTrajectory> {
    cfg.validate()?;
    if !(t_final > 0.0) {
        return Err(Error::InvalidConfig(format!("T must be positive, got {t_final}")));
    }
    let bound = match weight {
        Some(v) => Some(moment_bound(f0, v, exps.p)?),
        None => None,
    };
    let weight_pair = weight.zip(bound.as_ref());

    // The smoothing scale is frozen from the initial datum for the whole
    // trajectory. Fast-diffusion flows (q < 2) flatten, and re-deriving eps
    // from each state would collapse it along with the data, leaving the
    // subproblems degenerate at machine precision.
    let mut cfg = *cfg;
    cfg.smoothing = Some(cfg.smoothing.unwrap_or_else(|| auto_eps(f0, exps.q)));

    let steps = (t_final / cfg.step - 1e-12).ceil().max(1.0) as usize;
    let track_dissipation = f0.is_nonnegative(1e-9);

    let mut times = vec![0.0];
    let mut states = vec![f0.clone()];
    let mut diagnostics = vec![state_diagnostics(
        f0,
        exps,
        0.0,
        0.0,
        weight_pair,
        if track_dissipation { Some(0.0) } else { None },
    )];

    let mut dissipation = 0.0;
    for k in 0..steps {
        let (next, info) = implicit_step_detailed(states.last().unwrap(), &cfg, exps.q)?;
        let t = (k + 1) as f64 * cfg.step;
        let diss = if track_dissipation {
            match fisher_vertex_form(&next, exps) {
                Ok(fv) => {
                    dissipation += cfg.step * fv;
                    Some(dissipation)
                }
                Err(_) => None,
            }
        } else {
            None
        };
        diagnostics.push(state_diagnostics(
            &next,
            exps,
            t,
            info.residual,
            weight_pair,
            diss,
        ));
        times.push(t);
        states.push(next);
    }

    Ok(FlowTrajectory {
        times,
        states,
        diagnostics,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LrContractionReport {
    pub r_norm: f64,
    /// None when the initial data coincide ("identical")
    pub max_ratio: Option<f64>,
    pub identical: bool,
}

/// Max over steps of ||f_t - g_t||_r / ||f_0 - g_0||_r for the two flows
/// started at f0 and g0. The exact flow is nonexpansive in every L^r(mu).
pub fn lr_contraction_check(
    f0: &DensityField,
    g0: &DensityField,
    r_norm: f64,
    t_final: f64,
    cfg: &ProximalConfig,
    exps: &Exponents,
) -> Result<LrContractionReport> {
    if r_norm < 1.0 {
        return Err(Error::InvalidConfig(format!("need r >= 1, got {r_norm}")));
    }
    let denom = f0.zip_with(g0, |a, b| a - b)?.lr_norm(r_norm);
    if denom == 0.0 {
        return Ok(LrContractionReport {
            r_norm,
            max_ratio: None,
            identical: true,
        });
    }
    // both flows descend the same smoothed energy, so the per-edge
    // monotonicity argument behind the contraction applies verbatim
    let mut cfg = *cfg;
    cfg.smoothing = Some(
        cfg.smoothing
            .unwrap_or_else(|| auto_eps(f0, exps.q).max(auto_eps(g0, exps.q))),
    );
    let fa = run_flow(f0, t_final, &cfg, exps, None)?;
    let fb = run_flow(g0, t_final, &cfg, exps, None)?;
    let mut max_ratio: f64 = 0.0;
    for (a, b) in fa.states.iter().zip(&fb.states).skip(1) {
        let dist = a.zip_with(b, |x, y| x - y)?.lr_norm(r_norm);
        max_ratio = max_ratio.max(dist / denom);
    }
    Ok(LrContractionReport {
        r_norm,
        max_ratio: Some(max_ratio),
        identical: false,
    })
}

/// A convex integrand with its derivative, for the dissipation identity.
pub struct ConvexFunction {
    value: Box<dyn Fn(f64) -> f64>,
    derivative: Box<dyn Fn(f64) -> f64>,
    pub name: &'static str,
}

impl ConvexFunction {
    pub fn square() -> Self {
        Self {
            value: Box::new(|s| s * s),
            derivative: Box::new(|s| 2.0 * s),
            name: "square",
        }
    }

    pub fn identity() -> Self {
        Self {
            value: Box::new(|s| s),
            derivative: Box::new(|_| 1.0),
            name: "identity",
        }
    }

    /// The Renyi integrand U_p(x) = (x^{3-p} - x) / ((3-p)(2-p)), defined on
    /// nonnegative arguments.
    pub fn renyi_integrand(p: f64) -> Result<Self> {
        Exponents::new(p)?;
        if (p - 2.0).abs() < 1e-12 {
            return Err(Error::UseLogEntropy);
        }
        let norm = (3.0 - p) * (2.0 - p);
        Ok(Self {
            value: Box::new(move |s| {
                let s = s.max(0.0);
                let pow = if s == 0.0 { 0.0 } else { s.powf(3.0 - p) };
                (pow - s) / norm
            }),
            derivative: Box::new(move |s| {
                let s = s.max(1e-300);
                ((3.0 - p) * s.powf(2.0 - p) - 1.0) / norm
            }),
            name: "renyi-integrand",
        })
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.value)(s)
    }

    pub fn deriv(&self, s: f64) -> f64 {
        (self.derivative)(s)
    }

    pub fn functional(&self, f: &DensityField) -> f64 {
        f.values()
            .iter()
            .zip(f.space().measure())
            .map(|(&x, &m)| self.eval(x) * m)
            .sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DissipationReport {
    pub steps: usize,
    pub tau: f64,
    /// max_k | E(f_{k+1}) - E(f_k) + tau * pairing(e'(f_{k+1}), f_{k+1}) |
    pub max_step_defect: f64,
    /// | E(f_K) - E(f_0) + sum_k tau * pairing |, the integrated identity
    pub cumulative_defect: f64,
}

/// Measures how closely one trajectory satisfies the energy dissipation
/// identity E(f_t) + int int e''(f)|grad f|^q = E(f_0) under the
/// right-endpoint quadrature of the implicit scheme. Both defects shrink
/// linearly (per-step: quadratically) in tau.
pub fn dissipation_identity_check(
    f0: &DensityField,
    e: &ConvexFunction,
    t_final: f64,
    cfg: &ProximalConfig,
    exps: &Exponents,
) -> Result<DissipationReport> {
    let mut cfg = *cfg;
    let eps = cfg.smoothing.unwrap_or_else(|| auto_eps(f0, exps.q));
    cfg.smoothing = Some(eps);
    let traj = run_flow(f0, t_final, &cfg, exps, None)?;
    let q = exps.q;
    let mut max_step_defect: f64 = 0.0;
    let mut cumulative = 0.0;
    for k in 0..traj.states.len() - 1 {
        let prev = &traj.states[k];
        let next = &traj.states[k + 1];
        let e_prev = e.functional(prev);
        let e_next = e.functional(next);
        let eprime = next.map(|s| e.deriv(s));
        let defect = e_next - e_prev
            + cfg.step
                * crate::calculus::dissipation_pairing_with_eps(&eprime, next, q, eps);
        max_step_defect = max_step_defect.max(defect.abs());
        cumulative += defect;
    }
    Ok(DissipationReport {
        steps: traj.states.len() - 1,
        tau: cfg.step,
        max_step_defect,
        cumulative_defect: cumulative.abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentumEntropyReport {
    pub times: Vec<f64>,
    pub moments: Vec<f64>,
    pub bounds: Vec<f64>,
    pub fisher_integral: Vec<f64>,
    pub constants: MomentBound,
    /// M^q(t) <= S_t at every recorded time (with 1e-6 S_t slack)
    pub moment_verdict: bool,
    /// integrated Fisher <= 4/(3-p) S_t at every recorded time
    pub fisher_verdict: bool,
    pub max_moment_ratio: f64,
    pub max_fisher_ratio: f64,
}

/// Runs the flow and checks the two momentum-entropy bounds. Tolerance is
/// 1e-6 relative to S_t; the bounds are theorems, so a violation indicates
/// a defect in the flow solver.
pub fn momentum_entropy_check(
    f0: &DensityField,
    v: &DensityField,
    p: f64,
    t_final: f64,
    cfg: &ProximalConfig,
) -> Result<MomentumEntropyReport> {
    let exps = Exponents::new(p)?;
    let constants = moment_bound(f0, v, p)?;
    let traj = run_flow(f0, t_final, cfg, &exps, Some(v))?;

    let mut moments = Vec::new();
    let mut bounds = Vec::new();
    let mut fisher_integral = Vec::new();
    let mut moment_verdict = true;
    let mut fisher_verdict = true;
    let mut max_moment_ratio: f64 = 0.0;
    let mut max_fisher_ratio: f64 = 0.0;
    let fisher_factor = 4.0 / (3.0 - p);

    for d in &traj.diagnostics {
        let m = d.moment.expect("weight supplied");
        let s = d.moment_bound.expect("weight supplied");
        let fi = d.dissipation_integral.unwrap_or(f64::NAN);
        moments.push(m);
        bounds.push(s);
        fisher_integral.push(fi);
        if m > s * (1.0 + 1e-6) {
            moment_verdict = false;
        }
        if fi > fisher_factor * s * (1.0 + 1e-6) {
            fisher_verdict = false;
        }
        max_moment_ratio = max_moment_ratio.max(m / s);
        max_fisher_ratio = max_fisher_ratio.max(fi / (fisher_factor * s));
    }

    Ok(MomentumEntropyReport {
        times: traj.times,
        moments,
        bounds,
        fisher_integral,
        constants,
        moment_verdict,
        fisher_verdict,
        max_moment_ratio,
        max_fisher_ratio,
    })
}
