//! Exact p-Wasserstein distances on finite spaces.
//!
//! The transport LP with cost d(x,y)^p is solved exactly by successive
//! shortest paths with Johnson potentials on the complete bipartite network;
//! the potentials double as optimal dual variables, so every plan ships with
//! a feasibility / complementary-slackness / duality-gap certificate.
//!
//! Distances carry the 1/p normalization inside the p-th power,
//!
//!   w_p^p(mu0, mu1) = inf_pi (1/p) sum pi_ij d_ij^p,
//!
//! with the standard convention available behind a flag; the two differ by
//! the exact factor (1/p)^{1/p}.

use std::sync::Arc;

use serde::Serialize;

use crate::calculus::DensityField;
use crate::error::{Error, Result};
use crate::heatflow::FlowTrajectory;
use crate::space::MetricMeasureSpace;

/// Normalization of the transport cost inside w_p^p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// (1/p) inside the p-th power (default)
    #[default]
    OneOverP,
    /// plain optimal transport cost
    Standard,
}

/// Nonnegative vertex weights summing to one.
#[derive(Debug, Clone)]
pub struct ProbabilityVector {
    space: Arc<MetricMeasureSpace>,
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates nonnegativity and total mass (within 1e-9), then removes
    /// the rounding dust so the stored weights sum to 1 exactly.
    pub fn new(space: Arc<MetricMeasureSpace>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::SpaceMismatch);
        }
        let mut w = weights;
        for x in &mut w {
            if !x.is_finite() || *x < -1e-9 {
                return Err(Error::NotProbabilityVectors(format!(
                    "weight {x} is negative or non-finite"
                )));
            }
            *x = x.max(0.0);
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotProbabilityVectors(format!(
                "weights sum to {total}"
            )));
        }
        for x in &mut w {
            *x /= total;
        }
        Ok(Self { space, weights: w })
    }

    /// Interprets a nonnegative density as the measure f mu, normalized by
    /// its total mass.
    pub fn from_density(f: &DensityField) -> Result<Self> {
        let mass = f.mass();
        if !(mass > 0.0) {
            return Err(Error::NotProbabilityVectors(format!(
                "density has mass {mass}"
            )));
        }
        let weights = f
            .values()
            .iter()
            .zip(f.space().measure())
            .map(|(v, m)| v * m / mass)
            .collect();
        Self::new(f.space().clone(), weights)
    }

    pub fn dirac(space: Arc<MetricMeasureSpace>, vertex: usize) -> Result<Self> {
        let mut w = vec![0.0; space.len()];
        w[vertex] = 1.0;
        Self::new(space, w)
    }

    pub fn uniform(space: Arc<MetricMeasureSpace>) -> Self {
        let n = space.len();
        Self {
            space,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn space(&self) -> &Arc<MetricMeasureSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Density with respect to the vertex measure.
    pub fn density(&self) -> DensityField {
        DensityField::from_fn(self.space.clone(), |i| {
            self.weights[i] / self.space.measure()[i]
        })
        .expect("weights are finite")
    }

    pub fn linf_distance(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

/// Optimal coupling with dual potentials and certificates.
#[derive(Debug, Clone, Serialize)]
pub struct TransportPlan {
    /// row-major coupling, rows = first marginal
    pub pi: Vec<Vec<f64>>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// raw LP cost sum pi_ij d_ij^p
    pub cost: f64,
    /// normalized distance
    pub distance: f64,
    pub p: f64,
    #[serde(skip)]
    pub mu0: Vec<f64>,
    #[serde(skip)]
    pub mu1: Vec<f64>,
    #[serde(skip)]
    pub cost_matrix: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualReport {
    /// max over (i,j) of u_i + v_j - c_ij (feasibility; <= 0 up to rounding)
    pub max_feasibility_violation: f64,
    /// max over the support of |c_ij - u_i - v_j| (complementary slackness)
    pub max_support_slack: f64,
    /// primal cost minus dual value
    pub duality_gap: f64,
    pub primal_cost: f64,
    pub dual_value: f64,
}

/// Recomputes the optimality certificates of a plan.
pub fn verify_dual(plan: &TransportPlan) -> DualReport {
    let n = plan.mu0.len();
    let m = plan.mu1.len();
    let mass: f64 = plan.mu0.iter().sum();
    let support_floor = 1e-12 * mass.max(1.0);
    let mut feas: f64 = f64::NEG_INFINITY;
    let mut slack: f64 = 0.0;
    let mut primal = 0.0;
    for i in 0..n {
        for j in 0..m {
            let c = plan.cost_matrix[i * m + j];
            let red = plan.u[i] + plan.v[j] - c;
            feas = feas.max(red);
            if plan.pi[i][j] > support_floor {
                slack = slack.max(red.abs());
            }
            primal += plan.pi[i][j] * c;
        }
    }
    let dual_value = plan
        .u
        .iter()
        .zip(&plan.mu0)
        .map(|(u, a)| u * a)
        .sum::<f64>()
        + plan
            .v
            .iter()
            .zip(&plan.mu1)
            .map(|(v, b)| v * b)
            .sum::<f64>();
    DualReport {
        max_feasibility_violation: feas,
        max_support_slack: slack,
        duality_gap: primal - dual_value,
        primal_cost: primal,
        dual_value,
    }
}

/// Exact p-Wasserstein distance and optimal plan between two probability
/// vectors on the same space, with the 1/p normalization.
pub fn wasserstein_p(
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
    p: f64,
) -> Result<(f64, TransportPlan)> {
    wasserstein_p_with(mu0, mu1, p, Normalization::OneOverP)
}

pub fn wasserstein_p_with(
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
    p: f64,
    normalization: Normalization,
) -> Result<(f64, TransportPlan)> {
    if !(p > 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if !Arc::ptr_eq(mu0.space(), mu1.space()) && mu0.len() != mu1.len() {
        return Err(Error::SpaceMismatch);
    }
    let n = mu0.len();
    let space = mu0.space();
    let mut cost = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = space.distance(i, j).powf(p);
        }
    }
    let (pi, pot_a, pot_b) = solve_transport(mu0.weights(), mu1.weights(), &cost, n, n)?;

    let lp_cost: f64 = pi
        .iter()
        .enumerate()
        .map(|(idx, &f)| f * cost[idx])
        .sum();
    let distance = match normalization {
        Normalization::OneOverP => (lp_cost / p).max(0.0).powf(1.0 / p),
        Normalization::Standard => lp_cost.max(0.0).powf(1.0 / p),
    };

    let plan = TransportPlan {
        pi: (0..n).map(|i| pi[i * n..(i + 1) * n].to_vec()).collect(),
        u: pot_a.iter().map(|x| -x).collect(),
        v: pot_b,
        cost: lp_cost,
        distance,
        p,
        mu0: mu0.weights().to_vec(),
        mu1: mu1.weights().to_vec(),
        cost_matrix: cost,
    };
    Ok((distance, plan))
}

/// Successive shortest paths with potentials on the complete bipartite
/// transportation network. Real-valued supplies; every augmentation
/// exhausts a source or a sink, so at most n + m rounds run.
fn solve_transport(
    a: &[f64],
    b: &[f64],
    cost: &[f64],
    n: usize,
    m: usize,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let total: f64 = a.iter().sum();
    let mass_tol = 1e-14 * total.max(1.0);

    let mut rem_a = a.to_vec();
    let mut rem_b = b.to_vec();
    let mut flow = vec![0.0; n * m];
    let mut pot_a = vec![0.0; n];
    let mut pot_b = vec![0.0; m];
    // Johnson initialization so all reduced costs start nonnegative.
    for j in 0..m {
        pot_b[j] = (0..n).map(|i| cost[i * m + j]).fold(f64::INFINITY, f64::min);
    }

    let max_rounds = 4 * (n + m) + 16;
    for _round in 0..max_rounds {
        let remaining = rem_a
            .iter()
            .sum::<f64>()
            .min(rem_b.iter().sum::<f64>());
        if remaining <= mass_tol {
            break;
        }

        // Dijkstra over A-nodes (0..n) and B-nodes (n..n+m) from every
        // source with remaining supply.
        let big = n + m;
        let mut dist = vec![f64::INFINITY; big];
        let mut prev: Vec<Option<usize>> = vec![None; big];
        let mut done = vec![false; big];
        for i in 0..n {
            if rem_a[i] > 0.0 {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut u = None;
            let mut best = f64::INFINITY;
            for v in 0..big {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            if u < n {
                // forward arcs A_u -> B_j
                for j in 0..m {
                    let rc = (cost[u * m + j] + pot_a[u] - pot_b[j]).max(0.0);
                    let nd = dist[u] + rc;
                    if nd < dist[n + j] {
                        dist[n + j] = nd;
                        prev[n + j] = Some(u);
                    }
                }
            } else {
                // backward arcs B_{u-n} -> A_i where flow is positive
                let j = u - n;
                for i in 0..n {
                    if flow[i * m + j] > 0.0 {
                        let rc = (-cost[i * m + j] - pot_a[i] + pot_b[j]).max(0.0);
                        let nd = dist[u] + rc;
                        if nd < dist[i] {
                            dist[i] = nd;
                            prev[i] = Some(u);
                        }
                    }
                }
            }
        }

        // nearest sink with remaining demand
        let mut sink = None;
        let mut best = f64::INFINITY;
        for j in 0..m {
            if rem_b[j] > 0.0 && dist[n + j] < best {
                best = dist[n + j];
                sink = Some(j);
            }
        }
        let Some(sink) = sink else {
            return Err(Error::TransportStalled(
                "no reachable sink with remaining demand".into(),
            ));
        };

        // back out the augmenting path and its bottleneck
        let mut path = Vec::new();
        let mut at = n + sink;
        loop {
            let Some(from) = prev[at] else { break };
            path.push((from, at));
            at = from;
        }
        path.reverse();
        let source = at;
        let mut amount = rem_a[source].min(rem_b[sink]);
        for &(x, y) in &path {
            if x >= n {
                // backward arc B -> A consumes existing flow
                amount = amount.min(flow[y * m + (x - n)]);
            }
        }
        if !(amount > 0.0) {
            return Err(Error::TransportStalled("zero augmentation".into()));
        }
        for &(x, y) in &path {
            if x < n {
                flow[x * m + (y - n)] += amount;
            } else {
                flow[y * m + (x - n)] -= amount;
            }
        }
        rem_a[source] = (rem_a[source] - amount).max(0.0);
        rem_b[sink] = (rem_b[sink] - amount).max(0.0);

        // potential update pi += min(dist, dist(sink)) keeps reduced costs
        // nonnegative and zeroes them along the augmenting path
        for v in 0..big {
            let d = dist[v].min(best);
            if v < n {
                pot_a[v] += d;
            } else {
                pot_b[v - n] += d;
            }
        }
    }

    let leftover = rem_a
        .iter()
        .sum::<f64>()
        .min(rem_b.iter().sum::<f64>());
    if leftover > 16.0 * mass_tol {
        return Err(Error::TransportStalled(format!(
            "unassigned supply {leftover} remains"
        )));
    }
    Ok((flow, pot_a, pot_b))
}

/// Per-interval finite-difference speeds w_p(mu_k, mu_{k+1}) / (t_{k+1}-t_k)
/// of a trajectory, states normalized to probability vectors.
pub fn metric_speed(traj: &FlowTrajectory, p: f64) -> Result<Vec<f64>> {
    let mut speeds = Vec::new();
    for k in 0..traj.states.len() - 1 {
        let a = ProbabilityVector::from_density(&traj.states[k])?;
        let b = ProbabilityVector::from_density(&traj.states[k + 1])?;
        let (d, _) = wasserstein_p(&a, &b, p)?;
        let dt = traj.times[k + 1] - traj.times[k];
        speeds.push(d / dt);
    }
    Ok(speeds)
}

/// Brute-force transportation oracle: enumerates the vertices of the
/// transportation polytope (spanning-tree bases of the complete bipartite
/// graph) and returns the minimal raw LP cost. Independent of the network
/// flow solver; limited to spaces with at most 5 vertices.
pub fn bruteforce_min_cost(
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
    p: f64,
) -> Result<f64> {
    let n = mu0.len();
    const MAX: usize = 5;
    if n > MAX {
        return Err(Error::BruteforceLimit { n, max: MAX });
    }
    let space = mu0.space();
    let mut cost = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = space.distance(i, j).powf(p);
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    let tree_size = 2 * n - 1;
    let mut chosen = Vec::with_capacity(tree_size);
    let mut best = f64::INFINITY;
    enumerate_trees(
        &edges,
        0,
        tree_size,
        &mut chosen,
        n,
        mu0.weights(),
        mu1.weights(),
        &cost,
        &mut best,
    );
    if !best.is_finite() {
        return Err(Error::TransportStalled(
            "no feasible basis found by the oracle".into(),
        ));
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_trees(
    edges: &[(usize, usize)],
    start: usize,
    need: usize,
    chosen: &mut Vec<(usize, usize)>,
    n: usize,
    a: &[f64],
    b: &[f64],
    cost: &[f64],
    best: &mut f64,
) {
    if chosen.len() == need {
        if let Some(c) = tree_cost(chosen, n, a, b, cost) {
            if c < *best {
                *best = c;
            }
        }
        return;
    }
    if edges.len() - start < need - chosen.len() {
        return;
    }
    for idx in start..edges.len() {
        chosen.push(edges[idx]);
        if is_forest(chosen, n) {
            enumerate_trees(edges, idx + 1, need, chosen, n, a, b, cost, best);
        }
        chosen.pop();
    }
}

fn is_forest(chosen: &[(usize, usize)], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in chosen {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, n + j));
        if ri == rj {
            return false;
        }
        parent[ri] = rj;
    }
    true
}

/// Solves the flows on a spanning tree by leaf elimination; None when the
/// basic solution is infeasible (a negative flow).
fn tree_cost(chosen: &[(usize, usize)], n: usize, a: &[f64], b: &[f64], cost: &[f64]) -> Option<f64> {
    let nodes = 2 * n;
    let mut balance: Vec<f64> = a.iter().copied().chain(b.iter().map(|x| -x)).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (idx, &(i, j)) in chosen.iter().enumerate() {
        adj[i].push((n + j, idx));
        adj[n + j].push((i, idx));
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; chosen.len()];
    let mut stack: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
    let mut total = 0.0;
    let mut processed = 0;
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let Some(&(w, eidx)) = adj[v].iter().find(|&&(_, e)| !removed[e]) else {
            continue;
        };
        // flow on the arc A -> B incident to leaf v
        let flow = if v < n { balance[v] } else { -balance[v] };
        if flow < -1e-12 {
            return None;
        }
        let (i, j) = chosen[eidx];
        total += flow.max(0.0) * cost[i * n + j];
        balance[w] += balance[v];
        balance[v] = 0.0;
        removed[eidx] = true;
        degree[v] -= 1;
        degree[w] -= 1;
        if degree[w] == 1 {
            stack.push(w);
        }
        processed += 1;
    }
    if processed != chosen.len() {
        return None;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricMeasureSpace;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_probability(
        space: &Arc<MetricMeasureSpace>,
        rng: &mut impl Rng,
    ) -> ProbabilityVector {
        let raw: Vec<f64> = (0..space.len()).map(|_| -rng.gen::<f64>().ln()).collect();
        let total: f64 = raw.iter().sum();
        ProbabilityVector::new(space.clone(), raw.iter().map(|x| x / total).collect()).unwrap()
    }

    #[test]
    fn identical_marginals_give_zero_and_diagonal() {
        let s = MetricMeasureSpace::path(4, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mu = random_probability(&s, &mut rng);
        let (d, plan) = wasserstein_p(&mu, &mu, 2.0).unwrap();
        assert!(d.abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(plan.pi[i][j].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn two_point_diracs_carry_the_one_over_p_factor() {
        let s = MetricMeasureSpace::path(2, 1.0, 1.0).unwrap();
        let a = ProbabilityVector::dirac(s.clone(), 0).unwrap();
        let b = ProbabilityVector::dirac(s, 1).unwrap();
        let (d, _) = wasserstein_p(&a, &b, 2.0).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-14);

        let (d_std, _) = wasserstein_p_with(&a, &b, 2.0, Normalization::Standard).unwrap();
        assert!((d_std - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalization_flag_scales_exactly() {
        let s = MetricMeasureSpace::cycle(5, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [1.5, 2.0, 2.5, 3.0] {
            let a = random_probability(&s, &mut rng);
            let b = random_probability(&s, &mut rng);
            let (d, _) = wasserstein_p(&a, &b, p).unwrap();
            let (d_std, _) = wasserstein_p_with(&a, &b, p, Normalization::Standard).unwrap();
            let factor = (1.0f64 / p).powf(1.0 / p);
            assert!((d - factor * d_std).abs() <= 1e-12 * (1.0 + d_std));
        }
    }

    #[test]
    fn lp_matches_bruteforce_polytope_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 4, 5] {
            let s = MetricMeasureSpace::path(n, 0.7, 1.0).unwrap();
            for p in [1.5, 2.0, 3.0] {
                let a = random_probability(&s, &mut rng);
                let b = random_probability(&s, &mut rng);
                let (_, plan) = wasserstein_p(&a, &b, p).unwrap();
                let brute = bruteforce_min_cost(&a, &b, p).unwrap();
                assert!(
                    (plan.cost - brute).abs() <= 1e-10 * (1.0 + brute),
                    "n = {n}, p = {p}: lp {} vs brute {brute}",
                    plan.cost
                );
            }
        }
    }

    #[test]
    fn bruteforce_respects_size_limit() {
        let s = MetricMeasureSpace::path(6, 1.0, 1.0).unwrap();
        let a = ProbabilityVector::uniform(s.clone());
        let b = ProbabilityVector::dirac(s, 0).unwrap();
        assert!(matches!(
            bruteforce_min_cost(&a, &b, 2.0),
            Err(Error::BruteforceLimit { .. })
        ));
    }

    #[test]
    fn dual_certificates_hold_and_detect_perturbations() {
        let s = MetricMeasureSpace::grid2d(3, 3, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_probability(&s, &mut rng);
        let b = random_probability(&s, &mut rng);
        let (_, plan) = wasserstein_p(&a, &b, 2.5).unwrap();
        let report = verify_dual(&plan);
        assert!(report.max_feasibility_violation <= 1e-9);
        assert!(report.max_support_slack <= 1e-9);
        assert!(report.duality_gap.abs() <= 1e-9);

        let mut perturbed = plan.clone();
        for u in &mut perturbed.u {
            *u += 0.1;
        }
        let bad = verify_dual(&perturbed);
        assert!(bad.max_feasibility_violation > 0.05);
    }

    #[test]
    fn product_coupling_shows_strict_weak_duality() {
        let s = MetricMeasureSpace::path(5, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_probability(&s, &mut rng);
        let b = random_probability(&s, &mut rng);
        let (_, plan) = wasserstein_p(&a, &b, 2.0).unwrap();
        let product_cost: f64 = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .map(|(i, j)| a.weights()[i] * b.weights()[j] * plan.cost_matrix[i * 5 + j])
            .sum();
        let dual = verify_dual(&plan).dual_value;
        assert!(product_cost > dual + 1e-6);
    }

    #[test]
    fn wp_metric_axioms_on_random_triples() {
        let s = MetricMeasureSpace::cycle(9, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [1.5, 2.5] {
            for _ in 0..20 {
                let a = random_probability(&s, &mut rng);
                let b = random_probability(&s, &mut rng);
                let c = random_probability(&s, &mut rng);
                let (ab, _) = wasserstein_p(&a, &b, p).unwrap();
                let (ba, _) = wasserstein_p(&b, &a, p).unwrap();
                let (ac, _) = wasserstein_p(&a, &c, p).unwrap();
                let (cb, _) = wasserstein_p(&c, &b, p).unwrap();
                assert!((ab - ba).abs() <= 1e-10);
                assert!(ab <= ac + cb + 1e-9);
            }
        }
    }

    #[test]
    fn marginals_are_reproduced() {
        let s = MetricMeasureSpace::grid2d(3, 4, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_probability(&s, &mut rng);
        let b = random_probability(&s, &mut rng);
        let (_, plan) = wasserstein_p(&a, &b, 3.0).unwrap();
        let n = s.len();
        for i in 0..n {
            let row: f64 = plan.pi[i].iter().sum();
            assert!((row - a.weights()[i]).abs() <= 1e-10);
        }
        for j in 0..n {
            let col: f64 = (0..n).map(|i| plan.pi[i][j]).sum();
            assert!((col - b.weights()[j]).abs() <= 1e-10);
        }
    }

    #[test]
    fn plan_export_carries_the_documented_fields() {
        let s = MetricMeasureSpace::path(3, 1.0, 1.0).unwrap();
        let a = ProbabilityVector::new(s.clone(), vec![0.5, 0.3, 0.2]).unwrap();
        let b = ProbabilityVector::uniform(s);
        let (_, plan) = wasserstein_p(&a, &b, 2.0).unwrap();
        let json = serde_json::to_value(&plan).unwrap();
        for key in ["cost", "distance", "pi", "u", "v"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["pi"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn rejects_non_probability_input() {
        let s = MetricMeasureSpace::path(3, 1.0, 1.0).unwrap();
        assert!(matches!(
            ProbabilityVector::new(s.clone(), vec![0.5, 0.2, 0.2]),
            Err(Error::NotProbabilityVectors(_))
        ));
        assert!(matches!(
            ProbabilityVector::new(s, vec![0.5, 0.6, -0.1]),
            Err(Error::NotProbabilityVectors(_))
        ));
    }
}
