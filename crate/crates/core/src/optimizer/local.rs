use nalgebra::DMatrix;

use super::trust::trust_step;
use super::train::Tracker;
use super::{BoundedProblem, OptimizerConfig, TrainRecord};

/// Model rebuilds from scratch tolerated before giving up.
const MAX_RESTARTS: usize = 5;

pub(crate) struct LocalStats {
    pub iterations: usize,
    pub exhausted: bool,
    pub failure: Option<String>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Quadratic model interpolating `m = 2n + 1` points, updated by the
/// least-Frobenius-norm change of its Hessian. Points are stored as
/// displacements from the base `x0`; the interpolation system uses them
/// divided by `scale`, and its inverse is kept explicitly.
struct Model {
    n: usize,
    m: usize,
    x0: Vec<f64>,
    scale: f64,
    pts: Vec<Vec<f64>>,
    f: Vec<f64>,
    c: f64,
    g: Vec<f64>,
    h: Vec<f64>,
    winv: DMatrix<f64>,
}

impl Model {
    fn kkt_dim(&self) -> usize {
        self.m + 1 + self.n
    }

    /// Column of the interpolation system for a point at displacement `s`.
    fn column(&self, s: &[f64]) -> Vec<f64> {
        let inv = 1.0 / (self.scale * self.scale);
        let mut w = Vec::with_capacity(self.kkt_dim());
        for p in &self.pts {
            let t = dot(p, s) * inv;
            w.push(0.5 * t * t);
        }
        w.push(1.0);
        w.extend(s.iter().map(|v| v / self.scale));
        w
    }

    fn refactor(&mut self) -> bool {
        let nk = self.kkt_dim();
        let mut w = DMatrix::<f64>::zeros(nk, nk);
        for j in 0..self.m {
            let col = self.column(&self.pts[j]);
            for (a, v) in col.into_iter().enumerate() {
                w[(a, j)] = v;
                w[(j, a)] = v;
            }
        }
        match w.try_inverse() {
            Some(inv) if inv.iter().all(|v| v.is_finite()) => {
                self.winv = inv;
                true
            }
            _ => false,
        }
    }

    fn value(&self, s: &[f64]) -> f64 {
        let n = self.n;
        let mut quad = 0.0;
        for i in 0..n {
            quad += s[i] * dot(&self.h[i * n..(i + 1) * n], s);
        }
        self.c + dot(&self.g, s) + 0.5 * quad
    }

    fn gradient(&self, s: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| self.g[i] + dot(&self.h[i * n..(i + 1) * n], s)).collect()
    }

    /// Add the minimum-norm correction that makes the residuals `r` interpolated.
    fn absorb(&mut self, r: &[f64]) {
        let nk = self.kkt_dim();
        let mut sol = vec![0.0; nk];
        for (i, &ri) in r.iter().enumerate() {
            if ri != 0.0 {
                for (a, s) in sol.iter_mut().enumerate() {
                    *s += self.winv[(a, i)] * ri;
                }
            }
        }
        let n = self.n;
        self.c += sol[self.m];
        for k in 0..n {
            self.g[k] += sol[self.m + 1 + k] / self.scale;
        }
        let s4 = self.scale.powi(4);
        for j in 0..self.m {
            let lam = sol[j] / s4;
            if lam == 0.0 {
                continue;
            }
            let p = &self.pts[j];
            for a in 0..n {
                let la = lam * p[a];
                for b in 0..n {
                    self.h[a * n + b] += la * p[b];
                }
            }
        }
    }

    fn refresh(&mut self) {
        let r: Vec<f64> = (0..self.m).map(|i| self.f[i] - self.value(&self.pts[i])).collect();
        self.absorb(&r);
    }

    /// Values of all Lagrange functions at `s`.
    fn lagrange_all(&self, s: &[f64]) -> Vec<f64> {
        let w = self.column(s);
        (0..self.m).map(|t| (0..w.len()).map(|a| self.winv[(t, a)] * w[a]).sum()).collect()
    }

    fn lagrange(&self, t: usize, s: &[f64]) -> f64 {
        let w = self.column(s);
        (0..w.len()).map(|a| self.winv[(t, a)] * w[a]).sum()
    }

    fn lagrange_gradient(&self, t: usize, s: &[f64]) -> Vec<f64> {
        let inv = 1.0 / (self.scale * self.scale);
        let mut grad: Vec<f64> = (0..self.n).map(|k| self.winv[(t, self.m + 1 + k)] / self.scale).collect();
        for (j, p) in self.pts.iter().enumerate() {
            let coef = self.winv[(t, j)] * dot(p, s) * inv * inv;
            for k in 0..self.n {
                grad[k] += coef * p[k];
            }
        }
        grad
    }

    /// Swap point `t` for `s` through a rank-two update of the inverse.
    /// Returns false if the update is numerically unsafe; the point is
    /// stored either way.
    fn replace(&mut self, t: usize, s: Vec<f64>, f: f64) -> bool {
        let nk = self.kkt_dim();
        let old = self.column(&self.pts[t]);
        let mut new = self.column(&s);
        let norm2 = dot(&s, &s) / (self.scale * self.scale);
        new[t] = 0.5 * norm2 * norm2;
        let mut u: Vec<f64> = new.iter().zip(&old).map(|(a, b)| a - b).collect();
        u[t] *= 0.5;
        let z1: Vec<f64> = (0..nk).map(|a| self.winv[(a, t)]).collect();
        let z2: Vec<f64> = (0..nk).map(|a| (0..nk).map(|b| self.winv[(a, b)] * u[b]).sum()).collect();
        let s00 = z1[t];
        let s01 = 1.0 + z2[t];
        let s11 = dot(&u, &z2);
        let det = s00 * s11 - s01 * s01;
        self.pts[t] = s;
        self.f[t] = f;
        if !det.is_finite() || det.abs() <= 1e-12 * (s00 * s11).abs().max(s01 * s01) {
            return false;
        }
        let (i00, i01, i11) = (s11 / det, -s01 / det, s00 / det);
        for a in 0..nk {
            let pa = i00 * z1[a] + i01 * z2[a];
            let qa = i01 * z1[a] + i11 * z2[a];
            for b in 0..nk {
                self.winv[(a, b)] -= pa * z1[b] + qa * z2[b];
            }
        }
        let r = self.f[t] - self.value(&self.pts[t]);
        let mut rv = vec![0.0; self.m];
        rv[t] = r;
        self.absorb(&rv);
        true
    }

    /// Move the base to point `k`, rescale, and rebuild the inverse.
    fn rebase(&mut self, k: usize, scale: f64) -> bool {
        let shift = self.pts[k].clone();
        self.c = self.value(&shift);
        self.g = self.gradient(&shift);
        for (x, d) in self.x0.iter_mut().zip(&shift) {
            *x += d;
        }
        for p in &mut self.pts {
            for (v, d) in p.iter_mut().zip(&shift) {
                *v -= d;
            }
        }
        self.scale = scale;
        if !self.refactor() {
            return false;
        }
        self.refresh();
        true
    }

    fn best(&self) -> usize {
        (0..self.m).fold(0, |b, k| if self.f[k] < self.f[b] { k } else { b })
    }
}

/// Displacements `0, +-rho e_i`, moved to one side where a bound is close.
fn initial_displacements(x: &[f64], rho: f64, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut pts = vec![vec![0.0; n]];
    for i in 0..n {
        let (a, b) = if hi[i] - x[i] < rho {
            (-rho, -2.0 * rho)
        } else if x[i] - lo[i] < rho {
            (rho, 2.0 * rho)
        } else {
            (rho, -rho)
        };
        for step in [a, b] {
            let mut p = vec![0.0; n];
            p[i] = step;
            pts.push(p);
        }
    }
    pts
}

enum Init {
    Ready(Box<Model>),
    Exhausted,
    Singular,
}

fn initialize(tracker: &mut Tracker<'_, '_>, x: &[f64], fx: f64, rho: f64, budget_end: usize) -> Init {
    let problem = tracker.problem();
    let n = x.len();
    let pts = initial_displacements(x, rho, problem.lower(), problem.upper());
    let m = pts.len();
    let mut f = vec![fx];
    for p in &pts[1..] {
        if tracker.evaluations() >= budget_end {
            return Init::Exhausted;
        }
        let y: Vec<f64> = x.iter().zip(p).map(|(a, b)| a + b).collect();
        f.push(tracker.eval(&y));
    }
    let mut model = Model {
        n,
        m,
        x0: x.to_vec(),
        scale: rho,
        pts,
        f,
        c: 0.0,
        g: vec![0.0; n],
        h: vec![0.0; n * n],
        winv: DMatrix::zeros(0, 0),
    };
    if !model.refactor() {
        return Init::Singular;
    }
    model.refresh();
    Init::Ready(Box::new(model))
}

/// Bounded trust-region refinement from `start` on a quadratic model built
/// from `2P + 1` interpolation points.
pub(crate) fn local_stage(tracker: &mut Tracker<'_, '_>, start: &[f64], config: &OptimizerConfig) -> LocalStats {
    let problem = tracker.problem();
    let n = problem.dim();
    let (lo, hi) = (problem.lower().to_vec(), problem.upper().to_vec());
    let budget_end = tracker.evaluations() + config.budget;
    let mut stats = LocalStats { iterations: 0, exhausted: false, failure: None };
    if n == 0 {
        return stats;
    }
    let min_range = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    let rho_beg = (config.rho_begin * min_range).min(0.25 * min_range);
    let rho_end = config.rho_end.min(rho_beg);
    let mut rho = rho_beg;
    let mut delta = rho;

    let mut x: Vec<f64> = start.to_vec();
    problem.clamp_into(&mut x);
    let mut fx = if tracker.best().1 == x.as_slice() { tracker.best().0 } else { tracker.eval(&x) };
    let mut restarts = 0;
    'restart: loop {
        let mut model = match initialize(tracker, &x, fx, rho, budget_end) {
            Init::Ready(m) => m,
            Init::Exhausted => {
                stats.exhausted = true;
                return stats;
            }
            Init::Singular => {
                stats.failure = Some("interpolation system is singular at the start point".into());
                return stats;
            }
        };
        let m = model.m;
        let mut since_rebuild = 0;
        loop {
            let kopt = model.best();
            // Rebuild after each sweep of replacements to keep the inverse accurate.
            if since_rebuild >= m {
                since_rebuild = 0;
                let scale = model.scale;
                if !model.rebase(kopt, scale) {
                    break;
                }
                continue;
            }
            if tracker.evaluations() >= budget_end {
                stats.exhausted = true;
                return stats;
            }
            let s_opt = model.pts[kopt].clone();
            let f_opt = model.f[kopt];
            let lo_d: Vec<f64> = (0..n).map(|k| (lo[k] - model.x0[k] - s_opt[k]).min(0.0)).collect();
            let hi_d: Vec<f64> = (0..n).map(|k| (hi[k] - model.x0[k] - s_opt[k]).max(0.0)).collect();

            let d = trust_step(&model.gradient(&s_opt), &model.h, delta, &lo_d, &hi_d);
            let dn = dot(&d, &d).sqrt();
            let mut improve_geometry = false;
            let mut shrink = false;
            if dn < 0.5 * rho {
                delta = (0.5 * delta).max(rho);
                if delta <= 1.5 * rho {
                    delta = rho;
                }
                improve_geometry = true;
                shrink = delta <= rho;
            } else {
                let mut xn: Vec<f64> = (0..n).map(|k| model.x0[k] + s_opt[k] + d[k]).collect();
                problem.clamp_into(&mut xn);
                let s_new: Vec<f64> = (0..n).map(|k| xn[k] - model.x0[k]).collect();
                let f_new = tracker.eval(&xn);
                stats.iterations += 1;
                let pred = model.value(&s_opt) - model.value(&s_new);
                let actual = f_opt - f_new;
                let ratio = if pred > 0.0 { actual / pred } else { -1.0 };
                delta = if ratio <= 0.1 {
                    (0.5 * delta).min(dn)
                } else if ratio <= 0.7 {
                    (0.5 * delta).max(dn)
                } else {
                    (0.5 * delta).max(2.0 * dn)
                };
                if delta <= 1.5 * rho {
                    delta = rho;
                }

                let keep_best = f_new >= f_opt;
                let ell = model.lagrange_all(&s_new);
                let mut t = usize::MAX;
                let mut score = -1.0;
                for (j, l) in ell.iter().enumerate() {
                    if keep_best && j == kopt {
                        continue;
                    }
                    let w = (dist(&model.pts[j], &s_opt) / delta).max(1.0).powi(4);
                    let v = l.abs() * w;
                    if v > score {
                        score = v;
                        t = j;
                    }
                }
                if !model.replace(t, s_new, f_new) {
                    let k = model.best();
                    if !model.rebase(k, rho) {
                        break;
                    }
                    since_rebuild = 0;
                } else {
                    since_rebuild += 1;
                }
                if actual > 0.0 && actual < config.tol_local {
                    return stats;
                }
                if ratio < 0.1 {
                    improve_geometry = true;
                    shrink = delta <= rho;
                }
            }

            if improve_geometry {
                let kopt = model.best();
                let s_opt = model.pts[kopt].clone();
                let (far, far_dist) = (0..m)
                    .map(|j| (j, dist(&model.pts[j], &s_opt)))
                    .fold((kopt, 0.0), |a, b| if b.1 > a.1 { b } else { a });
                if far_dist > 2.0 * delta {
                    if tracker.evaluations() >= budget_end {
                        stats.exhausted = true;
                        return stats;
                    }
                    let radius = (0.1 * far_dist).min(delta).max(rho);
                    let lo_s: Vec<f64> = (0..n).map(|k| lo[k] - model.x0[k]).collect();
                    let hi_s: Vec<f64> = (0..n).map(|k| hi[k] - model.x0[k]).collect();
                    let s_geo = geometry_point(&model, far, kopt, radius, &lo_s, &hi_s);
                    let xg: Vec<f64> = (0..n).map(|k| model.x0[k] + s_geo[k]).collect();
                    let fg = tracker.eval(&xg);
                    if !model.replace(far, s_geo, fg) {
                        let k = model.best();
                        if !model.rebase(k, rho) {
                            break;
                        }
                        since_rebuild = 0;
                    } else {
                        since_rebuild += 1;
                    }
                    continue;
                }
                if shrink {
                    if rho <= rho_end {
                        return stats;
                    }
                    let ratio = rho / rho_end;
                    let next = if ratio <= 16.0 {
                        rho_end
                    } else if ratio <= 250.0 {
                        ratio.sqrt() * rho_end
                    } else {
                        0.1 * rho
                    };
                    delta = (0.5 * rho).max(next);
                    rho = next;
                    let k = model.best();
                    if !model.rebase(k, rho) {
                        break;
                    }
                    since_rebuild = 0;
                }
            }
        }
        // The interpolation system became singular: start over around the best point.
        restarts += 1;
        let k = model.best();
        x = (0..n).map(|i| model.x0[i] + model.pts[k][i]).collect();
        problem.clamp_into(&mut x);
        fx = model.f[k];
        delta = rho;
        if restarts > MAX_RESTARTS {
            stats.failure = Some(format!("interpolation model degenerate after {MAX_RESTARTS} restarts"));
            return stats;
        }
        continue 'restart;
    }
}

/// Point within `radius` of the best point that makes the Lagrange function
/// of point `t` large, searched along the lines to the other points and
/// along its gradient.
fn geometry_point(model: &Model, t: usize, kopt: usize, radius: f64, lo_s: &[f64], hi_s: &[f64]) -> Vec<f64> {
    let n = model.n;
    let s_opt = &model.pts[kopt];
    let mut dirs: Vec<Vec<f64>> = vec![model.lagrange_gradient(t, s_opt)];
    for (j, p) in model.pts.iter().enumerate() {
        if j != kopt {
            dirs.push((0..n).map(|k| p[k] - s_opt[k]).collect());
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for u in dirs {
        let norm = dot(&u, &u).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            continue;
        }
        for sign in [1.0, -1.0] {
            let cand: Vec<f64> = (0..n)
                .map(|k| (s_opt[k] + sign * radius * u[k] / norm).clamp(lo_s[k], hi_s[k]))
                .collect();
            if dist(&cand, s_opt) < 1e-3 * radius {
                continue;
            }
            let v = model.lagrange(t, &cand).abs();
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, cand));
            }
        }
    }
    best.map(|(_, c)| c).unwrap_or_else(|| {
        let mut c = s_opt.clone();
        c[0] = (c[0] + radius).min(hi_s[0]);
        c
    })
}

/// Local stage alone from `start`.
pub fn local_refine(problem: &BoundedProblem<'_>, start: &[f64], config: &OptimizerConfig) -> TrainRecord {
    let mut tracker = Tracker::new(problem);
    let stats = local_stage(&mut tracker, start, config);
    let mut rec = tracker.into_record(config, 0, 0, false);
    rec.local_evaluations = rec.evaluations;
    rec.global_evaluations = 0;
    rec.local_iterations = stats.iterations;
    rec.local_budget_exhausted = stats.exhausted;
    rec.local_failure = stats.failure;
    rec
}
