/// Approximate minimizer of `g.d + d'Hd/2` subject to `|d| <= delta` and
/// `lo <= d <= hi` (with `lo <= 0 <= hi`), by truncated conjugate gradients
/// that freeze a coordinate whenever it reaches its bound and restart.
/// `h` is a dense row-major `n x n` symmetric matrix.
pub(crate) fn trust_step(g: &[f64], h: &[f64], delta: f64, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    let n = g.len();
    let mut d = vec![0.0; n];
    let mut fixed: Vec<bool> = (0..n)
        .map(|i| (lo[i] >= 0.0 && g[i] > 0.0) || (hi[i] <= 0.0 && g[i] < 0.0))
        .collect();
    let hv = |v: &[f64], out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = h[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum();
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gnorm = dot(g, g).sqrt();
    let mut hp = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut p = vec![0.0; n];

    'outer: for _ in 0..=n {
        hv(&d, &mut hp);
        for i in 0..n {
            r[i] = if fixed[i] { 0.0 } else { -(g[i] + hp[i]) };
        }
        let mut rr = dot(&r, &r);
        if rr.sqrt() <= 1e-12 * gnorm.max(1e-300) {
            break;
        }
        p.copy_from_slice(&r);
        for _ in 0..n {
            hv(&p, &mut hp);
            let curv = dot(&p, &hp);
            let pp = dot(&p, &p);
            let dp = dot(&d, &p);
            let dd = dot(&d, &d);
            let disc = (dp * dp + pp * (delta * delta - dd)).max(0.0);
            let alpha_ball = ((-dp + disc.sqrt()) / pp).max(0.0);
            let mut alpha_box = f64::INFINITY;
            let mut hit = None;
            for i in 0..n {
                if fixed[i] || p[i] == 0.0 {
                    continue;
                }
                let lim = if p[i] > 0.0 { (hi[i] - d[i]) / p[i] } else { (lo[i] - d[i]) / p[i] };
                if lim < alpha_box {
                    alpha_box = lim.max(0.0);
                    hit = Some(i);
                }
            }
            let alpha_cg = if curv > 0.0 { rr / curv } else { f64::INFINITY };
            let alpha = alpha_cg.min(alpha_ball).min(alpha_box);
            for i in 0..n {
                d[i] += alpha * p[i];
            }
            if alpha == alpha_box && alpha < alpha_ball {
                let i = hit.expect("box limit has an index");
                d[i] = if p[i] > 0.0 { hi[i] } else { lo[i] };
                fixed[i] = true;
                continue 'outer;
            }
            if alpha == alpha_ball {
                break 'outer;
            }
            for i in 0..n {
                r[i] -= alpha * hp[i];
            }
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() <= 1e-12 * gnorm.max(1e-300) {
                break 'outer;
            }
            let beta = rr_new / rr;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
            rr = rr_new;
        }
        break;
    }
    for i in 0..n {
        d[i] = d[i].clamp(lo[i], hi[i]);
    }
    d
}
