//! Nelder-Mead with dimension-adaptive coefficients (Gao and Han), restarted
//! around the incumbent whenever the simplex collapses.

#[derive(Clone, Debug)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

pub fn nelder_mead(f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], step: f64, max_evals: usize) -> NmResult {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta) = (1.0, 1.0 + 2.0 / nf);
    let gamma = 0.75 - 1.0 / (2.0 * nf);
    let delta = 1.0 - 1.0 / nf.max(2.0);
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best_x = x0.to_vec();
    let mut best_v = eval(x0, &mut evals);
    let mut step = step;
    let mut stale_restarts = 0;
    while evals + n < max_evals {
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_x.clone(), best_v)];
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }
        let start_v = best_v;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if evals + 2 > max_evals || collapsed(&simplex) {
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|p| p.0[k]).sum::<f64>() / nf)
                .collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (worst.0[k] - centroid[k])).collect() };
            let xr = along(-alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(-alpha * beta);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let xc = along(-alpha * gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < fr.min(worst.1) {
                    simplex[n] = (xc, fc);
                } else {
                    if evals + n > max_evals {
                        break;
                    }
                    let x0 = simplex[0].0.clone();
                    for p in simplex.iter_mut().skip(1) {
                        for (pk, &ok) in p.0.iter_mut().zip(&x0) {
                            *pk = ok + delta * (*pk - ok);
                        }
                        p.1 = eval(&p.0, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_v {
            best_x = simplex[0].0.clone();
            best_v = simplex[0].1;
        }
        stale_restarts = if best_v < start_v { 0 } else { stale_restarts + 1 };
        if stale_restarts >= 3 {
            break;
        }
        let diam = simplex
            .iter()
            .flat_map(|p| p.0.iter().zip(&best_x).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        step = (10.0 * diam).clamp(1e-9, step);
    }
    NmResult {
        x: best_x,
        value: best_v,
        evaluations: evals,
    }
}

fn collapsed(simplex: &[(Vec<f64>, f64)]) -> bool {
    let best = &simplex[0];
    let scale = 1.0 + best.0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diam = simplex
        .iter()
        .flat_map(|p| p.0.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let spread = simplex.last().expect("nonempty").1 - best.1;
    diam <= 1e-12 * scale || spread.abs() <= 1e-15 * (1.0 + best.1.abs()) && diam <= 1e-8 * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimises_rosenbrock() {
        let mut f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(&mut f, &[-1.2, 1.0], 0.5, 4000);
        assert!(r.value < 1e-12, "{r:?}");
        assert!(r.evaluations <= 4000);
    }

    #[test]
    fn minimises_nonsmooth_max() {
        let mut f = |x: &[f64]| x.iter().map(|v| (v - 0.3).abs()).fold(0.0, f64::max);
        let r = nelder_mead(&mut f, &[1.0, -2.0, 0.5, 4.0], 1.0, 5000);
        assert!(r.value < 1e-7, "{r:?}");
    }

    #[test]
    fn respects_budget() {
        let mut calls = 0;
        let mut f = |x: &[f64]| {
            calls += 1;
            x.iter().map(|v| v * v).sum()
        };
        let r = nelder_mead(&mut f, &[1.0; 6], 1.0, 50);
        assert!(r.evaluations <= 50);
        assert_eq!(calls, r.evaluations);
    }
}
