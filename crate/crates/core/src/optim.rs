//! Derivative-free minimizers: golden-section search on an interval and
//! Nelder–Mead in `R^n`.

/// `1/φ`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x))` once the bracket is narrower than `tol`.
pub fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Points in the seeding grid of [`minimize_unit_interval`].
pub const UNIT_GRID_POINTS: usize = 21;

/// Minimizes a convex `f` on `[0, 1]`: a uniform grid locates the bracket,
/// golden-section refines it to `tol`, and both endpoints are always compared.
pub fn minimize_unit_interval(f: impl Fn(f64) -> f64, tol: f64) -> (f64, f64) {
    let n = UNIT_GRID_POINTS - 1;
    let grid: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            (s, f(s))
        })
        .collect();
    let mut best = 0;
    for (k, &(_, v)) in grid.iter().enumerate() {
        if v < grid[best].1 {
            best = k;
        }
    }
    let lo = grid[best.saturating_sub(1)].0;
    let hi = grid[(best + 1).min(n)].0;
    let mut result = grid[best];
    let refined = golden_section(&f, lo, hi, tol);
    if refined.1 < result.1 {
        result = refined;
    }
    for &end in &[grid[0], grid[n]] {
        if end.1 < result.1 {
            result = end;
        }
    }
    result
}

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    /// Absolute spread of objective values across the simplex at convergence.
    pub ftol: f64,
    /// Largest coordinate distance from the best vertex at convergence.
    pub xtol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            ftol: 1e-8,
            xtol: 1e-6,
            max_evals: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
}

/// Nelder–Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). The initial simplex is `x0` plus `step`
/// along each axis.
pub fn nelder_mead(
    f: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    opts: &NelderMeadOptions,
) -> Minimum {
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: vec![],
            fx: f(&[]),
            evals: 1,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;

    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (spread <= opts.ftol && diameter <= opts.xtol) || evals >= opts.max_evals {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(-0.5);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for j in 0..n {
                simplex[i][j] = best[j] + 0.5 * (simplex[i][j] - best[j]);
            }
            values[i] = f(&simplex[i]);
        }
        evals += n;
    }
    Minimum {
        x: simplex[0].clone(),
        fx: values[0],
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section(&|x: f64| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn unit_interval_prefers_endpoints() {
        // (1/2)^s is minimized at s = 1
        let (s, v) = minimize_unit_interval(|s| 0.5f64.powf(s), 1e-10);
        assert_eq!(s, 1.0);
        assert!((v - 0.5).abs() < 1e-15);
        let (s, _) = minimize_unit_interval(|s| 2.0f64.powf(s), 1e-10);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn unit_interval_interior() {
        let (s, _) = minimize_unit_interval(|s| (s - 0.437).powi(2), 1e-10);
        assert!((s - 0.437).abs() < 1e-8);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions {
            ftol: 1e-14,
            xtol: 1e-9,
            max_evals: 10_000,
        };
        let m = nelder_mead(&f, &[-1.2, 1.0], 0.5, &opts);
        assert!((m.x[0] - 1.0).abs() < 1e-5, "{:?}", m);
        assert!((m.x[1] - 1.0).abs() < 1e-5, "{:?}", m);
    }

    #[test]
    fn nelder_mead_respects_eval_cap() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let opts = NelderMeadOptions {
            ftol: 0.0,
            xtol: 0.0,
            max_evals: 50,
        };
        let m = nelder_mead(&f, &[1.0, 1.0, 1.0], 0.3, &opts);
        assert!(m.evals <= 50 + 3);
    }
}
