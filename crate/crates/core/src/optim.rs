//! Derivative-free local minimization (Nelder–Mead) with restarts.

/// Settings for one local minimization.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Iteration cap for a single simplex run.
    pub max_iterations: usize,
    /// Stop once `f(worst) − f(best) ≤ function_tolerance`.
    pub function_tolerance: f64,
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: f64,
    /// Fresh simplices built around the incumbent after a run stops.
    pub max_restarts: usize,
    /// A run also stops after this many iterations without lowering the best
    /// value by more than the function tolerance.
    pub stall_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            function_tolerance: 1e-10,
            initial_step: 0.5,
            max_restarts: 6,
            stall_iterations: usize::MAX,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// The last simplex run met the function tolerance before its iteration cap.
    pub converged: bool,
}

struct Coefficients {
    reflect: f64,
    expand: f64,
    contract: f64,
    shrink: f64,
}

impl Coefficients {
    /// Gao–Han dimension-adapted coefficients; they reduce to the classic
    /// (1, 2, ½, ½) for n = 2.
    fn for_dim(n: usize) -> Self {
        if n <= 2 {
            return Self { reflect: 1.0, expand: 2.0, contract: 0.5, shrink: 0.5 };
        }
        let n = n as f64;
        Self {
            reflect: 1.0,
            expand: 1.0 + 2.0 / n,
            contract: 0.75 - 1.0 / (2.0 * n),
            shrink: 1.0 - 1.0 / n,
        }
    }
}

fn simplex_run<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    fx0: f64,
    opts: &NelderMeadOptions,
    evaluations: &mut usize,
) -> Minimum {
    let n = x0.len();
    let c = Coefficients::for_dim(n);
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    vals.push(fx0);
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        vals.push(f(&p));
        pts.push(p);
        *evaluations += 1;
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut sum = vec![0.0; n];
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    // Iteration and value of the last meaningful improvement.
    let mut last_gain = (0usize, fx0);

    while iterations < opts.max_iterations {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if vals[worst] - vals[best] <= opts.function_tolerance {
            converged = true;
            break;
        }
        if vals[best] < last_gain.1 - opts.function_tolerance {
            last_gain = (iterations, vals[best]);
        } else if iterations - last_gain.0 >= opts.stall_iterations {
            converged = true;
            break;
        }
        iterations += 1;

        // Vertex sum kept incrementally; rebuilt from scratch now and then
        // so rounding cannot accumulate.
        if iterations % (10 * n) == 1 {
            vertex_sum(&pts, &mut sum);
        }
        for ((cv, sv), wv) in centroid.iter_mut().zip(&sum).zip(&pts[worst]) {
            *cv = (sv - wv) / n as f64;
        }

        let along = |t: f64, out: &mut Vec<f64>, worst_pt: &[f64]| {
            for ((o, cv), wv) in out.iter_mut().zip(&centroid).zip(worst_pt) {
                *o = cv + t * (cv - wv);
            }
        };

        along(c.reflect, &mut trial, &pts[worst]);
        let fr = f(&trial);
        *evaluations += 1;

        if fr < vals[best] {
            along(c.reflect * c.expand, &mut trial2, &pts[worst]);
            let fe = f(&trial2);
            *evaluations += 1;
            if fe < fr {
                replace(&mut pts[worst], &trial2, &mut sum);
                vals[worst] = fe;
            } else {
                replace(&mut pts[worst], &trial, &mut sum);
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            replace(&mut pts[worst], &trial, &mut sum);
            vals[worst] = fr;
            continue;
        }
        let (t, bound) = if fr < vals[worst] {
            (c.reflect * c.contract, fr)
        } else {
            (-c.contract, vals[worst])
        };
        along(t, &mut trial2, &pts[worst]);
        let fc = f(&trial2);
        *evaluations += 1;
        let accept = if t > 0.0 { fc <= bound } else { fc < bound };
        if accept {
            replace(&mut pts[worst], &trial2, &mut sum);
            vals[worst] = fc;
            continue;
        }
        let anchor = pts[best].clone();
        for &i in &order[1..] {
            for (p, a) in pts[i].iter_mut().zip(&anchor) {
                *p = a + c.shrink * (*p - a);
            }
            vals[i] = f(&pts[i]);
            *evaluations += 1;
        }
        vertex_sum(&pts, &mut sum);
    }

    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)))
        .unwrap_or(0);
    Minimum {
        x: pts[best].clone(),
        value: vals[best],
        iterations,
        evaluations: 0,
        converged,
    }
}

fn vertex_sum(pts: &[Vec<f64>], sum: &mut [f64]) {
    sum.iter_mut().for_each(|v| *v = 0.0);
    for p in pts {
        for (sv, pv) in sum.iter_mut().zip(p) {
            *sv += pv;
        }
    }
}

fn replace(vertex: &mut [f64], new: &[f64], sum: &mut [f64]) {
    for ((v, nv), sv) in vertex.iter_mut().zip(new).zip(sum.iter_mut()) {
        *sv += nv - *v;
        *v = *nv;
    }
}

/// Minimizes `f` from `x0`, rebuilding the simplex around the incumbent
/// while that still lowers the value by more than the function tolerance.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let mut evaluations = 1;
    let fx0 = f(x0);
    if x0.is_empty() {
        return Minimum { x: Vec::new(), value: fx0, iterations: 0, evaluations, converged: true };
    }
    let mut best = simplex_run(&mut f, x0, fx0, opts, &mut evaluations);
    let mut iterations = best.iterations;
    for _ in 0..opts.max_restarts {
        let prev = best.value;
        let next = simplex_run(&mut f, &best.x.clone(), best.value, opts, &mut evaluations);
        iterations += next.iterations;
        let improved = next.value < prev;
        if improved {
            best = next;
        } else {
            best.converged = next.converged;
        }
        if !(prev - best.value > opts.function_tolerance) {
            break;
        }
    }
    best.iterations = iterations;
    best.evaluations = evaluations;
    best
}
