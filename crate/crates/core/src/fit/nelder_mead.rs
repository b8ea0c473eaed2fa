//! Bounded Nelder–Mead simplex minimisation on the unit box.

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Edge length of the initial simplex in unit-box coordinates.
    pub initial_step: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.1,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn project(x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
}

fn along(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    let mut x: Vec<f64> = from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect();
    project(&mut x);
    x
}

/// Minimise `f` over `[0, 1]^k` starting from `start`.
///
/// `f` returns the objective together with any auxiliary output (for example
/// model predictions). Trial points leaving the box are projected back onto
/// it. Iteration stops once `spread(best, vertex)` of the auxiliary outputs is
/// below `tolerance` for every vertex, or after `max_iterations`. Initial and shrunk vertices are evaluated in
/// parallel; everything else is sequential, so the result is deterministic.
pub fn minimize<T, F, S>(f: F, start: &[f64], options: &NelderMeadOptions, spread: S, tolerance: f64) -> Minimum
where
    T: Send,
    F: Fn(&[f64]) -> (f64, T) + Sync,
    S: Fn(&T, &T) -> f64,
{
    let k = start.len();
    let mut x0 = start.to_vec();
    project(&mut x0);
    let mut simplex = vec![x0.clone()];
    for i in 0..k {
        let mut v = x0.clone();
        let step = options.initial_step;
        v[i] = if v[i] + step <= 1.0 { v[i] + step } else { v[i] - step };
        simplex.push(v);
    }
    let (mut values, mut aux): (Vec<f64>, Vec<T>) = simplex.par_iter().map(|v| f(v)).unzip();

    let mut iterations = 0;
    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let mut slots: Vec<Option<T>> = aux.into_iter().map(Some).collect();
        aux = order.iter().map(|&i| slots[i].take().expect("each vertex appears once")).collect();

        if aux[1..].iter().all(|a| spread(&aux[0], a) < tolerance) {
            converged = true;
            break;
        }
        if iterations >= options.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..k)
            .map(|j| simplex[..k].iter().map(|v| v[j]).sum::<f64>() / k as f64)
            .collect();
        let worst = simplex[k].clone();
        let reflected = along(&centroid, &worst, -options.reflection);
        let (fr, ar) = f(&reflected);

        if fr < values[0] {
            let expanded = along(&centroid, &worst, -options.expansion);
            let (fe, ae) = f(&expanded);
            if fe < fr {
                simplex[k] = expanded;
                values[k] = fe;
                aux[k] = ae;
            } else {
                simplex[k] = reflected;
                values[k] = fr;
                aux[k] = ar;
            }
            continue;
        }
        if fr < values[k - 1] {
            simplex[k] = reflected;
            values[k] = fr;
            aux[k] = ar;
            continue;
        }
        let contracted = if fr < values[k] {
            along(&centroid, &reflected, options.contraction)
        } else {
            along(&centroid, &worst, options.contraction)
        };
        let (fc, ac) = f(&contracted);
        if fc < values[k].min(fr) {
            simplex[k] = contracted;
            values[k] = fc;
            aux[k] = ac;
            continue;
        }
        let best = simplex[0].clone();
        let shrunk: Vec<(Vec<f64>, (f64, T))> = simplex[1..]
            .par_iter()
            .map(|v| {
                let x = along(&best, v, options.shrink);
                let fx = f(&x);
                (x, fx)
            })
            .collect();
        for (i, (x, (fx, ax))) in shrunk.into_iter().enumerate() {
            simplex[i + 1] = x;
            values[i + 1] = fx;
            aux[i + 1] = ax;
        }
    }
    Minimum {
        point: simplex.swap_remove(0),
        value: values[0],
        iterations,
        converged,
    }
}
