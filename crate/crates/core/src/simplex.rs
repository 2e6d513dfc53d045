//! Nelder–Mead simplex minimization with optional projection onto a box.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop once every vertex lies within this ∞-norm distance of the best.
    pub diameter_tol: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` starting from `start`, with initial edge lengths `steps`.
///
/// `bounds`, when given, clamps every trial point coordinate-wise. The start
/// point is always a vertex, so the result is never worse than `f(start)`.
pub fn minimize<F>(
    mut f: F,
    start: &[f64],
    steps: &[f64],
    bounds: Option<(&[f64], &[f64])>,
    options: SimplexOptions,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    assert_eq!(steps.len(), n);
    let project = |p: &mut [f64]| {
        if let Some((lo, hi)) = bounds {
            for ((v, &l), &h) in p.iter_mut().zip(lo).zip(hi) {
                *v = v.clamp(l, h);
            }
        }
    };

    let mut evaluations = 0usize;
    let mut eval = |p: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(p)
    };

    if n == 0 {
        let value = eval(start, &mut evaluations);
        return SimplexResult {
            point: Vec::new(),
            value,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += steps[i];
        project(&mut v);
        if v[i] == start[i] {
            // pinned against an upper bound: step the other way
            v[i] = start[i] - steps[i];
            project(&mut v);
        }
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v, &mut evaluations)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut order: Vec<usize> = (0..=n).collect();

    loop {
        // Stable sort keeps earlier vertices first among equal values.
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let diameter = vertices
            .iter()
            .flat_map(|v| v.iter().zip(&vertices[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < options.diameter_tol {
            converged = true;
            break;
        }
        if iterations >= options.max_iterations {
            break;
        }
        iterations += 1;

        let worst = order[n];
        let second_worst = order[n - 1];
        let mut centroid = vec![0.0; n];
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&vertices[idx]) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&vertices[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect();
            project(&mut p);
            p
        };

        let reflected = along(REFLECT);
        let fr = eval(&reflected, &mut evaluations);
        if fr < values[best] {
            let expanded = along(EXPAND);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                vertices[worst] = expanded;
                values[worst] = fe;
            } else {
                vertices[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            vertices[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[worst] {
            let p = along(CONTRACT);
            let v = eval(&p, &mut evaluations);
            (p, v)
        } else {
            let p = along(-CONTRACT);
            let v = eval(&p, &mut evaluations);
            (p, v)
        };
        if fc < values[worst].min(fr) {
            vertices[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        let anchor = vertices[best].clone();
        for &idx in &order[1..] {
            let mut p: Vec<f64> = anchor
                .iter()
                .zip(&vertices[idx])
                .map(|(a, v)| a + SHRINK * (v - a))
                .collect();
            project(&mut p);
            values[idx] = eval(&p, &mut evaluations);
            vertices[idx] = p;
        }
    }

    let best = order[0];
    SimplexResult {
        point: vertices[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}
