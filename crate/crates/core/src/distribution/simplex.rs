//! Nelder–Mead downhill simplex.

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions<T> {
    /// Stop once the largest vertex distance from the best vertex falls below this.
    pub diameter_tol: T,
    pub max_evals: usize,
    /// Edge length of the initial simplex along each axis.
    pub initial_step: T,
}

impl<T: Scalar> Default for SimplexOptions<T> {
    fn default() -> Self {
        Self {
            diameter_tol: lit(1e-9),
            max_evals: 20_000,
            initial_step: lit(0.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evals: usize,
    pub diameter: T,
    pub converged: bool,
}

fn diameter<T: Scalar>(simplex: &[Vec<T>]) -> T {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (*a - *b) * (*a - *b))
                .sum::<T>()
                .sqrt()
        })
        .fold(T::zero(), T::max)
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as +inf.
pub fn nelder_mead<T, F>(mut f: F, x0: &[T], opts: &SimplexOptions<T>) -> SimplexResult<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (T::one(), lit::<T>(2.0), lit::<T>(0.5), lit::<T>(0.5));
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    let mut simplex: Vec<Vec<T>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] = v[i] + opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<T> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    loop {
        // order vertices by value
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let d = diameter(&simplex);
        if d < opts.diameter_tol || evals >= opts.max_evals {
            return SimplexResult {
                x: simplex[0].clone(),
                value: values[0],
                evals,
                diameter: d,
                converged: d < opts.diameter_tol,
            };
        }

        let nf = T::from_usize(n).unwrap();
        let centroid: Vec<T> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<T>() / nf)
            .collect();
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(&c, &w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < values[0] {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evals);
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
            let xc = along(rho * alpha);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let shrunk: Vec<T> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(&b, &v)| b + sigma * (v - b))
                .collect();
            values[i] = eval(&shrunk, &mut evals);
            simplex[i] = shrunk;
        }
    }
}
