//! Bounded Nelder–Mead simplex descent.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han (2012). Every trial
//! point is clamped back into the box. Periodic coordinates move freely during
//! the search, so the simplex never straddles the wrap point, and are wrapped
//! on return. After the simplex collapses the search restarts around the best
//! vertex, which guards against premature convergence on a degenerate simplex.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Bound {
    Clamp { lo: f64, hi: f64 },
    Periodic { lo: f64, hi: f64 },
}

impl Bound {
    pub fn clamp(lo: f64, hi: f64) -> Self {
        Bound::Clamp { lo, hi }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Bound::Periodic { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        match *self {
            Bound::Clamp { lo, .. } | Bound::Periodic { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Bound::Clamp { hi, .. } | Bound::Periodic { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi() - self.lo()
    }

    pub fn is_valid(&self) -> bool {
        self.lo().is_finite() && self.hi().is_finite() && self.hi() >= self.lo()
    }

    pub fn project(&self, x: f64) -> f64 {
        match *self {
            Bound::Clamp { lo, hi } => x.clamp(lo, hi),
            Bound::Periodic { lo, hi } => {
                let w = hi - lo;
                if w <= 0.0 {
                    lo
                } else {
                    lo + (x - lo).rem_euclid(w)
                }
            }
        }
    }

    /// Map u ∈ [0, 1] onto the interval.
    pub fn sample(&self, u: f64) -> f64 {
        self.project(self.lo() + u * self.width())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// Initial edge length as a fraction of each bound's width.
    pub step: f64,
    pub restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            ftol: 1e-13,
            step: 0.1,
            restarts: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

fn project(bounds: &[Bound], x: &mut [f64]) {
    for (xi, b) in x.iter_mut().zip(bounds) {
        if let Bound::Clamp { lo, hi } = *b {
            *xi = xi.clamp(lo, hi);
        }
    }
}

impl NelderMead {
    pub fn minimize<F: Fn(&[f64]) -> f64>(&self, f: F, x0: &[f64], bounds: &[Bound]) -> Minimum {
        assert_eq!(x0.len(), bounds.len());
        let eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut best_x = x0.to_vec();
        project(bounds, &mut best_x);
        let mut best_f = eval(&best_x);
        let mut evals = 1;
        let mut step = self.step;
        for _ in 0..=self.restarts {
            if evals >= self.max_evals {
                break;
            }
            let (x, fx, used) = self.run(&eval, &best_x, best_f, bounds, step, self.max_evals - evals);
            evals += used;
            let improved = fx < best_f - self.ftol;
            if fx <= best_f {
                best_x = x;
                best_f = fx;
            }
            if !improved {
                break;
            }
            step *= 0.5;
        }
        for (xi, b) in best_x.iter_mut().zip(bounds) {
            *xi = b.project(*xi);
        }
        Minimum {
            x: best_x,
            f: best_f,
            evals,
        }
    }

    fn run<F: Fn(&[f64]) -> f64>(
        &self,
        f: &F,
        x0: &[f64],
        f0: f64,
        bounds: &[Bound],
        step: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize) {
        let n = x0.len();
        let nf = n as f64;
        let (alpha, beta) = (1.0, 1.0 + 2.0 / nf);
        let gamma = (0.75 - 0.5 / nf).max(0.25);
        let delta = (1.0 - 1.0 / nf).max(0.5);

        let mut evals = 0;
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
        for i in 0..n {
            let mut x = x0.to_vec();
            let h = step * bounds[i].width().max(1e-12);
            // step inward if the vertex would leave a clamped box
            x[i] = if let Bound::Clamp { hi, .. } = bounds[i] {
                if x0[i] + h > hi {
                    x0[i] - h
                } else {
                    x0[i] + h
                }
            } else {
                x0[i] + h
            };
            project(bounds, &mut x);
            let fx = f(&x);
            evals += 1;
            simplex.push((x, fx));
        }

        while evals < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if !(spread > self.ftol) {
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|v| v.0[k]).sum::<f64>() / nf)
                .collect();
            let along = |t: f64| {
                let mut x: Vec<f64> = (0..n)
                    .map(|k| centroid[k] + t * (simplex[n].0[k] - centroid[k]))
                    .collect();
                project(bounds, &mut x);
                x
            };

            let xr = along(-alpha);
            let fr = f(&xr);
            evals += 1;
            if fr < simplex[0].1 {
                let xe = along(-alpha * beta);
                let fe = f(&xe);
                evals += 1;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(-alpha * gamma);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(gamma);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let best = simplex[0].0.clone();
            for v in simplex.iter_mut().skip(1) {
                for (x, b) in v.0.iter_mut().zip(&best) {
                    *x = b + delta * (*x - b);
                }
                project(bounds, &mut v.0);
                v.1 = f(&v.0);
                evals += 1;
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, fx) = simplex.swap_remove(0);
        (x, fx, evals)
    }
}
