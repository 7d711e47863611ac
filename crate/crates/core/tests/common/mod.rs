//! Shared helpers for the integration test suite: seeded RNG, least-squares
//! order fits, and an independent finite-difference reference solver for the
//! coupled characteristic system used to measure footpoint orders.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG so every test run draws the same samples.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Least-squares slope of log(err) against log(t).
///
/// Points with a non-finite logarithm (zero or negative error) are rejected
/// by panic: the callers only fit genuinely positive error sequences.
pub fn loglog_slope(ts: &[f64], errs: &[f64]) -> f64 {
    assert_eq!(ts.len(), errs.len());
    assert!(ts.len() >= 2, "need at least two points for a slope");
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(errs)
        .map(|(&t, &e)| {
            assert!(t > 0.0 && e > 0.0, "order fit needs positive (t, err), got ({t}, {e})");
            (t.ln(), e.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Maximum absolute difference between two equal-length slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Characteristic speeds of the shallow-water Riemann invariants
/// (w1, w2) = (u − 2c, u + 2c): both are linear,
/// λ1 = (3 w1 + w2)/4 and λ2 = (w1 + 3 w2)/4, and each family's speed
/// depends on the OTHER family's value, so the system is genuinely coupled.
pub fn swe_char_speeds(w: &[f64]) -> Vec<f64> {
    vec![0.25 * (3.0 * w[0] + w[1]), 0.25 * (w[0] + 3.0 * w[1])]
}

/// Finite-difference solution of the coupled characteristic system
///
///   d w_j / dt + λ_j(w) · d w_j / dx = 0,   j = 1..m,   periodic on [0, 1],
///
/// advanced with classical RK4 in time and 4th-order central differences in
/// space, storing snapshots every `snap_every` steps. Entirely independent
/// of the library's evolution code; used as ground truth for footpoint-order
/// measurements.
pub struct CharField {
    pub nx: usize,
    pub dx: f64,
    pub dt: f64,
    pub snap_every: usize,
    /// snapshots[k][j][i] = w_j at x_i, t = k · snap_every · dt.
    pub snapshots: Vec<Vec<Vec<f64>>>,
}

impl CharField {
    /// Solve forward from `initial` component profiles for `n_steps` steps.
    pub fn solve<S>(
        nx: usize,
        dt: f64,
        n_steps: usize,
        snap_every: usize,
        initial: &[Box<dyn Fn(f64) -> f64>],
        speeds: S,
    ) -> CharField
    where
        S: Fn(&[f64]) -> Vec<f64>,
    {
        assert!(n_steps.is_multiple_of(snap_every), "snapshots must tile the run");
        let m = initial.len();
        let dx = 1.0 / nx as f64;
        let mut w: Vec<Vec<f64>> = (0..m)
            .map(|j| (0..nx).map(|i| initial[j](i as f64 * dx)).collect())
            .collect();
        let mut snapshots = vec![w.clone()];

        // semi-discrete right-hand side: −λ_j(w)·Dx w_j with 4th-order stencil
        let rhs = |w: &[Vec<f64>]| -> Vec<Vec<f64>> {
            let mut out = vec![vec![0.0; nx]; m];
            let mut state = vec![0.0; m];
            for i in 0..nx {
                for j in 0..m {
                    state[j] = w[j][i];
                }
                let lam = speeds(&state);
                let im2 = (i + nx - 2) % nx;
                let im1 = (i + nx - 1) % nx;
                let ip1 = (i + 1) % nx;
                let ip2 = (i + 2) % nx;
                for j in 0..m {
                    let dwdx =
                        (w[j][im2] - 8.0 * w[j][im1] + 8.0 * w[j][ip1] - w[j][ip2]) / (12.0 * dx);
                    out[j][i] = -lam[j] * dwdx;
                }
            }
            out
        };
        let saxpy = |w: &[Vec<f64>], k: &[Vec<f64>], a: f64| -> Vec<Vec<f64>> {
            w.iter()
                .zip(k)
                .map(|(wj, kj)| wj.iter().zip(kj).map(|(x, d)| x + a * d).collect())
                .collect()
        };

        for step in 1..=n_steps {
            let k1 = rhs(&w);
            let k2 = rhs(&saxpy(&w, &k1, 0.5 * dt));
            let k3 = rhs(&saxpy(&w, &k2, 0.5 * dt));
            let k4 = rhs(&saxpy(&w, &k3, dt));
            for j in 0..m {
                for i in 0..nx {
                    w[j][i] +=
                        dt / 6.0 * (k1[j][i] + 2.0 * k2[j][i] + 2.0 * k3[j][i] + k4[j][i]);
                }
            }
            if step % snap_every == 0 {
                snapshots.push(w.clone());
            }
        }
        CharField { nx, dx, dt, snap_every, snapshots }
    }

    fn dt_snap(&self) -> f64 {
        self.dt * self.snap_every as f64
    }

    /// Component j at position x in snapshot k, by 6-point Lagrange
    /// interpolation on the periodic grid (O(dx⁶) accurate).
    pub fn sample(&self, k: usize, j: usize, x: f64) -> f64 {
        let grid = &self.snapshots[k][j];
        let xw = x - x.floor(); // wrap into [0, 1)
        let base = (xw / self.dx).floor() as isize;
        // nodes base−2 … base+3
        let mut value = 0.0;
        for a in -2..=3_isize {
            let ia = base + a;
            let xa = ia as f64 * self.dx;
            let mut lag = 1.0;
            for b in -2..=3_isize {
                if b != a {
                    let xb = (base + b) as f64 * self.dx;
                    lag *= (xw - xb) / (xa - xb);
                }
            }
            let idx = ((ia % self.nx as isize) + self.nx as isize) as usize % self.nx;
            value += lag * grid[idx];
        }
        value
    }

    /// Snapshot index of time t (must align with the snapshot spacing).
    fn snap_index(&self, t: f64) -> usize {
        let k = t / self.dt_snap();
        let ki = k.round();
        assert!(
            (k - ki).abs() < 1e-9,
            "time {t} does not align with the snapshot spacing {}",
            self.dt_snap()
        );
        ki as usize
    }

    /// Field value w_j(x, t) at a snapshot-aligned time.
    pub fn value(&self, j: usize, x: f64, t: f64) -> f64 {
        self.sample(self.snap_index(t), j, x)
    }

    /// Exact backward characteristic footpoint of family `j` from (x, t):
    /// integrates dX/dτ = λ_j(w(X, τ)) from τ = t down to 0 with RK4 steps
    /// of 2 snapshot intervals, so every stage lands on a stored snapshot.
    pub fn footpoint<S>(&self, j: usize, x: f64, t: f64, speeds: S) -> f64
    where
        S: Fn(&[f64]) -> Vec<f64>,
    {
        let m = self.snapshots[0].len();
        let h_units = 2; // snapshots per RK4 step
        let k_top = self.snap_index(t);
        assert!(k_top.is_multiple_of(h_units), "footpoint time must span whole RK4 steps");
        let h = -(self.dt_snap() * h_units as f64);
        let speed_at = |xx: f64, k: usize| -> f64 {
            let state: Vec<f64> = (0..m).map(|c| self.sample(k, c, xx)).collect();
            speeds(&state)[j]
        };
        let mut xpos = x;
        let mut k = k_top;
        while k > 0 {
            let k1 = speed_at(xpos, k);
            let k2 = speed_at(xpos + 0.5 * h * k1, k - 1);
            let k3 = speed_at(xpos + 0.5 * h * k2, k - 1);
            let k4 = speed_at(xpos + h * k3, k - 2);
            xpos += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            k -= h_units;
        }
        xpos
    }
}
