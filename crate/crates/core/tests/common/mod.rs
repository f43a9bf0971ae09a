//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use mamqa::{ObjectiveVector, ProblemInstance};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `σᶻ` of spin `i` in basis state `z` as a float, built from the bit
/// pattern without going through the library's configuration type.
pub fn spin_value(z: u64, i: usize) -> f64 {
    if (z >> i) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `E_m(z)` re-summed edge by edge as a product of spin values.
pub fn brute_energy(inst: &ProblemInstance, z: u64, m: usize) -> f64 {
    let mut e = 0.0;
    for edge in inst.edges() {
        e -= edge.w[m] * spin_value(z, edge.i) * spin_value(z, edge.j);
    }
    e
}

pub fn brute_scalarized(inst: &ProblemInstance, z: u64, omega: &[f64]) -> f64 {
    let mut e = 0.0;
    for edge in inst.edges() {
        let w: f64 = edge.w.iter().zip(omega).map(|(a, b)| a * b).sum();
        e -= w * spin_value(z, edge.i) * spin_value(z, edge.j);
    }
    for (i, h) in inst.fields().iter().enumerate() {
        e -= h * spin_value(z, i);
    }
    e
}

pub type Dense = Vec<Vec<f64>>;

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0.0; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn identity(d: usize) -> Dense {
    (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

/// Tensor product over `n` sites with `ops[i]` on spin `i`; spin 0 is the
/// rightmost (least significant) factor.
fn site_product(n: usize, ops: &[(usize, &Dense)]) -> Dense {
    let mut out = identity(1);
    for site in (0..n).rev() {
        let factor = ops
            .iter()
            .find(|(i, _)| *i == site)
            .map(|(_, op)| (*op).clone())
            .unwrap_or_else(|| identity(2));
        out = kron(&out, &factor);
    }
    out
}

fn add_scaled(acc: &mut Dense, m: &Dense, c: f64) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (a, x) in ra.iter_mut().zip(rm) {
            *a += c * x;
        }
    }
}

/// `A·(−Σ σˣ_i) + B·(−Σ W σᶻσᶻ − Σ h σᶻ)` assembled term by term from Pauli matrices.
pub fn kronecker_hamiltonian(inst: &ProblemInstance, omega: &[f64], a: f64, b: f64) -> Dense {
    let n = inst.n();
    let x: Dense = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let zz: Dense = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
    let mut h = vec![vec![0.0; 1 << n]; 1 << n];
    for i in 0..n {
        add_scaled(&mut h, &site_product(n, &[(i, &x)]), -a);
    }
    for e in inst.edges() {
        let w: f64 = e.w.iter().zip(omega).map(|(p, q)| p * q).sum();
        add_scaled(&mut h, &site_product(n, &[(e.i, &zz), (e.j, &zz)]), -b * w);
    }
    for (i, &field) in inst.fields().iter().enumerate() {
        if field != 0.0 {
            add_scaled(&mut h, &site_product(n, &[(i, &zz)]), -b * field);
        }
    }
    h
}

pub fn matvec(m: &Dense, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(m: &Dense) -> Vec<f64> {
    let n = m.len();
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Quadratic dominance filter over distinct vectors, ascending.
pub fn pairwise_nondominated(set: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let mut distinct: Vec<ObjectiveVector> = Vec::new();
    for v in set {
        if !distinct.contains(v) {
            distinct.push(v.clone());
        }
    }
    let dominated = |a: &ObjectiveVector, b: &ObjectiveVector| {
        let av = a.values();
        let bv = b.values();
        av.iter().zip(bv).all(|(x, y)| x <= y) && av.iter().zip(bv).any(|(x, y)| x < y)
    };
    let mut out: Vec<ObjectiveVector> = distinct
        .iter()
        .filter(|v| !distinct.iter().any(|u| dominated(u, v)))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Area oracle: one uniform sample inside each cell of a 2000 × 2000 grid.
pub fn monte_carlo_area(points: &[ObjectiveVector], lo: (f64, f64), hi: (f64, f64), rng: &mut ChaCha8Rng) -> (f64, f64) {
    let cells = 2000usize;
    let (dx, dy) = ((hi.0 - lo.0) / cells as f64, (hi.1 - lo.1) / cells as f64);
    let mut hits = 0u64;
    for i in 0..cells {
        for j in 0..cells {
            let x = lo.0 + (i as f64 + rng.random::<f64>()) * dx;
            let y = lo.1 + (j as f64 + rng.random::<f64>()) * dy;
            if points.iter().any(|p| p.get(0) <= x && p.get(1) <= y) {
                hits += 1;
            }
        }
    }
    let total = (cells * cells) as f64;
    let frac = hits as f64 / total;
    let box_area = (hi.0 - lo.0) * (hi.1 - lo.1);
    let sigma = (frac * (1.0 - frac) / total).sqrt() * box_area;
    (frac * box_area, sigma)
}
