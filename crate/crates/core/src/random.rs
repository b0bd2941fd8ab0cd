//! Seeded random generators for states and channels, used by the property
//! tests, the examples and parameter sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cptp::KrausMap;
use crate::linalg::{c64, mat_power, ComplexMatrix, DensityMatrix, C64};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn random_complex_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_complex_matrix(dim, rng).hermitian_part()
}

/// Full-rank density matrix `G G† / Tr[G G†]`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = random_complex_matrix(dim, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("Wishart matrices are valid states")
}

/// Haar-distributed unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_complex_matrix(dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random CPTP map with `count` Kraus operators, obtained by normalizing a
/// stack of Ginibre blocks into an isometry.
pub fn random_kraus_map<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> KrausMap {
    let blocks: Vec<ComplexMatrix> = (0..count).map(|_| random_complex_matrix(dim, rng)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for g in &blocks {
        s = &s + &g.adjoint().matmul(g);
    }
    let t = mat_power(&s.hermitian_part(), -0.5).expect("Ginibre Gram matrix is positive definite");
    KrausMap::new(blocks.iter().map(|g| g.matmul(&t)).collect()).expect("shapes agree")
}

/// Random mixture of unitaries; always unital.
pub fn random_mixed_unitary_map<R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> KrausMap {
    let w: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = w.iter().sum();
    KrausMap::new(w.iter().map(|p| random_unitary(dim, rng).scale_real((p / total).sqrt())).collect())
        .expect("shapes agree")
}

/// Random probability vector bounded away from zero.
pub fn random_probabilities<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Channel whose Kraus operators are single jumps `|π_j⟩⟨π_i|` plus one
/// operator diagonal in the eigenbasis of its invariant state.
///
/// Jump weights satisfy detailed balance with respect to a random full-rank
/// `π`, so every operator carries a single change of the nonequilibrium
/// potential. The eigenbasis is rotated by a random unitary. Returns the map
/// together with its invariant state.
pub fn random_detailed_balance_map<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (KrausMap, DensityMatrix) {
    let p = random_probabilities(dim, rng);
    let u = random_unitary(dim, rng);
    // symmetric flows w_ij = T_ji p_i
    let mut t = vec![vec![0.0; dim]; dim];
    let pmin = p.iter().cloned().fold(f64::INFINITY, f64::min);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let w = rng.random::<f64>() * pmin / dim as f64;
            t[j][i] = w / p[i];
            t[i][j] = w / p[j];
        }
    }
    for i in 0..dim {
        let out: f64 = (0..dim).filter(|&j| j != i).map(|j| t[j][i]).sum();
        t[i][i] = 1.0 - out;
    }
    let ket = |k: usize| u.column(k);
    let mut ops = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j && t[j][i] > 0.0 {
                ops.push(ComplexMatrix::outer(&ket(j), &ket(i)).scale_real(t[j][i].sqrt()));
            }
        }
    }
    let phases: Vec<C64> =
        (0..dim).map(|i| C64::from_polar(t[i][i].sqrt(), rng.random::<f64>() * std::f64::consts::TAU)).collect();
    let diag = u.matmul(&ComplexMatrix::diag_complex(&phases)).matmul(&u.adjoint());
    ops.push(diag);
    let pi = DensityMatrix::new(u.matmul(&ComplexMatrix::diag(&p)).matmul(&u.adjoint()).hermitian_part())
        .expect("rotated probability vector is a state");
    (KrausMap::new(ops).expect("at most d^2 - d + 1 operators"), pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(5);
        let u = random_unitary(4, &mut rng);
        assert!(u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn generated_maps_are_cptp() {
        let mut rng = seeded(9);
        for d in 2..=4 {
            assert!(random_kraus_map(d, 3, &mut rng).validate().is_cptp());
            let r = random_mixed_unitary_map(d, 3, &mut rng).validate();
            assert!(r.is_cptp() && r.unital);
            let (m, pi) = random_detailed_balance_map(d, &mut rng);
            assert!(m.validate().is_cptp());
            let out = m.apply_matrix(pi.matrix()).unwrap();
            assert!(out.max_abs_diff(pi.matrix()) < 1e-12);
        }
    }
}
