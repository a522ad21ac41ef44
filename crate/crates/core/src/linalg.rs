//! Dense complex linear algebra shared by the operator builders and the
//! propagators.

use faer::{Col, Mat, Side};

use crate::{Error, Result, C64};

pub type CMat = Mat<C64>;
pub type CVec = Col<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn adjoint(m: &CMat) -> CMat {
    m.as_ref().adjoint().to_owned()
}

pub fn scale(m: &CMat, k: C64) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * k)
}

/// Largest entry of |M − M†|.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// ⟨a|b⟩.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    (0..a.nrows()).map(|i| a[i].conj() * b[i]).sum()
}

pub fn norm_sqr(v: &CVec) -> f64 {
    (0..v.nrows()).map(|i| v[i].norm_sqr()).sum()
}

/// ‖a − b‖₂.
pub fn distance(a: &CVec, b: &CVec) -> f64 {
    (0..a.nrows())
        .map(|i| (a[i] - b[i]).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn matvec(m: &CMat, v: &CVec) -> CVec {
    m * v
}

/// ⟨ψ|O|ψ⟩.
pub fn expectation(op: &CMat, psi: &CVec) -> C64 {
    inner(psi, &matvec(op, psi))
}

/// Eigendecomposition H = V diag(λ) V† of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(h: &CMat) -> Result<Self> {
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Invariant(format!("eigendecomposition failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let values = (0..s.nrows()).map(|i| s[i].re).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    /// exp(−i H t) ψ.
    pub fn evolve(&self, psi: &CVec, t: f64) -> CVec {
        let mut coeffs: CVec = self.vectors.as_ref().adjoint() * psi;
        for (k, &lambda) in self.values.iter().enumerate() {
            coeffs[k] *= C64::from_polar(1.0, -lambda * t);
        }
        &self.vectors * &coeffs
    }

    /// exp(−i H t) as a matrix.
    pub fn propagator(&self, t: f64) -> CMat {
        let n = self.values.len();
        let phases: Vec<C64> = self
            .values
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * t))
            .collect();
        let v = &self.vectors;
        Mat::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_dimensions_and_entries() {
        let a = Mat::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, 0.0));
        let b = Mat::from_fn(2, 2, |i, j| C64::new(0.0, (i + j) as f64));
        let k = kron(&a, &b);
        assert_eq!((k.nrows(), k.ncols()), (4, 4));
        assert_eq!(k[(3, 2)], a[(1, 1)] * b[(1, 0)]);
        assert_eq!(k[(1, 2)], a[(0, 1)] * b[(1, 0)]);
    }

    #[test]
    fn exponential_of_pauli_x() {
        let x = Mat::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO });
        let eig = HermitianEigen::new(&x).unwrap();
        let t = 0.37;
        let u = eig.propagator(t);
        assert!((u[(0, 0)] - C64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - C64::new(0.0, -t.sin())).norm() < 1e-14);
        let psi = Col::from_fn(2, |i| if i == 0 { ONE } else { ZERO });
        let out = eig.evolve(&psi, t);
        assert!((out[1] - u[(1, 0)]).norm() < 1e-14);
    }
}
