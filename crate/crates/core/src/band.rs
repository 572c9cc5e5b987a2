//! Square banded matrices, enough to evaluate polynomials of a Jacobi matrix.

/// Symmetric-band storage: entries (i, j) with |i − j| ≤ `bw`.
#[derive(Debug, Clone)]
pub struct Band {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Band {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Band {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut b = Band::zeros(n, 0);
        for i in 0..n {
            b.set(i, i, 1.0);
        }
        b
    }

    /// Tridiagonal matrix with `diag[i]` on the diagonal and `off[i]` at (i, i−1) and (i−1, i).
    /// `off[0]` is ignored.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let n = diag.len();
        let mut b = Band::zeros(n, 1);
        for i in 0..n {
            b.set(i, i, diag[i]);
            if i > 0 {
                b.set(i, i - 1, off[i]);
                b.set(i - 1, i, off[i]);
            }
        }
        b
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let d = j as isize - i as isize;
        if i >= self.n || j >= self.n || d.unsigned_abs() > self.bw {
            None
        } else {
            Some(i * (2 * self.bw + 1) + (d + self.bw as isize) as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside band");
        self.data[k] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside band");
        self.data[k] += v;
    }

    pub fn mul(&self, other: &Band) -> Band {
        assert_eq!(self.n, other.n);
        let bw = (self.bw + other.bw).min(self.n.saturating_sub(1));
        let mut out = Band::zeros(self.n, bw);
        for i in 0..self.n {
            let klo = i.saturating_sub(self.bw);
            let khi = (i + self.bw).min(self.n - 1);
            for k in klo..=khi {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let jlo = k.saturating_sub(other.bw);
                let jhi = (k + other.bw).min(self.n - 1);
                for j in jlo..=jhi {
                    out.add(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    fn add_scaled_identity(&mut self, c: f64) {
        for i in 0..self.n {
            self.add(i, i, c);
        }
    }

    /// Σ_k c_k A^k by Horner's rule; `coeffs` lowest degree first.
    pub fn poly_eval(&self, coeffs: &[f64]) -> Band {
        let mut acc = Band::zeros(self.n, 0);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self);
            acc.add_scaled_identity(c);
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Band {
        let mut acc = Band::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}
