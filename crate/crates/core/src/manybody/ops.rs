use crate::{C64, CMat, Error, Result};
use ndarray::Array2;

/// The three su(2) generators on one site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOp {
    Plus,
    Minus,
    Z,
}

type Local = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn local(kind: SpinOp) -> Local {
    let half = C64::new(0.5, 0.0);
    match kind {
        // Local basis index 0 = up, 1 = down.
        SpinOp::Plus => [[ZERO, ONE], [ZERO, ZERO]],
        SpinOp::Minus => [[ZERO, ZERO], [ONE, ZERO]],
        SpinOp::Z => [[half, ZERO], [ZERO, -half]],
    }
}

fn local_mul(a: &Local, b: &Local) -> Local {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Accumulates sums of one- and two-site spin terms into one dense matrix.
///
/// All terms are applied by bit arithmetic on the basis index; no Kronecker
/// chains are built.
pub struct OpBuilder {
    length: usize,
    matrix: CMat,
}

impl OpBuilder {
    pub fn new(length: usize) -> Self {
        let dim = 1usize << length;
        OpBuilder {
            length,
            matrix: Array2::from_elem((dim, dim), ZERO),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn add_identity(&mut self, coeff: C64) {
        let dim = self.matrix.nrows();
        for b in 0..dim {
            self.matrix[(b, b)] += coeff;
        }
    }

    fn add_local(&mut self, m: &Local, site: usize, coeff: C64) {
        let dim = self.matrix.nrows();
        let shift = site - 1;
        for col in 0..dim {
            let s = (col >> shift) & 1;
            for (sp, row_m) in m.iter().enumerate() {
                let amp = row_m[s];
                if amp == ZERO {
                    continue;
                }
                let row = (col & !(1 << shift)) | (sp << shift);
                self.matrix[(row, col)] += coeff * amp;
            }
        }
    }

    /// Adds `coeff · S_j^{a}`.
    pub fn add_one_site(&mut self, a: SpinOp, j: usize, coeff: C64) {
        self.add_local(&local(a), j, coeff);
    }

    /// Adds `coeff · S_j^{a} S_k^{b}`. The two factors may share a site, in
    /// which case the local matrices are multiplied in the given order.
    pub fn add_two_site(&mut self, a: SpinOp, j: usize, b: SpinOp, k: usize, coeff: C64) {
        if j == k {
            let m = local_mul(&local(a), &local(b));
            self.add_local(&m, j, coeff);
            return;
        }
        let ma = local(a);
        let mb = local(b);
        let dim = self.matrix.nrows();
        let sj = j - 1;
        let sk = k - 1;
        for col in 0..dim {
            let s1 = (col >> sj) & 1;
            let s2 = (col >> sk) & 1;
            for (s1p, row_a) in ma.iter().enumerate() {
                let a1 = row_a[s1];
                if a1 == ZERO {
                    continue;
                }
                for (s2p, row_b) in mb.iter().enumerate() {
                    let a2 = row_b[s2];
                    if a2 == ZERO {
                        continue;
                    }
                    let row = (col & !(1 << sj) & !(1 << sk)) | (s1p << sj) | (s2p << sk);
                    self.matrix[(row, col)] += coeff * a1 * a2;
                }
            }
        }
    }

    pub fn build(self) -> CMat {
        self.matrix
    }
}

/// `S_j^{kind}` embedded on the full 2^L space.
pub fn site_operator(kind: SpinOp, j: usize, length: usize) -> Result<CMat> {
    if j == 0 || j > length {
        return Err(Error::IndexOutOfRange { index: j, len: length });
    }
    let mut builder = OpBuilder::new(length);
    builder.add_one_site(kind, j, ONE);
    Ok(builder.build())
}
