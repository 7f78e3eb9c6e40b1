//! Linear systems whose unknowns are a list of matrix blocks. Equations are
//! given as a linear map on the blocks; its coefficient matrix is assembled by
//! evaluating the map on unit blocks.

use crate::exactalg::{Field, Matrix, Scalar, Span};

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    field: Field,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    len: usize,
}

impl Layout {
    pub fn new(field: Field, shapes: &[(usize, usize)]) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut len = 0;
        for &(r, c) in shapes {
            offsets.push(len);
            len += r * c;
        }
        Layout { field, shapes: shapes.to_vec(), offsets, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn zero_blocks(&self) -> Vec<Matrix> {
        self.shapes.iter().map(|&(r, c)| Matrix::zeros(self.field, r, c)).collect()
    }

    pub fn unpack(&self, v: &[Scalar]) -> Vec<Matrix> {
        assert_eq!(v.len(), self.len);
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &o)| Matrix::from_vector(self.field, r, c, &v[o..o + r * c]))
            .collect()
    }

    pub fn pack(&self, blocks: &[Matrix]) -> Vec<Scalar> {
        assert_eq!(blocks.len(), self.shapes.len());
        let mut v = Vec::with_capacity(self.len);
        for (b, &(r, c)) in blocks.iter().zip(&self.shapes) {
            assert!(b.rows() == r && b.cols() == c, "block shape");
            v.extend(b.entries().iter().cloned());
        }
        v
    }

    /// Coefficient matrix of a linear map from blocks to residual blocks.
    /// `map` must be linear; rows follow the flattened residual blocks.
    pub fn operator_matrix(&self, map: impl Fn(&[Matrix]) -> Vec<Matrix>) -> Matrix {
        let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(self.len);
        let mut height = None;
        for u in 0..self.len {
            let mut v = vec![self.field.zero(); self.len];
            v[u] = self.field.one();
            let out: Vec<Scalar> = map(&self.unpack(&v)).into_iter().flat_map(Matrix::into_entries).collect();
            height.get_or_insert(out.len());
            columns.push(out);
        }
        let height = height.unwrap_or_else(|| map(&self.zero_blocks()).iter().map(|m| m.rows() * m.cols()).sum());
        Matrix::from_columns(self.field, height, &columns)
    }
}

/// Solution space of a homogeneous system modulo a gauge subspace.
#[derive(Clone, Debug)]
pub(crate) struct GaugeQuotient {
    pub nullity: usize,
    pub gauge_rank: usize,
    /// Kernel vectors completing a basis of the gauge span to one of the kernel.
    pub representatives: Vec<Vec<Scalar>>,
}

pub(crate) fn kernel_modulo(field: Field, unknowns: usize, system: &Matrix, gauge: &[Vec<Scalar>]) -> GaugeQuotient {
    let kernel: Vec<Vec<Scalar>> = if system.rows() == 0 {
        (0..unknowns)
            .map(|u| (0..unknowns).map(|v| if u == v { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        system.rank_and_kernel().1
    };
    let mut span = Span::new(field, unknowns);
    for g in gauge {
        span.insert(g);
    }
    let gauge_rank = span.dim();
    let representatives = kernel.iter().filter(|v| span.insert(v)).cloned().collect();
    GaugeQuotient { nullity: kernel.len(), gauge_rank, representatives }
}
