//! Rolling dot products between an anchor window and every window of the series.

use crate::series::AuxiliarySeries;

/// Dot product of `query` with every length-`query.len()` window of `series`.
///
/// Accumulated one query element at a time across all windows so the inner
/// loop is a plain `axpy`; each entry still sums its `m` terms in order.
pub fn sliding_dot_product(query: &[f64], series: &[f64]) -> Vec<f64> {
    let m = query.len();
    assert!(m >= 1 && m <= series.len(), "query longer than series");
    let len = series.len() + 1 - m;
    let mut out = vec![0.0; len];
    for (k, &q) in query.iter().enumerate() {
        let src = &series[k..k + len];
        for (o, &s) in out.iter_mut().zip(src) {
            *o += q * s;
        }
    }
    out
}

/// Entry `j` is the dot product of the first window of `a` with window `j` of `b`.
pub fn init_dot_products(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    assert!(m <= a.len() && m <= b.len());
    sliding_dot_product(&a[..m], b)
}

/// The six dot-product vectors of one anchor window against all windows:
/// `Z.Z`, `B.B`, `B.Z`, `Z.B`, `B.X`, `X.B` (anchor side first).
#[derive(Debug, Clone, PartialEq)]
pub struct DotProductRow {
    pub anchor: usize,
    pub qz: Vec<f64>,
    pub qb: Vec<f64>,
    pub bz: Vec<f64>,
    pub zb: Vec<f64>,
    pub bx: Vec<f64>,
    pub xb: Vec<f64>,
}

impl DotProductRow {
    /// Direct evaluation of the row for `anchor`.
    pub fn at_anchor(aux: &AuxiliarySeries, m: usize, anchor: usize) -> Self {
        let w = anchor..anchor + m;
        Self {
            anchor,
            qz: sliding_dot_product(&aux.z[w.clone()], &aux.z),
            qb: sliding_dot_product(&aux.bind[w.clone()], &aux.bind),
            bz: sliding_dot_product(&aux.bind[w.clone()], &aux.z),
            zb: sliding_dot_product(&aux.z[w.clone()], &aux.bind),
            bx: sliding_dot_product(&aux.bind[w.clone()], &aux.x),
            xb: sliding_dot_product(&aux.x[w], &aux.bind),
        }
    }

    pub fn len(&self) -> usize {
        self.qz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qz.is_empty()
    }

    pub fn products(&self, j: usize) -> crate::lb::PairProducts {
        crate::lb::PairProducts {
            qz: self.qz[j],
            qb: self.qb[j],
            bz: self.bz[j],
            zb: self.zb[j],
            bx: self.bx[j],
            xb: self.xb[j],
        }
    }
}

/// Frozen copy of the anchor-0 row. Entry 0 of every later row is read from it
/// (dot products are symmetric up to swapping the roles of the two series).
#[derive(Debug, Clone, PartialEq)]
pub struct FirstRow(pub DotProductRow);

impl FirstRow {
    pub fn new(aux: &AuxiliarySeries, m: usize) -> Self {
        Self(DotProductRow::at_anchor(aux, m, 0))
    }
}

#[inline]
fn roll(v: &mut [f64], a_out: f64, a_in: f64, b: &[f64], m: usize) {
    // v[j] <- v[j-1] - a_out * b[j-1] + a_in * b[j+m-1], right to left.
    for j in (1..v.len()).rev() {
        v[j] = v[j - 1] - a_out * b[j - 1] + a_in * b[j + m - 1];
    }
}

/// Advances `row` from anchor `i - 1` to anchor `i`.
///
/// Entries `1..` follow from the previous row by dropping the head product and
/// adding the tail product; entry 0 comes from the frozen first row at `i`.
pub fn update_dot_row(row: &mut DotProductRow, aux: &AuxiliarySeries, first: &FirstRow, m: usize) {
    let i = row.anchor + 1;
    assert!(i + m <= aux.z.len(), "anchor past the last window");
    let (z, b, x) = (&aux.z, &aux.bind, &aux.x);
    let (out, inn) = (i - 1, i + m - 1);
    roll(&mut row.qz, z[out], z[inn], z, m);
    roll(&mut row.qb, b[out], b[inn], b, m);
    roll(&mut row.bz, b[out], b[inn], z, m);
    roll(&mut row.zb, z[out], z[inn], b, m);
    roll(&mut row.bx, b[out], b[inn], x, m);
    roll(&mut row.xb, x[out], x[inn], b, m);
    let f = &first.0;
    row.qz[0] = f.qz[i];
    row.qb[0] = f.qb[i];
    // B_i . Z_0 is Z_0 . B_i, which the first row stores as zb[i].
    row.bz[0] = f.zb[i];
    row.zb[0] = f.bz[i];
    row.bx[0] = f.xb[i];
    row.xb[0] = f.bx[i];
    row.anchor = i;
}
