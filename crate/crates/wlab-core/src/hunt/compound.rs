//! The fourth compound matrix: the action of an 8×8 matrix on `Λ⁴(R^8)`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SMatrix};

use crate::exterior::{shuffle_sign, subsets, MultiIndex};

type M8 = SMatrix<f64, 8, 8>;

struct Tables {
    quads: Vec<MultiIndex>,
    pairs: Vec<MultiIndex>,
    /// For each 4-set, its six splits `(pair, complementary pair, sign)`
    /// in pair-basis positions.
    splits: Vec<[(usize, usize, f64); 6]>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let quads = subsets(8, 4);
        let pairs = subsets(8, 2);
        let pos = |m: MultiIndex| pairs.iter().position(|&p| p == m).expect("pair");
        let splits = quads
            .iter()
            .map(|&q| {
                let mut out = [(0, 0, 0.0); 6];
                for (w, &p) in pairs.iter().filter(|&&p| p.intersection(q) == p).enumerate() {
                    let r = MultiIndex::from_mask(q.mask() & !p.mask());
                    out[w] = (pos(p), pos(r), shuffle_sign(p, r) as f64);
                }
                out
            })
            .collect();
        Tables { quads, pairs, splits }
    })
}

/// Basis of `Λ⁴(R^8)` used for dense coefficient vectors.
pub(crate) fn quad_basis() -> &'static [MultiIndex] {
    &tables().quads
}

/// `C[I, J] = det k[I, J]`, so that `(k·φ)_I = Σ_J C[I, J] φ_J`.
///
/// Each 4×4 minor is a Laplace expansion along its first two rows over
/// precomputed 2×2 minors.
pub(crate) fn fourth_compound(k: &M8) -> DMatrix<f64> {
    let t = tables();
    let np = t.pairs.len();
    let rows: Vec<[usize; 2]> = t.pairs.iter().map(|p| [p.indices()[0] - 1, p.indices()[1] - 1]).collect();
    let mut minors = DMatrix::zeros(np, np);
    for (a, r) in rows.iter().enumerate() {
        for (b, c) in rows.iter().enumerate() {
            minors[(a, b)] = k[(r[0], c[0])] * k[(r[1], c[1])] - k[(r[0], c[1])] * k[(r[1], c[0])];
        }
    }
    let nq = t.quads.len();
    // the lexicographically first split of a 4-set is (first two, last two)
    let row_split: Vec<(usize, usize)> = t.splits.iter().map(|s| (s[0].0, s[0].1)).collect();
    let mut c = DMatrix::zeros(nq, nq);
    for (ii, &(top, bottom)) in row_split.iter().enumerate() {
        for (jj, splits) in t.splits.iter().enumerate() {
            c[(ii, jj)] = splits
                .iter()
                .map(|&(p, q, s)| s * minors[(top, p)] * minors[(bottom, q)])
                .sum();
        }
    }
    c
}
