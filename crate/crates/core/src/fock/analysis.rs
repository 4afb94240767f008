use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::block::hermiticity_defect;
use crate::error::NumericError;

type CMat = DMatrix<Complex64>;

/// Largest total dimension accepted by the commutant and rank tools.
pub const DIMENSION_CAP: usize = 512;
/// Largest nesting depth accepted by [`nested_commutator_rank`].
pub const DEPTH_CAP: usize = 6;
const UNKNOWN_CAP: usize = 4096;

fn check_square(ops: &[CMat]) -> Result<usize, NumericError> {
    let dim = ops.first().map(|m| m.nrows()).unwrap_or(0);
    if ops.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(NumericError::Shape("operators must be square and equally sized".into()));
    }
    if dim > DIMENSION_CAP {
        return Err(NumericError::DimensionCap(dim, DIMENSION_CAP));
    }
    Ok(dim)
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dimension of `{X : XG = GX for all G in ops}` for self-adjoint `ops`.
///
/// A random real combination `A` of the operators is diagonalized; any `X` in
/// the commutant is block diagonal in the eigenspaces of `A`, which keeps the
/// unknown count small. The remaining constraints are solved by a rank count.
pub fn commutant_dimension(ops: &[CMat]) -> Result<usize, NumericError> {
    let dim = check_square(ops)?;
    if dim == 0 {
        return Ok(0);
    }
    for g in ops {
        let defect = hermiticity_defect(g);
        if defect > 1e-10 * max_abs(g).max(1.0) {
            return Err(NumericError::NotSelfAdjoint(defect));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut a = CMat::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for g in ops {
        let c: f64 = rng.gen_range(0.5..1.5);
        a += g * Complex64::new(c / max_abs(g).max(1e-300), 0.0);
    }
    // symmetrize away rounding before the Hermitian solver
    let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let scale = 1.0 + eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &idx in &order {
        let v = eig.eigenvalues[idx];
        if v - last > 1e-9 * scale {
            groups.push(Vec::new());
        }
        groups.last_mut().expect("group").push(idx);
        last = v;
    }
    // reorder the eigenbasis so groups are contiguous
    let perm: Vec<usize> = groups.iter().flatten().copied().collect();
    let v = CMat::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, perm[c])]);
    let mut group_of = vec![0usize; dim];
    let mut start = vec![0usize; groups.len()];
    let mut offset = 0;
    for (gi, g) in groups.iter().enumerate() {
        start[gi] = offset;
        for p in 0..g.len() {
            group_of[offset + p] = gi;
        }
        offset += g.len();
    }
    // unknown X_{ac} for a, c in the same group
    let mut unknown_base = vec![0usize; groups.len()];
    let mut unknowns = 0;
    for (gi, g) in groups.iter().enumerate() {
        unknown_base[gi] = unknowns;
        unknowns += g.len() * g.len();
    }
    let var = |a: usize, c: usize| {
        let gi = group_of[a];
        let size = groups[gi].len();
        unknown_base[gi] + (a - start[gi]) * size + (c - start[gi])
    };

    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for g in ops {
        let gp = v.adjoint() * g * &v;
        let tol = 1e-12 * max_abs(&gp).max(1e-300);
        for a in 0..dim {
            for b in 0..dim {
                // (X G')_{ab} − (G' X)_{ab}
                let mut row = vec![Complex64::new(0.0, 0.0); unknowns];
                let mut any = false;
                let (ga, gb) = (group_of[a], group_of[b]);
                for c in start[ga]..start[ga] + groups[ga].len() {
                    let x = gp[(c, b)];
                    if x.norm() > tol {
                        row[var(a, c)] += x;
                        any = true;
                    }
                }
                for c in start[gb]..start[gb] + groups[gb].len() {
                    let x = gp[(a, c)];
                    if x.norm() > tol {
                        row[var(c, b)] -= x;
                        any = true;
                    }
                }
                if any && row.iter().any(|z| z.norm() > tol) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Ok(unknowns);
    }
    if unknowns > UNKNOWN_CAP {
        return Err(NumericError::DimensionCap(unknowns, UNKNOWN_CAP));
    }
    Ok(unknowns - numerical_rank(&rows, unknowns))
}

/// Rank of the stacked rows. Chunks are folded into a compressed `Σ V†`
/// factor, which keeps the row space and singular values of the whole stack.
fn numerical_rank(rows: &[Vec<Complex64>], cols: usize) -> usize {
    let chunk = cols.max(256);
    let mut acc: Option<CMat> = None;
    for block in rows.chunks(chunk) {
        let prev = acc.as_ref().map(|m| m.nrows()).unwrap_or(0);
        let mut m = CMat::from_element(prev + block.len(), cols, Complex64::new(0.0, 0.0));
        if let Some(p) = &acc {
            m.rows_mut(0, prev).copy_from(p);
        }
        for (i, row) in block.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                m[(prev + i, j)] = *z;
            }
        }
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let sigma = CMat::from_diagonal(&svd.singular_values.map(|s| Complex64::new(s, 0.0)));
        acc = Some(sigma * v_t);
    }
    let acc = acc.expect("at least one row");
    let sv = acc.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top).count()
}

fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Adds `m` to the orthonormal `basis` if it has a component outside it.
fn extend_basis(basis: &mut Vec<CMat>, m: CMat) -> Option<CMat> {
    let n0 = frob(&m);
    if n0 == 0.0 {
        return None;
    }
    let mut v = m / Complex64::new(n0, 0.0);
    for _ in 0..2 {
        for b in basis.iter() {
            let c = dot(b, &v);
            v -= b * c;
        }
    }
    let n = frob(&v);
    if n < 1e-8 {
        return None;
    }
    let v = v / Complex64::new(n, 0.0);
    basis.push(v.clone());
    Some(v)
}

/// Rank of the span of all nested commutators up to each depth
/// (`depth 1` is the span of `ops` itself).
pub fn nested_commutator_rank(ops: &[CMat], depth: usize) -> Result<Vec<usize>, NumericError> {
    if depth == 0 || depth > DEPTH_CAP {
        return Err(NumericError::DepthCap(depth, DEPTH_CAP));
    }
    check_square(ops)?;
    let mut basis: Vec<CMat> = Vec::new();
    let mut level: Vec<CMat> = Vec::new();
    for g in ops {
        if let Some(v) = extend_basis(&mut basis, g.clone()) {
            level.push(v);
        }
    }
    let mut ranks = vec![basis.len()];
    for _ in 1..depth {
        let mut next = Vec::new();
        for g in ops {
            for x in &level {
                let c = g * x - x * g;
                if frob(&c) < 1e-12 * frob(g).max(1e-300) {
                    continue;
                }
                if let Some(v) = extend_basis(&mut basis, c) {
                    next.push(v);
                }
            }
        }
        level = next;
        ranks.push(basis.len());
    }
    Ok(ranks)
}
