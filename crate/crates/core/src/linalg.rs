//! Dense factorizations backed by the system LAPACK (OpenBLAS).

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[link(name = "openblas")]
extern "C" {}

/// Thin SVD `m = U diag(s) Vᵀ`, returned as `(U, s, Vᵀ)` with `s` descending.
pub(crate) fn thin_svd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Ok((DMatrix::zeros(rows, 0), Vec::new(), DMatrix::zeros(0, cols)));
    }
    let (mi, ni, ki) = (dim(rows)?, dim(cols)?, dim(k)?);
    // nalgebra storage is column-major, as LAPACK expects.
    let mut a = m.as_slice().to_vec();
    let mut s = vec![0.0; k];
    let mut u = vec![0.0; rows * k];
    let mut vt = vec![0.0; k * cols];
    let mut info = 0;

    let mut query = [0.0];
    // SAFETY: every buffer has the length implied by the dimensions passed.
    unsafe {
        lapack::dgesvd(
            b'S', b'S', mi, ni, &mut a, mi, &mut s, &mut u, mi, &mut vt, ki, &mut query, -1, &mut info,
        );
    }
    check("dgesvd", info)?;
    let lwork = (query[0] as usize).max(1);
    let mut work = vec![0.0; lwork];
    // SAFETY: as above; `work` has the length reported by the workspace query.
    unsafe {
        lapack::dgesvd(
            b'S',
            b'S',
            mi,
            ni,
            &mut a,
            mi,
            &mut s,
            &mut u,
            mi,
            &mut vt,
            ki,
            &mut work,
            dim(lwork)?,
            &mut info,
        );
    }
    check("dgesvd", info)?;
    Ok((DMatrix::from_vec(rows, k, u), s, DMatrix::from_vec(k, cols, vt)))
}

/// Thin QR `m = Q R` with `Q` of shape `rows × min(rows, cols)`.
pub(crate) fn thin_qr(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Ok((DMatrix::zeros(rows, 0), DMatrix::zeros(0, cols)));
    }
    let (mi, ni, ki) = (dim(rows)?, dim(cols)?, dim(k)?);
    let mut a = m.as_slice().to_vec();
    let mut tau = vec![0.0; k];
    let mut info = 0;

    let mut query = [0.0];
    // SAFETY: `a` is rows × cols column-major and `tau` has min(rows, cols) entries.
    unsafe { lapack::dgeqrf(mi, ni, &mut a, mi, &mut tau, &mut query, -1, &mut info) };
    check("dgeqrf", info)?;
    let lwork = (query[0] as usize).max(1);
    let mut work = vec![0.0; lwork];
    // SAFETY: as above; `work` has the length reported by the workspace query.
    unsafe { lapack::dgeqrf(mi, ni, &mut a, mi, &mut tau, &mut work, dim(lwork)?, &mut info) };
    check("dgeqrf", info)?;

    let factored = DMatrix::from_column_slice(rows, cols, &a);
    let r = DMatrix::from_fn(k, cols, |i, j| if i <= j { factored[(i, j)] } else { 0.0 });

    // SAFETY: the first k columns of `a` hold the reflectors produced above.
    unsafe { lapack::dorgqr(mi, ki, ki, &mut a, mi, &tau, &mut query, -1, &mut info) };
    check("dorgqr", info)?;
    let lwork = (query[0] as usize).max(1);
    let mut work = vec![0.0; lwork];
    // SAFETY: as above; `work` has the length reported by the workspace query.
    unsafe { lapack::dorgqr(mi, ki, ki, &mut a, mi, &tau, &mut work, dim(lwork)?, &mut info) };
    check("dorgqr", info)?;
    Ok((DMatrix::from_column_slice(rows, k, &a[..rows * k]), r))
}

fn dim(x: usize) -> Result<i32> {
    i32::try_from(x).map_err(|_| Error::ResourceLimit(format!("matrix dimension {x} exceeds LAPACK range")))
}

fn check(routine: &str, info: i32) -> Result<()> {
    match info {
        0 => Ok(()),
        i if i < 0 => Err(Error::Internal(format!("{routine} rejected argument {}", -i))),
        i => Err(Error::Numerical {
            cut: 0,
            reason: format!("{routine} did not converge (info {i})"),
        }),
    }
}
