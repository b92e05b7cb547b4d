//! C interface. Objects cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns an [`EccStatus`]; on failure `ecc_last_error` describes the cause
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eccentric::graph::{self, WeightedGraph};
use eccentric::io::{self, CertificateDoc, GraphDoc, SpaceDoc};
use eccentric::metric::{self, FiniteMetricSpace, Molecule, PairSequence, SquareMatrix};
use eccentric::summing::{self, PietschCertificate};
use eccentric::{Error, ToleranceConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EccStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NumericalFailure = 3,
    Unsupported = 4,
    Panic = 5,
}

/// A finite metric space.
pub struct EccSpace(FiniteMetricSpace);

/// A weighted connected graph.
pub struct EccGraph(WeightedGraph);

/// A Pietsch certificate together with the ids of its space.
pub struct EccCertificate {
    cert: PietschCertificate,
    ids: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(EccStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Input(_) | Error::Parse { .. } | Error::DegenerateSequence(_) => EccStatus::InvalidInput,
            Error::NumericalFailure { .. } => EccStatus::NumericalFailure,
            Error::Unsupported(_) => EccStatus::Unsupported,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EccStatus::NullPointer, format!("{} is null", what))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            EccStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            EccStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(EccStatus::InvalidInput, format!("{} is not UTF-8: {}", what, e)))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn copy_matrix(m: &SquareMatrix, out: &mut [f64]) {
    for (i, chunk) in out.chunks_mut(m.n()).enumerate() {
        chunk.copy_from_slice(m.row(i));
    }
}

fn sequence(xs: &[usize], ys: &[usize], weights: Option<&[f64]>) -> Result<PairSequence, Failure> {
    let pairs = xs.iter().copied().zip(ys.iter().copied()).collect();
    Ok(PairSequence::new(pairs, weights.map(<[f64]>::to_vec))?)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ecc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ecc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a metric space document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_space_from_json(json: *const c_char, out: *mut *mut EccSpace) -> EccStatus {
    guard(|| {
        let doc: SpaceDoc = io::from_json(text(json, "json")?)?;
        let space = doc.to_space()?;
        put(out, Box::into_raw(Box::new(EccSpace(space))))
    })
}

/// Builds a space with ids `x0..x{n-1}` and base point `x0` from a row-major
/// `n x n` matrix.
///
/// # Safety
/// `d` must point to `n * n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_space_from_matrix(
    n: usize,
    d: *const f64,
    pseudometric: bool,
    out: *mut *mut EccSpace,
) -> EccStatus {
    guard(|| {
        let cells = n.checked_mul(n).ok_or_else(|| Failure(EccStatus::InvalidInput, "n is too large".into()))?;
        let data = slice(d, cells, "d")?;
        let m = SquareMatrix::from_fn(n, |i, j| data[i * n + j]);
        let ids = (0..n).map(|i| format!("x{}", i)).collect();
        let space = FiniteMetricSpace::new(ids, m, 0, pseudometric)?;
        put(out, Box::into_raw(Box::new(EccSpace(space))))
    })
}

/// # Safety
/// `space` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ecc_space_free(space: *mut EccSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_space_len(space: *const EccSpace, out: *mut usize) -> EccStatus {
    guard(|| put(out, get(space, "space")?.0.len()))
}

/// Writes the eccentric pseudometric of `subset` into the row-major
/// `n x n` buffer `out`.
///
/// # Safety
/// `subset` must hold `subset_len` indices; `out` must hold `n * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ecc_eccentric_pseudometric(
    space: *const EccSpace,
    subset: *const usize,
    subset_len: usize,
    out: *mut f64,
) -> EccStatus {
    guard(|| {
        let space = &get(space, "space")?.0;
        let s = slice(subset, subset_len, "subset")?;
        let m = metric::eccentric_pseudometric(space, s)?;
        copy_matrix(&m, out_slice(out, space.len() * space.len(), "out")?);
        Ok(())
    })
}

/// Arens-Eells norm of the molecule `sum_i coefficients[i] * delta(points[i])`.
///
/// # Safety
/// `points` and `coefficients` must hold `len` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_ae_norm(
    space: *const EccSpace,
    points: *const usize,
    coefficients: *const f64,
    len: usize,
    out: *mut f64,
) -> EccStatus {
    guard(|| {
        let space = &get(space, "space")?.0;
        let pts = slice(points, len, "points")?;
        let cs = slice(coefficients, len, "coefficients")?;
        let mut map = std::collections::BTreeMap::new();
        for (&x, &c) in pts.iter().zip(cs) {
            *map.entry(x).or_insert(0.0) += c;
        }
        let m = Molecule::new(map)?;
        put(out, metric::ae_norm(space, &m, &ToleranceConfig::default())?.value)
    })
}

/// Absolute p-proximity of the pairs `(xs[i], ys[i])`; `weights` may be
/// null for unit weights.
///
/// # Safety
/// `xs`, `ys` and a non-null `weights` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn ecc_d_ac(
    space: *const EccSpace,
    xs: *const usize,
    ys: *const usize,
    weights: *const f64,
    len: usize,
    p: f64,
    out: *mut f64,
) -> EccStatus {
    guard(|| {
        let space = &get(space, "space")?.0;
        let w = if weights.is_null() { None } else { Some(slice(weights, len, "weights")?) };
        let seq = sequence(slice(xs, len, "xs")?, slice(ys, len, "ys")?, w)?;
        put(out, metric::d_ac(space, &seq, p)?)
    })
}

/// Eccentric p-proximity of the pairs over the point set `subset`.
///
/// # Safety
/// As [`ecc_d_ac`]; `subset` must hold `subset_len` indices.
#[no_mangle]
pub unsafe extern "C" fn ecc_d_cc(
    space: *const EccSpace,
    xs: *const usize,
    ys: *const usize,
    weights: *const f64,
    len: usize,
    p: f64,
    subset: *const usize,
    subset_len: usize,
    out: *mut f64,
) -> EccStatus {
    guard(|| {
        let space = &get(space, "space")?.0;
        let w = if weights.is_null() { None } else { Some(slice(weights, len, "weights")?) };
        let seq = sequence(slice(xs, len, "xs")?, slice(ys, len, "ys")?, w)?;
        let s = slice(subset, subset_len, "subset")?;
        put(out, metric::d_cc(space, &seq, p, s)?.value)
    })
}

/// Minimal eccentric p-summing constant of `f` (one value per point) with
/// respect to the points `k`.
///
/// # Safety
/// `f` must hold one double per point; `k` must hold `k_len` indices.
#[no_mangle]
pub unsafe extern "C" fn ecc_pietsch(
    space: *const EccSpace,
    f: *const f64,
    k: *const usize,
    k_len: usize,
    p: f64,
    out: *mut *mut EccCertificate,
) -> EccStatus {
    guard(|| {
        let space = &get(space, "space")?.0;
        let values = slice(f, space.len(), "f")?.to_vec();
        let k = slice(k, k_len, "k")?;
        let cert = summing::pietsch_functional(
            space,
            &metric::LipschitzFunctional::new(values),
            k,
            p,
            &ToleranceConfig::default(),
        )?;
        let handle = EccCertificate { cert, ids: space.ids().to_vec() };
        put(out, Box::into_raw(Box::new(handle)))
    })
}

/// # Safety
/// `cert` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ecc_certificate_free(cert: *mut EccCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// The constant, or positive infinity.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_certificate_constant(cert: *const EccCertificate, out: *mut f64) -> EccStatus {
    guard(|| put(out, get(cert, "certificate")?.cert.constant.as_f64()))
}

/// Writes the Pietsch measure densely, one weight per point. Fails with
/// `InvalidInput` when the constant is infinite.
///
/// # Safety
/// `out` must hold `n` doubles, `n` being the number of points.
#[no_mangle]
pub unsafe extern "C" fn ecc_certificate_measure(cert: *const EccCertificate, out: *mut f64, n: usize) -> EccStatus {
    guard(|| {
        let c = get(cert, "certificate")?;
        if n != c.ids.len() {
            return Err(Failure(
                EccStatus::InvalidInput,
                format!("buffer holds {} weights, space has {} points", n, c.ids.len()),
            ));
        }
        let mu = c
            .cert
            .measure
            .as_ref()
            .ok_or_else(|| Failure(EccStatus::InvalidInput, "constant is infinite; no measure".into()))?;
        let buf = out_slice(out, n, "out")?;
        for (i, w) in buf.iter_mut().enumerate() {
            *w = mu.weight(i);
        }
        Ok(())
    })
}

/// The certificate as JSON; release with [`ecc_string_free`].
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_certificate_to_json(cert: *const EccCertificate, out: *mut *mut c_char) -> EccStatus {
    guard(|| {
        let c = get(cert, "certificate")?;
        let json = io::to_json(&CertificateDoc::from_certificate(&c.cert, &c.ids));
        put(out, CString::new(json).expect("JSON has no nul bytes").into_raw())
    })
}

/// Parses a graph document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_graph_from_json(json: *const c_char, out: *mut *mut EccGraph) -> EccStatus {
    guard(|| {
        let doc: GraphDoc = io::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(EccGraph(doc.to_graph()?))))
    })
}

/// # Safety
/// `graph` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ecc_graph_free(graph: *mut EccGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ecc_graph_len(graph: *const EccGraph, out: *mut usize) -> EccStatus {
    guard(|| put(out, get(graph, "graph")?.0.len()))
}

/// Shortest path p-distances into the row-major `n x n` buffer `out`.
///
/// # Safety
/// `out` must hold `n * n` doubles, `n` being the number of vertices.
#[no_mangle]
pub unsafe extern "C" fn ecc_graph_qp(graph: *const EccGraph, p: f64, out: *mut f64) -> EccStatus {
    guard(|| {
        let g = &get(graph, "graph")?.0;
        let m = graph::q_p(g, p)?.matrix();
        copy_matrix(&m, out_slice(out, g.len() * g.len(), "out")?);
        Ok(())
    })
}
