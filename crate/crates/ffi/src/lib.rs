//! C ABI over the in-memory engine: an opaque handle, status codes instead
//! of Results, and a generated header in `include/sbc.h`. Every entry point
//! catches panics, so nothing unwinds across the boundary.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sbc::engine::{Engine, EngineError};
use sbc::gn::top_edge;
use sbc::graph::DynamicGraph;
use sbc::incremental::{EdgeEvent, EventError, UpdateOptions};

pub struct SbcEngine {
    inner: Engine,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbcStatus {
    Ok = 0,
    NullPointer,
    InvalidArgument,
    SelfLoop,
    EdgeExists,
    EdgeMissing,
    VertexOutOfRange,
    Panic,
}

fn status_of(err: &EngineError) -> SbcStatus {
    match err {
        EngineError::Event(EventError::SelfLoop(_)) => SbcStatus::SelfLoop,
        EngineError::Event(EventError::EdgeExists(..)) => SbcStatus::EdgeExists,
        EngineError::Event(EventError::EdgeMissing(..)) => SbcStatus::EdgeMissing,
        EngineError::Event(EventError::VertexOutOfRange { .. }) => SbcStatus::VertexOutOfRange,
        _ => SbcStatus::InvalidArgument,
    }
}

fn guarded(body: impl FnOnce() -> SbcStatus) -> SbcStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(SbcStatus::Panic)
}

/// Creates an engine over `n` isolated vertices. Returns null only if the
/// allocation itself panics.
#[no_mangle]
pub extern "C" fn sbc_engine_new(n: usize, workers: usize) -> *mut SbcEngine {
    catch_unwind(|| {
        let inner = Engine::in_memory(DynamicGraph::new(n), workers, UpdateOptions::default());
        Box::into_raw(Box::new(SbcEngine { inner }))
    })
    .unwrap_or(ptr::null_mut())
}

/// Creates an engine from `pairs` edges given as `2*pairs` vertex ids
/// (u0, v0, u1, v1, ...). On failure returns null and, when `status` is
/// non-null, says why.
///
/// # Safety
/// `edges` must point to `2*pairs` readable u32 values (may be null only
/// when `pairs` is zero); `status` may be null.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_from_edges(
    n: usize,
    edges: *const u32,
    pairs: usize,
    workers: usize,
    status: *mut SbcStatus,
) -> *mut SbcEngine {
    let set = |s: SbcStatus| {
        if !status.is_null() {
            unsafe { *status = s };
        }
    };
    if edges.is_null() && pairs > 0 {
        set(SbcStatus::NullPointer);
        return ptr::null_mut();
    }
    let flat = if pairs == 0 {
        &[][..]
    } else {
        unsafe { std::slice::from_raw_parts(edges, 2 * pairs) }
    };
    catch_unwind(AssertUnwindSafe(|| {
        let mut g = DynamicGraph::new(n);
        for pair in flat.chunks_exact(2) {
            if let Err(e) = g.add_edge(pair[0], pair[1]) {
                set(match e {
                    sbc::graph::GraphError::SelfLoop(_) => SbcStatus::SelfLoop,
                    sbc::graph::GraphError::OutOfRange(..) => SbcStatus::VertexOutOfRange,
                });
                return ptr::null_mut();
            }
        }
        let inner = Engine::in_memory(g, workers, UpdateOptions::default());
        set(SbcStatus::Ok);
        Box::into_raw(Box::new(SbcEngine { inner }))
    }))
    .unwrap_or_else(|_| {
        set(SbcStatus::Panic);
        ptr::null_mut()
    })
}

/// # Safety
/// `engine` must come from a constructor in this header and not be freed
/// twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_free(engine: *mut SbcEngine) {
    if !engine.is_null() {
        drop(unsafe { Box::from_raw(engine) });
    }
}

unsafe fn event(engine: *mut SbcEngine, ev: EdgeEvent) -> SbcStatus {
    let Some(e) = (unsafe { engine.as_mut() }) else {
        return SbcStatus::NullPointer;
    };
    guarded(|| match e.inner.apply_event(&ev) {
        Ok(_) => SbcStatus::Ok,
        Err(err) => status_of(&err),
    })
}

/// Inserts edge (u, v), updating all scores. `u` or `v` one past the current
/// vertex count grows the graph.
///
/// # Safety
/// `engine` must be a live engine pointer, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_add_edge(
    engine: *mut SbcEngine,
    u: u32,
    v: u32,
) -> SbcStatus {
    unsafe { event(engine, EdgeEvent::add(u, v)) }
}

/// Removes edge (u, v), updating all scores.
///
/// # Safety
/// `engine` must be a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_remove_edge(
    engine: *mut SbcEngine,
    u: u32,
    v: u32,
) -> SbcStatus {
    unsafe { event(engine, EdgeEvent::remove(u, v)) }
}

/// # Safety
/// `engine` must be a live engine pointer or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_vertex_count(engine: *const SbcEngine) -> usize {
    unsafe { engine.as_ref() }.map_or(0, |e| e.inner.graph().vertex_count())
}

/// # Safety
/// `engine` must be a live engine pointer or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_edge_count(engine: *const SbcEngine) -> usize {
    unsafe { engine.as_ref() }.map_or(0, |e| e.inner.graph().edge_count())
}

/// Writes one vertex's betweenness to `out`.
///
/// # Safety
/// `engine` must be live or null; `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_vertex_score(
    engine: *const SbcEngine,
    v: u32,
    out: *mut f64,
) -> SbcStatus {
    let Some(e) = (unsafe { engine.as_ref() }) else {
        return SbcStatus::NullPointer;
    };
    if out.is_null() {
        return SbcStatus::NullPointer;
    }
    match e.inner.scores().vbc.get(v as usize) {
        Some(&score) => {
            unsafe { *out = score };
            SbcStatus::Ok
        }
        None => SbcStatus::VertexOutOfRange,
    }
}

/// Fills `out` with all vertex scores; `len` must be at least the vertex
/// count.
///
/// # Safety
/// `engine` must be live or null; `out` must point to `len` writable f64s.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_vertex_scores(
    engine: *const SbcEngine,
    out: *mut f64,
    len: usize,
) -> SbcStatus {
    let Some(e) = (unsafe { engine.as_ref() }) else {
        return SbcStatus::NullPointer;
    };
    if out.is_null() {
        return SbcStatus::NullPointer;
    }
    let vbc = &e.inner.scores().vbc;
    if len < vbc.len() {
        return SbcStatus::InvalidArgument;
    }
    unsafe { std::slice::from_raw_parts_mut(out, vbc.len()) }.copy_from_slice(vbc);
    SbcStatus::Ok
}

/// Writes edge (u, v)'s betweenness to `out`.
///
/// # Safety
/// `engine` must be live or null; `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_edge_score(
    engine: *const SbcEngine,
    u: u32,
    v: u32,
    out: *mut f64,
) -> SbcStatus {
    let Some(e) = (unsafe { engine.as_ref() }) else {
        return SbcStatus::NullPointer;
    };
    if out.is_null() {
        return SbcStatus::NullPointer;
    }
    match e.inner.scores().ebc.get(&sbc::graph::Edge::new(u, v)) {
        Some(&score) => {
            unsafe { *out = score };
            SbcStatus::Ok
        }
        None => SbcStatus::EdgeMissing,
    }
}

/// Reports the edge with the highest betweenness (ties to the smallest
/// endpoint pair), the selection a divisive clustering loop would remove.
///
/// # Safety
/// `engine` must be live or null; `u`, `v`, `score` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn sbc_engine_top_edge(
    engine: *const SbcEngine,
    u: *mut u32,
    v: *mut u32,
    score: *mut f64,
) -> SbcStatus {
    let Some(e) = (unsafe { engine.as_ref() }) else {
        return SbcStatus::NullPointer;
    };
    match top_edge(e.inner.scores()) {
        Some((edge, s)) => {
            if !u.is_null() {
                unsafe { *u = edge.u };
            }
            if !v.is_null() {
                unsafe { *v = edge.v };
            }
            if !score.is_null() {
                unsafe { *score = s };
            }
            SbcStatus::Ok
        }
        None => SbcStatus::EdgeMissing,
    }
}

/// Static description of a status code; never null.
#[no_mangle]
pub extern "C" fn sbc_status_message(status: SbcStatus) -> *const c_char {
    let msg: &CStr = match status {
        SbcStatus::Ok => c"ok",
        SbcStatus::NullPointer => c"null pointer argument",
        SbcStatus::InvalidArgument => c"invalid argument",
        SbcStatus::SelfLoop => c"self-loops are not allowed",
        SbcStatus::EdgeExists => c"edge already present",
        SbcStatus::EdgeMissing => c"edge not present",
        SbcStatus::VertexOutOfRange => c"vertex id out of range",
        SbcStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drives_a_path_into_a_triangle() {
        let edges: [u32; 4] = [0, 1, 1, 2];
        let mut status = SbcStatus::Panic;
        let engine =
            unsafe { sbc_engine_from_edges(3, edges.as_ptr(), 2, 1, &mut status) };
        assert_eq!(status, SbcStatus::Ok);
        assert!(!engine.is_null());

        let mut score = -1.0;
        unsafe {
            assert_eq!(sbc_engine_vertex_score(engine, 1, &mut score), SbcStatus::Ok);
            assert_eq!(score, 2.0);

            assert_eq!(sbc_engine_add_edge(engine, 0, 2), SbcStatus::Ok);
            assert_eq!(sbc_engine_vertex_score(engine, 1, &mut score), SbcStatus::Ok);
            assert_eq!(score, 0.0);
            assert_eq!(sbc_engine_edge_count(engine), 3);

            let mut all = [f64::NAN; 3];
            assert_eq!(
                sbc_engine_vertex_scores(engine, all.as_mut_ptr(), 3),
                SbcStatus::Ok
            );
            assert_eq!(all, [0.0; 3]);

            assert_eq!(sbc_engine_edge_score(engine, 2, 0, &mut score), SbcStatus::Ok);
            assert_eq!(score, 2.0);

            sbc_engine_free(engine);
        }
    }

    #[test]
    fn growth_and_status_codes() {
        let engine = sbc_engine_new(2, 2);
        unsafe {
            assert_eq!(sbc_engine_add_edge(engine, 0, 1), SbcStatus::Ok);
            assert_eq!(sbc_engine_add_edge(engine, 0, 1), SbcStatus::EdgeExists);
            assert_eq!(sbc_engine_add_edge(engine, 1, 1), SbcStatus::SelfLoop);
            // One past the end grows, two past does not.
            assert_eq!(sbc_engine_add_edge(engine, 1, 2), SbcStatus::Ok);
            assert_eq!(sbc_engine_add_edge(engine, 0, 9), SbcStatus::VertexOutOfRange);
            assert_eq!(sbc_engine_vertex_count(engine), 3);
            assert_eq!(
                sbc_engine_remove_edge(engine, 0, 2),
                SbcStatus::EdgeMissing
            );

            let (mut u, mut v, mut s) = (u32::MAX, u32::MAX, f64::NAN);
            assert_eq!(
                sbc_engine_top_edge(engine, &mut u, &mut v, &mut s),
                SbcStatus::Ok
            );
            assert_eq!((u, v), (0, 1));
            assert_eq!(s, 4.0);

            sbc_engine_free(engine);
        }
    }

    #[test]
    fn null_handles_are_refused_not_dereferenced() {
        let null = std::ptr::null_mut::<SbcEngine>();
        let mut score = 0.0;
        unsafe {
            assert_eq!(sbc_engine_add_edge(null, 0, 1), SbcStatus::NullPointer);
            assert_eq!(sbc_engine_vertex_count(null), 0);
            assert_eq!(
                sbc_engine_vertex_score(null, 0, &mut score),
                SbcStatus::NullPointer
            );
            sbc_engine_free(null);
        }

        let engine = sbc_engine_new(1, 1);
        unsafe {
            assert_eq!(
                sbc_engine_vertex_score(engine, 0, std::ptr::null_mut()),
                SbcStatus::NullPointer
            );
            let msg = CStr::from_ptr(sbc_status_message(SbcStatus::EdgeMissing));
            assert_eq!(msg.to_str().unwrap(), "edge not present");
            sbc_engine_free(engine);
        }
    }
}
