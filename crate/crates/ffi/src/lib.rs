//! C interface to `netgen`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new`,
//! `*_parse` or producer function and released with the matching `*_free`.
//! Every fallible function returns a [`NetgenStatus`]; on failure the
//! message is available from [`netgen_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use netgen::atlas::{classify_family, Family};
use netgen::evolution::{evolve_best_of_runs, EvolutionConfig, Target};
use netgen::graph::io::read_edge_list;
use netgen::graph::{barabasi_albert, erdos_renyi};
use netgen::seed::{self, tag};
use netgen::synthesis::{synthesize, SynthesisSpec};
use netgen::{Error, Expr, Network};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetgenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    Io = 5,
    Computation = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Family codes in the order of the classifier's family list.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetgenFamily {
    Er = 0,
    Id = 1,
    IdPrime = 2,
    Pa = 3,
    PaPrime = 4,
    ScAlpha = 5,
    ScBeta = 6,
    ScGamma = 7,
    ScDelta = 8,
    ScEpsilon = 9,
    ScZeta = 10,
    ScEta = 11,
    ScTheta = 12,
    Unclassified = 13,
}

impl From<Family> for NetgenFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Er => NetgenFamily::Er,
            Family::Id => NetgenFamily::Id,
            Family::IdPrime => NetgenFamily::IdPrime,
            Family::Pa => NetgenFamily::Pa,
            Family::PaPrime => NetgenFamily::PaPrime,
            Family::ScAlpha => NetgenFamily::ScAlpha,
            Family::ScBeta => NetgenFamily::ScBeta,
            Family::ScGamma => NetgenFamily::ScGamma,
            Family::ScDelta => NetgenFamily::ScDelta,
            Family::ScEpsilon => NetgenFamily::ScEpsilon,
            Family::ScZeta => NetgenFamily::ScZeta,
            Family::ScEta => NetgenFamily::ScEta,
            Family::ScTheta => NetgenFamily::ScTheta,
            Family::Unclassified => NetgenFamily::Unclassified,
        }
    }
}

/// Opaque generator expression.
pub struct NetgenGenerator {
    expr: Expr,
}

/// Opaque undirected network.
pub struct NetgenNetwork {
    net: Network,
}

/// Dissimilarity vectors in the order degree, PageRank, distance, motif.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NetgenFitness {
    pub distances: [f64; 4],
    pub baseline: [f64; 4],
    pub ratios: [f64; 4],
    pub fitness: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NetgenStatus, message: impl Into<String>) -> NetgenStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> NetgenStatus {
    let status = match e {
        Error::Parse(_) => NetgenStatus::Parse,
        Error::Io { .. } | Error::Format { .. } => NetgenStatus::Io,
        Error::InvalidParameter(_) => NetgenStatus::InvalidParameter,
        _ => NetgenStatus::Computation,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> NetgenStatus) -> NetgenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(NetgenStatus::Panic, "internal panic"),
    }
}

unsafe fn to_str<'a>(s: *const c_char) -> Result<&'a str, NetgenStatus> {
    if s.is_null() {
        return Err(fail(NetgenStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(NetgenStatus::InvalidUtf8, "string is not valid UTF-8"))
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(NetgenStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn netgen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a generator in canonical syntax.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn netgen_generator_parse(
    text: *const c_char,
    out: *mut *mut NetgenGenerator,
) -> NetgenStatus {
    guard(|| {
        non_null!(out);
        let s = try_ffi!(to_str(text));
        match netgen::parse_generator(s) {
            Ok(expr) => {
                *out = Box::into_raw(Box::new(NetgenGenerator { expr }));
                NetgenStatus::Ok
            }
            Err(e) => from_error(e.into()),
        }
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards; null is allowed.
#[no_mangle]
pub unsafe extern "C" fn netgen_generator_free(g: *mut NetgenGenerator) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes the canonical text of `g` into `buf` (nul-terminated). `needed`
/// receives the required size including the terminator; pass a null
/// `buf` with `len` 0 to query it.
///
/// # Safety
/// `g` and `needed` must be valid; `buf` must hold `len` bytes unless null.
#[no_mangle]
pub unsafe extern "C" fn netgen_generator_to_string(
    g: *const NetgenGenerator,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> NetgenStatus {
    guard(|| {
        non_null!(g, needed);
        let text = (*g).expr.to_string();
        *needed = text.len() + 1;
        if buf.is_null() || len < text.len() + 1 {
            return fail(
                NetgenStatus::BufferTooSmall,
                format!("{} bytes needed", text.len() + 1),
            );
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        NetgenStatus::Ok
    })
}

/// # Safety
/// `g` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_generator_classify(
    g: *const NetgenGenerator,
    out: *mut NetgenFamily,
) -> NetgenStatus {
    guard(|| {
        non_null!(g, out);
        *out = classify_family(&(*g).expr).family.into();
        NetgenStatus::Ok
    })
}

unsafe fn put_network(out: *mut *mut NetgenNetwork, r: netgen::Result<Network>) -> NetgenStatus {
    match r {
        Ok(net) => {
            *out = Box::into_raw(Box::new(NetgenNetwork { net }));
            NetgenStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Grows a network with `g`; `sample_size` 0 selects the default.
///
/// # Safety
/// `g` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_synthesize(
    g: *const NetgenGenerator,
    nodes: usize,
    edges: usize,
    sample_size: usize,
    seed: u64,
    out: *mut *mut NetgenNetwork,
) -> NetgenStatus {
    guard(|| {
        non_null!(g, out);
        let mut spec = SynthesisSpec::new(nodes, edges, seed);
        if sample_size > 0 {
            spec.sample_size = sample_size;
        }
        put_network(out, synthesize(&(*g).expr, &spec))
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_network_erdos_renyi(
    nodes: usize,
    edges: usize,
    seed: u64,
    out: *mut *mut NetgenNetwork,
) -> NetgenStatus {
    guard(|| {
        non_null!(out);
        put_network(out, erdos_renyi(nodes, edges, seed))
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_network_barabasi_albert(
    nodes: usize,
    edges_per_node: usize,
    seed: u64,
    out: *mut *mut NetgenNetwork,
) -> NetgenStatus {
    guard(|| {
        non_null!(out);
        put_network(out, barabasi_albert(nodes, edges_per_node, seed))
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_network_read(
    path: *const c_char,
    out: *mut *mut NetgenNetwork,
) -> NetgenStatus {
    guard(|| {
        non_null!(out);
        let p = try_ffi!(to_str(path));
        put_network(out, read_edge_list(Path::new(p), None).map(|(net, _)| net))
    })
}

/// # Safety
/// `n` must come from this library and not be used afterwards; null is allowed.
#[no_mangle]
pub unsafe extern "C" fn netgen_network_free(n: *mut NetgenNetwork) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// # Safety
/// `n` must be valid or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn netgen_network_node_count(n: *const NetgenNetwork) -> usize {
    n.as_ref().map_or(0, |n| n.net.node_count())
}

/// # Safety
/// `n` must be valid or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn netgen_network_edge_count(n: *const NetgenNetwork) -> usize {
    n.as_ref().map_or(0, |n| n.net.edge_count())
}

/// Copies edges as 0-based `(u, v)` pairs into `pairs`, which holds
/// `capacity` pairs (`2 * capacity` integers).
///
/// # Safety
/// `n` must be valid and `pairs` must hold `2 * capacity` values.
#[no_mangle]
pub unsafe extern "C" fn netgen_network_edges(
    n: *const NetgenNetwork,
    pairs: *mut u32,
    capacity: usize,
) -> NetgenStatus {
    guard(|| {
        non_null!(n, pairs);
        let net = &(*n).net;
        if capacity < net.edge_count() {
            return fail(
                NetgenStatus::BufferTooSmall,
                format!("{} pairs needed", net.edge_count()),
            );
        }
        for (k, (u, v)) in net.edges().enumerate() {
            *pairs.add(2 * k) = u as u32;
            *pairs.add(2 * k + 1) = v as u32;
        }
        NetgenStatus::Ok
    })
}

fn config(seed: u64, baseline_reps: usize) -> EvolutionConfig {
    let mut cfg = EvolutionConfig {
        seed,
        ..EvolutionConfig::default()
    };
    if baseline_reps > 0 {
        cfg.baseline_reps = baseline_reps;
    }
    cfg
}

/// Scores `g` against `target` with default settings; `baseline_reps` 0
/// selects the default baseline size.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_fitness(
    target: *const NetgenNetwork,
    g: *const NetgenGenerator,
    seed: u64,
    baseline_reps: usize,
    out: *mut NetgenFitness,
) -> NetgenStatus {
    guard(|| {
        non_null!(target, g, out);
        let cfg = config(seed, baseline_reps);
        let prepared = match Target::new(&(*target).net, &cfg) {
            Ok(t) => t,
            Err(e) => return from_error(e),
        };
        match prepared.evaluate_mean(
            &(*g).expr,
            cfg.final_evaluations,
            seed::derive(seed, tag::FINAL),
        ) {
            Ok(r) => {
                *out = NetgenFitness {
                    distances: r.distances.to_array(),
                    baseline: r.baseline.to_array(),
                    ratios: r.ratios.to_array(),
                    fitness: r.fitness,
                };
                NetgenStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Best-of-`runs` evolutionary search against `target`. On success `best`
/// receives a new generator handle and `fitness` its averaged fitness.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn netgen_evolve(
    target: *const NetgenNetwork,
    runs: usize,
    generations: usize,
    seed: u64,
    best: *mut *mut NetgenGenerator,
    fitness: *mut f64,
) -> NetgenStatus {
    guard(|| {
        non_null!(target, best, fitness);
        let cfg = EvolutionConfig {
            runs,
            max_generations: generations,
            ..config(seed, 0)
        };
        match evolve_best_of_runs(&(*target).net, &cfg) {
            Ok(r) => {
                *fitness = r.records[r.best_run].fitness;
                *best = Box::into_raw(Box::new(NetgenGenerator { expr: r.best }));
                NetgenStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
