//! C interface to [`hollow_heap::VariantHeap`] with `int64_t` keys and
//! `uint32_t` item ids.
//!
//! Heaps are opaque `HhHeap *` handles from [`hh_heap_new`], released with
//! [`hh_heap_free`]. Every fallible call returns an [`HhStatus`]; outputs go
//! through pointer arguments and are written only on `HH_STATUS_OK`.
//! Panics are caught at the boundary and reported as `HH_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hollow_heap::{HeapError, ItemId, RebuildMethod, VariantConfig, VariantHeap};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidVariant = 2,
    DuplicateItem = 3,
    UnknownItem = 4,
    KeyNotDecreased = 5,
    Empty = 6,
    Incompatible = 7,
    InvalidArgument = 8,
    Panic = 9,
}

impl From<HeapError> for HhStatus {
    fn from(e: HeapError) -> Self {
        match e {
            HeapError::DuplicateItem(_) => HhStatus::DuplicateItem,
            HeapError::UnknownItem(_) | HeapError::NotARoot(_) => HhStatus::UnknownItem,
            HeapError::KeyNotDecreased(_) => HhStatus::KeyNotDecreased,
            HeapError::Empty => HhStatus::Empty,
            HeapError::Incompatible(..) => HhStatus::Incompatible,
            HeapError::InvalidVariant(_) => HhStatus::InvalidVariant,
        }
    }
}

/// Operation counters of one heap.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HhStats {
    pub ranked_links: u64,
    pub unranked_links: u64,
    pub comparisons: u64,
    pub hollow_destroyed: u64,
    pub nodes_created: u64,
    pub max_rank_seen: u32,
}

/// Opaque heap handle.
pub struct HhHeap {
    inner: VariantHeap<i64>,
}

fn guard(f: impl FnOnce() -> HhStatus) -> HhStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HhStatus::Panic)
}

fn status(r: Result<(), HeapError>) -> HhStatus {
    match r {
        Ok(()) => HhStatus::Ok,
        Err(e) => e.into(),
    }
}

/// Creates a heap. `variant` is a `mode:family:regime` string such as
/// `"two_parent:lazy:large2"`, or NULL for that default. On success
/// `*out` receives the handle.
///
/// # Safety
/// `variant` is NULL or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hh_heap_new(variant: *const c_char, out: *mut *mut HhHeap) -> HhStatus {
    guard(|| {
        if out.is_null() {
            return HhStatus::NullPointer;
        }
        let cfg = if variant.is_null() {
            VariantConfig::TWO_PARENT
        } else {
            match CStr::from_ptr(variant).to_str().ok().and_then(|s| s.parse::<VariantConfig>().ok()) {
                Some(c) => c,
                None => return HhStatus::InvalidVariant,
            }
        };
        match VariantHeap::new(cfg) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HhHeap { inner }));
                HhStatus::Ok
            }
            Err(e) => e.into(),
        }
    })
}

/// Releases a heap. NULL is ignored.
///
/// # Safety
/// `heap` is NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hh_heap_free(heap: *mut HhHeap) {
    if !heap.is_null() {
        drop(Box::from_raw(heap));
    }
}

unsafe fn with(heap: *mut HhHeap, f: impl FnOnce(&mut VariantHeap<i64>) -> HhStatus) -> HhStatus {
    guard(|| match heap.as_mut() {
        Some(h) => f(&mut h.inner),
        None => HhStatus::NullPointer,
    })
}

/// Inserts `item` with `key`.
///
/// # Safety
/// `heap` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_insert(heap: *mut HhHeap, item: u32, key: i64) -> HhStatus {
    with(heap, |h| status(h.insert(ItemId(item), key)))
}

/// Writes a minimum item and its key, or returns `HH_STATUS_EMPTY`. Either
/// output pointer may be NULL.
///
/// # Safety
/// `heap` is a live handle; non-NULL outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn hh_find_min(heap: *const HhHeap, item: *mut u32, key: *mut i64) -> HhStatus {
    guard(|| {
        let Some(h) = heap.as_ref() else {
            return HhStatus::NullPointer;
        };
        match h.inner.find_min() {
            Some((it, &k)) => {
                write_opt(item, it.0);
                write_opt(key, k);
                HhStatus::Ok
            }
            None => HhStatus::Empty,
        }
    })
}

unsafe fn write_opt<T>(p: *mut T, v: T) {
    if !p.is_null() {
        ptr::write(p, v);
    }
}

/// Removes a minimum item, writing it and its key like `hh_find_min`.
///
/// # Safety
/// As for `hh_find_min`.
#[no_mangle]
pub unsafe extern "C" fn hh_delete_min(heap: *mut HhHeap, item: *mut u32, key: *mut i64) -> HhStatus {
    with(heap, |h| match h.delete_min() {
        Ok((it, k)) => {
            write_opt(item, it.0);
            write_opt(key, k);
            HhStatus::Ok
        }
        Err(e) => e.into(),
    })
}

/// Lowers the key of `item` to `key`, which must be smaller than its
/// current key.
///
/// # Safety
/// `heap` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_decrease_key(heap: *mut HhHeap, item: u32, key: i64) -> HhStatus {
    with(heap, |h| status(h.decrease_key(ItemId(item), key)))
}

/// Removes `item`.
///
/// # Safety
/// `heap` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_delete(heap: *mut HhHeap, item: u32) -> HhStatus {
    with(heap, |h| status(h.delete(ItemId(item))))
}

/// Moves every item of `other` into `heap`. The heaps must have the same
/// variant, else `HH_STATUS_INCOMPATIBLE` and nothing changes. Otherwise
/// `other` is consumed and must not be used or freed, whatever the result.
/// Items must be disjoint; overlap is reported as `HH_STATUS_DUPLICATE_ITEM`
/// only in builds with debug assertions, leaving `heap` unchanged.
///
/// # Safety
/// `heap` and `other` are distinct live handles.
#[no_mangle]
pub unsafe extern "C" fn hh_meld(heap: *mut HhHeap, other: *mut HhHeap) -> HhStatus {
    guard(|| {
        if heap.is_null() || other.is_null() {
            return HhStatus::NullPointer;
        }
        if heap == other {
            return HhStatus::InvalidArgument;
        }
        let (a, b) = (&mut (*heap).inner, &(*other).inner);
        if a.config() != b.config() {
            return HhStatus::Incompatible;
        }
        let b = Box::from_raw(other).inner;
        status(a.meld(b))
    })
}

/// Removes every hollow node. `contract` selects the comparison-free
/// method. Returns the number of nodes destroyed through `destroyed`,
/// which may be NULL.
///
/// # Safety
/// `heap` is a live handle; `destroyed` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hh_rebuild(heap: *mut HhHeap, contract: bool, destroyed: *mut usize) -> HhStatus {
    with(heap, |h| {
        let method = if contract { RebuildMethod::Contract } else { RebuildMethod::Disassemble };
        let r = h.rebuild(method);
        write_opt(destroyed, r.destroyed);
        HhStatus::Ok
    })
}

/// Number of items, 0 for NULL.
///
/// # Safety
/// `heap` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_len(heap: *const HhHeap) -> usize {
    heap.as_ref().map_or(0, |h| h.inner.len())
}

/// Number of nodes, full and hollow, 0 for NULL.
///
/// # Safety
/// `heap` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_node_count(heap: *const HhHeap) -> usize {
    heap.as_ref().map_or(0, |h| h.inner.node_count())
}

/// Whether `item` is in the heap; false for NULL.
///
/// # Safety
/// `heap` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hh_contains(heap: *const HhHeap, item: u32) -> bool {
    heap.as_ref().is_some_and(|h| h.inner.contains(ItemId(item)))
}

/// Copies the heap's counters into `*out`.
///
/// # Safety
/// `heap` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hh_stats(heap: *const HhHeap, out: *mut HhStats) -> HhStatus {
    guard(|| {
        let (Some(h), false) = (heap.as_ref(), out.is_null()) else {
            return HhStatus::NullPointer;
        };
        let s = h.inner.stats();
        ptr::write(
            out,
            HhStats {
                ranked_links: s.ranked_links,
                unranked_links: s.unranked_links,
                comparisons: s.comparisons,
                hollow_destroyed: s.hollow_destroyed,
                nodes_created: s.nodes_created,
                max_rank_seen: s.max_rank_seen,
            },
        );
        HhStatus::Ok
    })
}

/// A static, NUL-terminated description of `status`.
#[no_mangle]
pub extern "C" fn hh_status_message(status: HhStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        HhStatus::Ok => b"ok\0",
        HhStatus::NullPointer => b"null pointer argument\0",
        HhStatus::InvalidVariant => b"invalid variant\0",
        HhStatus::DuplicateItem => b"item is already in the heap\0",
        HhStatus::UnknownItem => b"item is not in the heap\0",
        HhStatus::KeyNotDecreased => b"new key is not smaller than the current key\0",
        HhStatus::Empty => b"heap is empty\0",
        HhStatus::Incompatible => b"heaps have different variants\0",
        HhStatus::InvalidArgument => b"invalid argument\0",
        HhStatus::Panic => b"internal error\0",
    };
    s.as_ptr().cast()
}
