//! Per-thread heap accounting for peak-allocation measurements.
//!
//! [`CountingAllocator`] wraps the system allocator and tracks live bytes and
//! their high-water mark for the current thread. Install it in a binary with
//!
//! ```ignore
//! #[global_allocator]
//! static ALLOC: fusionbench::alloc::CountingAllocator = fusionbench::alloc::CountingAllocator;
//! ```
//!
//! and bracket the code under test with an [`AllocScope`]. Counters are
//! thread-local, so measurements are unaffected by other threads (such as
//! the test harness running tests in parallel).

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::sync::atomic::{AtomicBool, Ordering};

static INSTALLED: AtomicBool = AtomicBool::new(false);

thread_local! {
    static LIVE: Cell<isize> = const { Cell::new(0) };
    static PEAK: Cell<isize> = const { Cell::new(0) };
}

pub struct CountingAllocator;

#[inline]
fn record(delta: isize) {
    let _ = LIVE.try_with(|live| {
        let now = live.get() + delta;
        live.set(now);
        let _ = PEAK.try_with(|peak| {
            if now > peak.get() {
                peak.set(now);
            }
        });
    });
}

unsafe impl GlobalAlloc for CountingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        INSTALLED.store(true, Ordering::Relaxed);
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        INSTALLED.store(true, Ordering::Relaxed);
        let p = unsafe { System.alloc_zeroed(layout) };
        if !p.is_null() {
            record(layout.size() as isize);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        record(-(layout.size() as isize));
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = unsafe { System.realloc(ptr, layout, new_size) };
        if !p.is_null() {
            record(new_size as isize - layout.size() as isize);
        }
        p
    }
}

/// True once a [`CountingAllocator`] has served an allocation in this
/// process.
pub fn is_installed() -> bool {
    INSTALLED.load(Ordering::Relaxed)
}

/// Bytes currently allocated by this thread (net of frees, may be negative
/// if memory allocated elsewhere was freed here).
pub fn live_bytes() -> isize {
    LIVE.with(Cell::get)
}

/// Measures the allocation high-water mark of the current thread relative to
/// the live total when the scope began.
pub struct AllocScope {
    base: isize,
    saved_peak: isize,
}

impl AllocScope {
    pub fn begin() -> Self {
        let base = live_bytes();
        let saved_peak = PEAK.with(|p| p.replace(base));
        Self { base, saved_peak }
    }

    /// Largest number of extra bytes held at any point since `begin`.
    pub fn peak(&self) -> usize {
        (PEAK.with(Cell::get) - self.base).max(0) as usize
    }
}

impl Drop for AllocScope {
    fn drop(&mut self) {
        // Keep an enclosing scope's peak intact.
        PEAK.with(|p| p.set(p.get().max(self.saved_peak)));
    }
}
