//! C ABI for the `mealy` toolkit.
//!
//! Machines live behind the opaque [`MealyHandle`]; every constructor
//! writes a new handle through an out-pointer and the caller releases it
//! with [`mealy_free`]. Strings returned by the library are owned by the
//! caller and released with [`mealy_string_free`].
//!
//! Every fallible function returns a [`MealyStatus`]. On failure the message
//! is available from [`mealy_last_error`] on the same thread until the next
//! failing call.
//!
//! Pointer arguments must be either null (reported as
//! `MEALY_STATUS_NULL_POINTER`) or valid for the access the function makes;
//! string arguments must be NUL-terminated.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mealy::catalog::catalog;
use mealy::certify::{
    finiteness_probe, order_probe, torsion_free_certificate, FinitenessOutcome, OrderOutcome,
    Precondition, TorsionOutcome,
};
use mealy::dot::emit_dot_orbit_tree;
use mealy::format::{parse_machine_file, serialize_machine};
use mealy::random::{random_machine, MachineClass};
use mealy::{classify, orbit_tree, Error, MealyMachine};

/// A machine together with its name.
pub struct MealyHandle {
    name: String,
    machine: MealyMachine,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MealyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidMachine = 4,
    Precondition = 5,
    BudgetExceeded = 6,
    UnknownKey = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MealyClass {
    Any = 0,
    Invertible = 1,
    Reversible = 2,
    InvRev = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MealyFlags {
    pub invertible: bool,
    pub reversible: bool,
    pub coreversible: bool,
    pub bireversible: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MealyTorsion {
    Certified = 0,
    NotInvertible = 1,
    NotReversible = 2,
    BireversibleComponent = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MealyVerdict {
    Finite = 0,
    InfiniteCertified = 1,
    Unknown = 2,
}

/// Order of one element. `index`, `period` and `is_identity_power` are
/// meaningful only when `verdict` is `MEALY_VERDICT_FINITE`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MealyOrder {
    pub verdict: MealyVerdict,
    pub index: usize,
    pub period: usize,
    pub is_identity_power: bool,
}

/// Finiteness of the generated semigroup. `cardinality` is meaningful only
/// when `verdict` is `MEALY_VERDICT_FINITE`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MealyFiniteness {
    pub verdict: MealyVerdict,
    pub cardinality: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> MealyStatus {
    match e {
        Error::Parse { .. }
        | Error::UnknownSymbol(_)
        | Error::DuplicateSymbol(_)
        | Error::InvalidIdentifier(_) => MealyStatus::Parse,
        Error::MissingTransition { .. }
        | Error::DuplicateTransition { .. }
        | Error::EmptyStateSet
        | Error::EmptyAlphabet => MealyStatus::InvalidMachine,
        Error::NotInvertible
        | Error::NotReversible
        | Error::AlphabetMismatch
        | Error::NotClosed { .. }
        | Error::LevelMismatch
        | Error::DepthExceeded { .. }
        | Error::NonIntegerLabel { .. }
        | Error::MalformedTree(_) => MealyStatus::Precondition,
        Error::BudgetExceeded(_) => MealyStatus::BudgetExceeded,
        Error::UnknownKey(_) => MealyStatus::UnknownKey,
        Error::EmptyWord => MealyStatus::InvalidArgument,
    }
}

type Fallible<T> = Result<T, MealyStatus>;

fn fail(e: Error) -> MealyStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Fallible<()>) -> MealyStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MealyStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            MealyStatus::Panic
        }
    }
}

unsafe fn handle<'a>(h: *const MealyHandle) -> Fallible<&'a MealyHandle> {
    h.as_ref().ok_or_else(|| {
        set_error("null handle");
        MealyStatus::NullPointer
    })
}

unsafe fn text<'a>(s: *const c_char) -> Fallible<&'a str> {
    if s.is_null() {
        set_error("null string");
        return Err(MealyStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        MealyStatus::InvalidUtf8
    })
}

unsafe fn write<T>(out: *mut T, value: T) -> Fallible<()> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(MealyStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle(
    out: *mut *mut MealyHandle,
    name: String,
    machine: MealyMachine,
) -> Fallible<()> {
    write(out, Box::into_raw(Box::new(MealyHandle { name, machine })))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Fallible<()> {
    let c = CString::new(s).map_err(|_| {
        set_error("output contains a NUL byte");
        MealyStatus::InvalidArgument
    })?;
    write(out, c.into_raw())
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mealy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a machine in the `.mealy` text format.
#[no_mangle]
pub unsafe extern "C" fn mealy_parse(
    source: *const c_char,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let file = parse_machine_file(text(source)?).map_err(fail)?;
        write_handle(out, file.name, file.machine)
    })
}

/// Loads a catalog machine: `lamplighter`, `lamplighter-inverse` or `J`.
#[no_mangle]
pub unsafe extern "C" fn mealy_catalog(
    key: *const c_char,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let entry = catalog(text(key)?).map_err(fail)?;
        write_handle(out, entry.key.to_owned(), entry.machine)
    })
}

/// Seeded random machine with `states` states and `letters` letters.
#[no_mangle]
pub unsafe extern "C" fn mealy_random(
    states: usize,
    letters: usize,
    class: MealyClass,
    seed: u64,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        if states == 0 || letters == 0 {
            set_error("states and letters must be positive");
            return Err(MealyStatus::InvalidArgument);
        }
        let class = match class {
            MealyClass::Any => MachineClass::Any,
            MealyClass::Invertible => MachineClass::Invertible,
            MealyClass::Reversible => MachineClass::Reversible,
            MealyClass::InvRev => MachineClass::InvRev,
        };
        let m = random_machine(states, letters, class, seed);
        write_handle(out, format!("random-{seed}"), m)
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mealy_free(h: *mut MealyHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mealy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of states, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn mealy_num_states(h: *const MealyHandle) -> usize {
    h.as_ref().map_or(0, |h| h.machine.num_states())
}

/// Number of letters, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn mealy_num_letters(h: *const MealyHandle) -> usize {
    h.as_ref().map_or(0, |h| h.machine.num_letters())
}

/// The machine in the `.mealy` text format.
#[no_mangle]
pub unsafe extern "C" fn mealy_serialize(
    h: *const MealyHandle,
    out: *mut *mut c_char,
) -> MealyStatus {
    guard(|| {
        let h = handle(h)?;
        write_string(out, serialize_machine(&h.name, &h.machine))
    })
}

#[no_mangle]
pub unsafe extern "C" fn mealy_classify(
    h: *const MealyHandle,
    out: *mut MealyFlags,
) -> MealyStatus {
    guard(|| {
        let f = classify(&handle(h)?.machine);
        write(
            out,
            MealyFlags {
                invertible: f.invertible,
                reversible: f.reversible,
                coreversible: f.coreversible,
                bireversible: f.bireversible,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn mealy_dual(
    h: *const MealyHandle,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let h = handle(h)?;
        write_handle(out, format!("{}-dual", h.name), h.machine.dual())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mealy_inverse(
    h: *const MealyHandle,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let h = handle(h)?;
        let m = h.machine.inverse().map_err(fail)?;
        write_handle(out, format!("{}-inverse", h.name), m)
    })
}

#[no_mangle]
pub unsafe extern "C" fn mealy_product(
    a: *const MealyHandle,
    b: *const MealyHandle,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        let m = a.machine.product(&b.machine).map_err(fail)?;
        write_handle(out, format!("{}-x-{}", a.name, b.name), m)
    })
}

#[no_mangle]
pub unsafe extern "C" fn mealy_disjoint_union(
    a: *const MealyHandle,
    b: *const MealyHandle,
    out: *mut *mut MealyHandle,
) -> MealyStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        let m = a.machine.disjoint_union(&b.machine).map_err(fail)?;
        write_handle(out, format!("{}-u-{}", a.name, b.name), m)
    })
}

/// Runs the state word `states` on the letter word `letters` (both
/// whitespace-separated identifiers). Writes the output letter word and the
/// final state word.
#[no_mangle]
pub unsafe extern "C" fn mealy_run(
    h: *const MealyHandle,
    states: *const c_char,
    letters: *const c_char,
    out_letters: *mut *mut c_char,
    out_states: *mut *mut c_char,
) -> MealyStatus {
    guard(|| {
        let m = &handle(h)?.machine;
        let u = m.parse_state_word(text(states)?).map_err(fail)?;
        let s = m.parse_letter_word(text(letters)?).map_err(fail)?;
        if out_letters.is_null() || out_states.is_null() {
            set_error("null output pointer");
            return Err(MealyStatus::NullPointer);
        }
        let (image, fin) = m.run(&u, &s);
        write_string(out_letters, m.format_letter_word(&image))?;
        write_string(out_states, m.format_state_word(&fin))
    })
}

/// Torsion-freeness certificate of the generated semigroup.
#[no_mangle]
pub unsafe extern "C" fn mealy_certify_torsion_free(
    h: *const MealyHandle,
    out: *mut MealyTorsion,
) -> MealyStatus {
    guard(|| {
        let verdict = torsion_free_certificate(&handle(h)?.machine);
        let t = match verdict.outcome {
            TorsionOutcome::Certified => MealyTorsion::Certified,
            TorsionOutcome::NotApplicable { failed } => match failed {
                Precondition::NotInvertible => MealyTorsion::NotInvertible,
                Precondition::NotReversible => MealyTorsion::NotReversible,
                Precondition::BireversibleComponent { .. } => MealyTorsion::BireversibleComponent,
            },
        };
        write(out, t)
    })
}

/// Order of the element induced by the state word `word`.
#[no_mangle]
pub unsafe extern "C" fn mealy_order_probe(
    h: *const MealyHandle,
    word: *const c_char,
    max_power: usize,
    budget: usize,
    out: *mut MealyOrder,
) -> MealyStatus {
    guard(|| {
        let m = &handle(h)?.machine;
        let u = m.parse_state_word(text(word)?).map_err(fail)?;
        let r = order_probe(m, &u, max_power, budget).map_err(fail)?;
        let order = match r.outcome {
            OrderOutcome::Finite {
                index,
                period,
                is_identity_power,
            } => MealyOrder {
                verdict: MealyVerdict::Finite,
                index,
                period,
                is_identity_power,
            },
            OrderOutcome::InfiniteCertified { .. } => MealyOrder {
                verdict: MealyVerdict::InfiniteCertified,
                index: 0,
                period: 0,
                is_identity_power: false,
            },
            OrderOutcome::Unknown { .. } => MealyOrder {
                verdict: MealyVerdict::Unknown,
                index: 0,
                period: 0,
                is_identity_power: false,
            },
        };
        write(out, order)
    })
}

/// Finiteness of the generated semigroup.
#[no_mangle]
pub unsafe extern "C" fn mealy_finiteness_probe(
    h: *const MealyHandle,
    max_level: usize,
    budget: usize,
    out: *mut MealyFiniteness,
) -> MealyStatus {
    guard(|| {
        let v = finiteness_probe(&handle(h)?.machine, max_level, budget);
        let f = match v.outcome {
            FinitenessOutcome::Finite { cardinality } => MealyFiniteness {
                verdict: MealyVerdict::Finite,
                cardinality,
            },
            FinitenessOutcome::InfiniteCertified { .. } => MealyFiniteness {
                verdict: MealyVerdict::InfiniteCertified,
                cardinality: 0,
            },
            FinitenessOutcome::Unknown { .. } => MealyFiniteness {
                verdict: MealyVerdict::Unknown,
                cardinality: 0,
            },
        };
        write(out, f)
    })
}

/// Orbit tree to `depth` as Graphviz DOT. `truncated` may be null; when
/// given it is set to whether the budget stopped the expansion early.
#[no_mangle]
pub unsafe extern "C" fn mealy_orbit_tree_dot(
    h: *const MealyHandle,
    depth: usize,
    budget: usize,
    out: *mut *mut c_char,
    truncated: *mut bool,
) -> MealyStatus {
    guard(|| {
        let tree = orbit_tree(&handle(h)?.machine, depth, budget).map_err(fail)?;
        if !truncated.is_null() {
            truncated.write(tree.is_truncated());
        }
        write_string(out, emit_dot_orbit_tree(&tree))
    })
}
