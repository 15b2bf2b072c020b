//! C ABI for loading corpora and models, labelling segments and running the
//! Wilcoxon signed-rank test.
//!
//! Every fallible function returns a [`DactxStatus`]; on failure the message
//! is available from [`dactx_last_error_message`] on the same thread. Handles
//! are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Mutex;

use dactx::corpus::{load_corpus, Corpus, CorpusFormat, TagsetVariant};
use dactx::eval::wilcoxon;
use dactx::features::{FeatureDictionary, Featurizer, SparseVector};
use dactx::svm::{FeatureSettings, LinearModel, ModelBundle};
use dactx::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DactxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Io = 4,
    Parse = 5,
    Model = 6,
    InvalidInput = 7,
    OutOfRange = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> DactxStatus {
    match e {
        Error::Config(_) => DactxStatus::Config,
        Error::File { .. } | Error::Io(_) => DactxStatus::Io,
        Error::Parse { .. }
        | Error::Csv(_)
        | Error::EmptyDialog(_)
        | Error::UnknownLabel { .. } => DactxStatus::Parse,
        Error::Version(_) | Error::ModelFormat(_) | Error::Mismatch(_) => DactxStatus::Model,
        Error::FeatureOutOfRange { .. } => DactxStatus::OutOfRange,
        _ => DactxStatus::InvalidInput,
    }
}

fn fail(status: DactxStatus, message: impl Into<String>) -> DactxStatus {
    set_error(message);
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), DactxStatus>) -> DactxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DactxStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(DactxStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: dactx::Result<T>) -> Result<T, DactxStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, DactxStatus> {
    if p.is_null() {
        return Err(fail(DactxStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            DactxStatus::InvalidUtf8,
            format!("`{name}` is not valid UTF-8"),
        )
    })
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, DactxStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DactxStatus::NullPointer, format!("`{name}` is null")))
}

fn out_arg<T>(p: *mut T, name: &str) -> Result<(), DactxStatus> {
    if p.is_null() {
        Err(fail(DactxStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// Opaque corpus handle.
pub struct DactxCorpus {
    corpus: Corpus,
    labels: Vec<CString>,
}

/// Opaque model handle.
pub struct DactxModel {
    model: LinearModel,
    settings: FeatureSettings,
    labels: Vec<CString>,
    state: Mutex<(Featurizer, FeatureDictionary)>,
}

fn c_strings(items: &[String]) -> Vec<CString> {
    items
        .iter()
        .map(|s| CString::new(s.replace('\0', " ")).expect("nul bytes removed"))
        .collect()
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dactx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a corpus. `format` is one of `swda`, `lego`, `dialogbank`,
/// `segments`; `variant` may be null for the format's default tag set.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_load(
    path: *const c_char,
    format: *const c_char,
    variant: *const c_char,
    out: *mut *mut DactxCorpus,
) -> DactxStatus {
    guard(|| {
        out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        let format: CorpusFormat = lift(str_arg(format, "format")?.parse())?;
        let variant: TagsetVariant = if variant.is_null() {
            match format {
                CorpusFormat::Swda => TagsetVariant::Swda44,
                _ => TagsetVariant::Iso,
            }
        } else {
            lift(str_arg(variant, "variant")?.parse())?
        };
        let corpus = lift(load_corpus(Path::new(path), format, variant, None))?;
        let labels = c_strings(&corpus.label_set);
        *out = Box::into_raw(Box::new(DactxCorpus { corpus, labels }));
        Ok(())
    })
}

/// # Safety
/// `corpus` must be null or a live handle from [`dactx_corpus_load`].
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_dialog_count(corpus: *const DactxCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.dialogs.len())
}

/// # Safety
/// `corpus` must be null or a live handle from [`dactx_corpus_load`].
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_segment_count(corpus: *const DactxCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.segment_count())
}

/// # Safety
/// `corpus` must be null or a live handle from [`dactx_corpus_load`].
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_label_count(corpus: *const DactxCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.labels.len())
}

/// Label `index` of the corpus label set. The string is owned by the handle.
///
/// # Safety
/// `corpus` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_label(
    corpus: *const DactxCorpus,
    index: usize,
    out: *mut *const c_char,
) -> DactxStatus {
    guard(|| {
        let c = ref_arg(corpus, "corpus")?;
        out_arg(out, "out")?;
        let label = c.labels.get(index).ok_or_else(|| {
            fail(
                DactxStatus::OutOfRange,
                format!("label index {index} out of range"),
            )
        })?;
        *out = label.as_ptr();
        Ok(())
    })
}

/// # Safety
/// `corpus` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dactx_corpus_free(corpus: *mut DactxCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Loads a model and the dictionary stored next to it.
///
/// # Safety
/// `path` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dactx_model_load(
    path: *const c_char,
    out: *mut *mut DactxModel,
) -> DactxStatus {
    guard(|| {
        out_arg(out, "out")?;
        let bundle = lift(ModelBundle::load(Path::new(str_arg(path, "path")?)))?;
        let labels = c_strings(&bundle.model.labels);
        *out = Box::into_raw(Box::new(DactxModel {
            model: bundle.model,
            settings: bundle.settings,
            labels,
            state: Mutex::new((bundle.featurizer, bundle.dictionary)),
        }));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a live handle from [`dactx_model_load`].
#[no_mangle]
pub unsafe extern "C" fn dactx_model_class_count(model: *const DactxModel) -> usize {
    model.as_ref().map_or(0, |m| m.labels.len())
}

/// Number of preceding segments the model's features look at.
///
/// # Safety
/// `model` must be null or a live handle from [`dactx_model_load`].
#[no_mangle]
pub unsafe extern "C" fn dactx_model_context_size(model: *const DactxModel) -> usize {
    model.as_ref().map_or(0, |m| m.settings.context.n_prev())
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dactx_model_class_label(
    model: *const DactxModel,
    index: usize,
    out: *mut *const c_char,
) -> DactxStatus {
    guard(|| {
        let m = ref_arg(model, "model")?;
        out_arg(out, "out")?;
        let label = m.labels.get(index).ok_or_else(|| {
            fail(
                DactxStatus::OutOfRange,
                format!("class index {index} out of range"),
            )
        })?;
        *out = label.as_ptr();
        Ok(())
    })
}

/// Classifies one segment given its preceding segments, most recent first.
/// `prev_labels` may be null unless the model uses label context. Writes the
/// class index to `out_class`.
///
/// # Safety
/// `text` must be NUL-terminated; `prev_texts` (and `prev_labels` when not
/// null) must point to `n_prev` NUL-terminated strings; `out_class` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn dactx_model_predict_segment(
    model: *const DactxModel,
    text: *const c_char,
    prev_texts: *const *const c_char,
    prev_labels: *const *const c_char,
    n_prev: usize,
    out_class: *mut usize,
) -> DactxStatus {
    guard(|| {
        let m = ref_arg(model, "model")?;
        out_arg(out_class, "out_class")?;
        let text = str_arg(text, "text")?;
        let read_all = |p: *const *const c_char, name: &str| -> Result<Vec<&str>, DactxStatus> {
            if n_prev == 0 {
                return Ok(vec![]);
            }
            if p.is_null() {
                return Err(fail(DactxStatus::NullPointer, format!("`{name}` is null")));
            }
            (0..n_prev).map(|i| str_arg(*p.add(i), name)).collect()
        };
        let history = read_all(prev_texts, "prev_texts")?;
        let labels: Option<Vec<Vec<Option<String>>>> = if prev_labels.is_null() {
            None
        } else {
            Some(
                read_all(prev_labels, "prev_labels")?
                    .into_iter()
                    .map(|l| vec![Some(l.to_string())])
                    .collect(),
            )
        };

        let ctx = m.settings.context;
        let mut state = m.state.lock().unwrap_or_else(|p| p.into_inner());
        let (featurizer, dict) = &mut *state;
        let tokens = featurizer.tokens(text);
        let base = featurizer.base_vector(&tokens, dict);
        let history_tokens: Vec<_> = history.iter().map(|t| featurizer.tokens(t)).collect();
        let history_refs: Vec<_> = history_tokens.iter().collect();
        let context = lift(featurizer.context_vector(
            &history_refs,
            labels.as_deref(),
            ctx.mode(),
            ctx.n_prev(),
            dict,
        ))?;
        drop(state);
        let pairs = base
            .entries()
            .iter()
            .chain(context.entries())
            .copied()
            .collect();
        let x = lift(SparseVector::from_pairs(pairs))?;
        *out_class = lift(m.model.predict(&x))?;
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dactx_model_free(model: *mut DactxModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Wilcoxon signed-rank test on `n` pairs. Writes the two-sided p-value and
/// the positive rank sum; either output may be null.
///
/// # Safety
/// `a` and `b` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn dactx_wilcoxon(
    a: *const f64,
    b: *const f64,
    n: usize,
    out_p: *mut f64,
    out_w_plus: *mut f64,
) -> DactxStatus {
    guard(|| {
        let (a, b) = if n == 0 {
            (&[][..], &[][..])
        } else {
            if a.is_null() || b.is_null() {
                return Err(fail(DactxStatus::NullPointer, "sample pointer is null"));
            }
            (
                std::slice::from_raw_parts(a, n),
                std::slice::from_raw_parts(b, n),
            )
        };
        let r = lift(wilcoxon(a, b))?;
        if !out_p.is_null() {
            *out_p = r.p_value;
        }
        if !out_w_plus.is_null() {
            *out_w_plus = r.w_plus;
        }
        Ok(())
    })
}
