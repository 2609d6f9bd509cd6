//! C interface to `mission_content`.
//!
//! Every function returns an [`McStatus`]. On failure a description is kept
//! per thread and can be read with [`mc_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function; strings returned
//! through out-parameters must be released with [`mc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mission_content::config::RunConfig;
use mission_content::corpus::{load_corpus, Corpus, Format};
use mission_content::lexicons::{load_lexicon, tag, Lexicon};
use mission_content::lexmetrics::{fkgl, yules_k};
use mission_content::pipeline::{run, RunOptions};
use mission_content::simclust::cosine_sim;
use mission_content::textprep::tokenize;
use mission_content::{Error, ErrorKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    DataError = 4,
    AnalysisError = 5,
    IoError = 6,
    Panic = 7,
}

/// Loaded corpus.
pub struct McCorpus {
    inner: Corpus,
}

/// Loaded lexicon.
pub struct McLexicon {
    inner: Lexicon,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McReadability {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub fkgl: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> McStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McStatus::Ok,
        Ok(Err(Failure::Null(arg))) => {
            set_error(format!("{arg} is null"));
            McStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(arg))) => {
            set_error(format!("{arg} is not valid UTF-8"));
            McStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            match e.kind() {
                ErrorKind::Config => McStatus::ConfigError,
                ErrorKind::Data => McStatus::DataError,
                ErrorKind::Analysis => McStatus::AnalysisError,
                ErrorKind::Io => McStatus::IoError,
            }
        }
        Err(_) => {
            set_error("internal panic");
            McStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(name))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior NULs removed")
        .into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next `mc_` call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Load a CSV or JSONL corpus (chosen by extension).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_corpus_load(path: *const c_char, out: *mut *mut McCorpus) -> McStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let corpus = load_corpus(path, Format::from_path(Path::new(path)))?;
        *out = Box::into_raw(Box::new(McCorpus { inner: corpus }));
        Ok(())
    })
}

/// # Safety
/// `corpus` must come from [`mc_corpus_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_corpus_free(corpus: *mut McCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of documents; 0 for a null handle.
///
/// # Safety
/// `corpus` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_corpus_len(corpus: *const McCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.len())
}

/// Load a `category,entry` lexicon CSV.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_lexicon_load(path: *const c_char, out: *mut *mut McLexicon) -> McStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let lex = load_lexicon(path)?;
        *out = Box::into_raw(Box::new(McLexicon { inner: lex }));
        Ok(())
    })
}

/// # Safety
/// `lexicon` must come from [`mc_lexicon_load`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_lexicon_free(lexicon: *mut McLexicon) {
    if !lexicon.is_null() {
        drop(Box::from_raw(lexicon));
    }
}

/// Flesch-Kincaid grade level of a text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_fkgl(text: *const c_char, out: *mut McReadability) -> McStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let out = out_arg(out, "out")?;
        let r = fkgl(text)?;
        *out = McReadability {
            words: r.words,
            sentences: r.sentences,
            syllables: r.syllables,
            fkgl: r.fkgl,
        };
        Ok(())
    })
}

/// Yule's K of a text's raw tokens.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_yules_k(text: *const c_char, out: *mut f64) -> McStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let out = out_arg(out, "out")?;
        *out = yules_k(&tokenize(text).tokens)?.k;
        Ok(())
    })
}

/// Tag a text against a lexicon. Writes a JSON object
/// `{"doc_id", "lexicon", "counts", "ratios"}` to `*out_json`.
///
/// # Safety
/// `lexicon` must be a live handle, `text` a NUL-terminated string and
/// `out_json` a writable pointer. Free the result with [`mc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mc_tag_json(
    lexicon: *const McLexicon,
    text: *const c_char,
    out_json: *mut *mut c_char,
) -> McStatus {
    guard(|| {
        let lex = lexicon.as_ref().ok_or(Failure::Null("lexicon"))?;
        let text = str_arg(text, "text")?;
        let out = out_arg(out_json, "out_json")?;
        let result = tag("text", &tokenize(text), &lex.inner)?;
        let json = serde_json::to_string(&result).map_err(Error::from)?;
        *out = into_c_string(json);
        Ok(())
    })
}

/// Cosine similarity of two count vectors of length `len`.
///
/// # Safety
/// `x` and `y` must point to `len` readable values each.
#[no_mangle]
pub unsafe extern "C" fn mc_cosine(x: *const u64, y: *const u64, len: usize, out: *mut f64) -> McStatus {
    guard(|| {
        if x.is_null() {
            return Err(Failure::Null("x"));
        }
        if y.is_null() {
            return Err(Failure::Null("y"));
        }
        let out = out_arg(out, "out")?;
        let (xs, ys) = (std::slice::from_raw_parts(x, len), std::slice::from_raw_parts(y, len));
        *out = cosine_sim(xs, ys)?;
        Ok(())
    })
}

/// Run every stage of a TOML config. When `out_manifest_json` is not null it
/// receives the manifest JSON, to be freed with [`mc_string_free`].
///
/// # Safety
/// `config_path` must be a NUL-terminated string; `out_manifest_json` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mc_run_pipeline(config_path: *const c_char, out_manifest_json: *mut *mut c_char) -> McStatus {
    guard(|| {
        let path = str_arg(config_path, "config_path")?;
        let cfg = RunConfig::load(path)?;
        let manifest = run(&cfg, &RunOptions::default())?;
        if let Some(out) = out_manifest_json.as_mut() {
            *out = into_c_string(manifest.to_json());
        }
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
