//! Heterogeneous key/value maps.
//!
//! Options bags, buffer metadata, and algorithm inputs all flow through
//! [`HetMap`]: a string-keyed map over a closed set of value variants.
//! Retrieval is typed and strict — asking for a variant the key does not
//! hold is an error, with one deliberate exception: an integer widens to a
//! real on [`HetMap::get_real`], so `{"shots": 100}` satisfies a consumer
//! reading a real.
//!
//! Live framework objects (composites, observables, accelerators,
//! optimizers) travel through maps as shared [`Handle`]s, which lets a
//! single options bag configure an entire hybrid algorithm.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::backend::Accelerator;
use crate::ir::Composite;
use crate::observable::Observable;
use crate::optimize::Optimizer;

/// Error produced by typed retrieval from a [`HetMap`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HetError {
    /// The requested key is absent.
    #[error("key `{0}` is not present")]
    KeyMissing(String),
    /// The key is present but holds a different variant.
    #[error("key `{key}` holds {found}, not {expected}")]
    VariantMismatch {
        key: String,
        expected: &'static str,
        found: &'static str,
    },
}

/// Shared reference to a live framework object.
///
/// Handles are compared by identity (two handles are equal only when they
/// point at the same object) and clone by bumping a reference count.
#[derive(Clone)]
pub enum Handle {
    Composite(Arc<Composite>),
    Observable(Arc<dyn Observable + Send + Sync>),
    Accelerator(Arc<dyn Accelerator + Send + Sync>),
    Optimizer(Arc<dyn Optimizer + Send + Sync>),
}

impl Handle {
    /// Human-readable tag for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Handle::Composite(_) => "composite",
            Handle::Observable(_) => "observable",
            Handle::Accelerator(_) => "accelerator",
            Handle::Optimizer(_) => "optimizer",
        }
    }
}

impl core::fmt::Debug for Handle {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Handle<{}>", self.kind())
    }
}

impl PartialEq for Handle {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Handle::Composite(a), Handle::Composite(b)) => Arc::ptr_eq(a, b),
            (Handle::Observable(a), Handle::Observable(b)) => Arc::ptr_eq(a, b),
            (Handle::Accelerator(a), Handle::Accelerator(b)) => Arc::ptr_eq(a, b),
            (Handle::Optimizer(a), Handle::Optimizer(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// One value in a [`HetMap`]. The variant set is closed.
#[derive(Clone, Debug, PartialEq)]
pub enum HetValue {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    RealList(Vec<f64>),
    IntList(Vec<i64>),
    TextList(Vec<String>),
    /// Ordered key/value text pairs (duplicate keys allowed).
    Pairs(Vec<(String, String)>),
    /// Reference to a live framework object.
    Handle(Handle),
}

impl HetValue {
    /// Name of the held variant, as used in mismatch errors.
    pub fn variant_name(&self) -> &'static str {
        match self {
            HetValue::Int(_) => "int",
            HetValue::Real(_) => "real",
            HetValue::Bool(_) => "bool",
            HetValue::Text(_) => "text",
            HetValue::RealList(_) => "real-list",
            HetValue::IntList(_) => "int-list",
            HetValue::TextList(_) => "text-list",
            HetValue::Pairs(_) => "pair-list",
            HetValue::Handle(_) => "handle",
        }
    }
}

impl From<i64> for HetValue {
    fn from(v: i64) -> Self {
        HetValue::Int(v)
    }
}

impl From<i32> for HetValue {
    fn from(v: i32) -> Self {
        HetValue::Int(v.into())
    }
}

impl From<usize> for HetValue {
    fn from(v: usize) -> Self {
        HetValue::Int(v as i64)
    }
}

impl From<f64> for HetValue {
    fn from(v: f64) -> Self {
        HetValue::Real(v)
    }
}

impl From<bool> for HetValue {
    fn from(v: bool) -> Self {
        HetValue::Bool(v)
    }
}

impl From<&str> for HetValue {
    fn from(v: &str) -> Self {
        HetValue::Text(v.into())
    }
}

impl From<String> for HetValue {
    fn from(v: String) -> Self {
        HetValue::Text(v)
    }
}

impl From<Vec<f64>> for HetValue {
    fn from(v: Vec<f64>) -> Self {
        HetValue::RealList(v)
    }
}

impl From<Vec<i64>> for HetValue {
    fn from(v: Vec<i64>) -> Self {
        HetValue::IntList(v)
    }
}

impl From<Vec<String>> for HetValue {
    fn from(v: Vec<String>) -> Self {
        HetValue::TextList(v)
    }
}

impl From<Vec<(String, String)>> for HetValue {
    fn from(v: Vec<(String, String)>) -> Self {
        HetValue::Pairs(v)
    }
}

impl From<Handle> for HetValue {
    fn from(v: Handle) -> Self {
        HetValue::Handle(v)
    }
}

impl From<Arc<Composite>> for HetValue {
    fn from(v: Arc<Composite>) -> Self {
        HetValue::Handle(Handle::Composite(v))
    }
}

/// String-keyed heterogeneous map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HetMap {
    entries: BTreeMap<String, HetValue>,
}

macro_rules! typed_getter {
    ($get:ident, $opt:ident, $variant:ident, $ty:ty, $name:literal) => {
        #[doc = concat!("Retrieve `key` as ", $name, ".")]
        ///
        /// Errors with [`HetError::KeyMissing`] when absent and
        /// [`HetError::VariantMismatch`] when the key holds another
        /// variant.
        pub fn $get(&self, key: &str) -> Result<$ty, HetError> {
            match self.entries.get(key) {
                None => Err(HetError::KeyMissing(key.into())),
                Some(HetValue::$variant(v)) => Ok(v.clone()),
                Some(other) => Err(HetError::VariantMismatch {
                    key: key.into(),
                    expected: $name,
                    found: other.variant_name(),
                }),
            }
        }

        #[doc = concat!("Like [`Self::", stringify!($get), "`] but absent keys yield `None` instead of an error.")]
        pub fn $opt(&self, key: &str) -> Result<Option<$ty>, HetError> {
            match self.entries.get(key) {
                None => Ok(None),
                _ => self.$get(key).map(Some),
            }
        }
    };
}

impl HetMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build a map from `(key, value)` pairs, mirroring brace-initializer
    /// construction in the source dialects.
    pub fn from_pairs<K, V>(pairs: impl IntoIterator<Item = (K, V)>) -> Self
    where
        K: Into<String>,
        V: Into<HetValue>,
    {
        let mut map = Self::new();
        for (k, v) in pairs {
            map.insert(k, v);
        }
        map
    }

    /// Insert `value` under `key`, returning `true` when an existing value
    /// was overwritten.
    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<HetValue>) -> bool {
        self.entries.insert(key.into(), value.into()).is_some()
    }

    /// Remove `key`, returning the previous value if any.
    pub fn remove(&mut self, key: &str) -> Option<HetValue> {
        self.entries.remove(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&HetValue> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterate entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&String, &HetValue)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    typed_getter!(get_int, opt_int, Int, i64, "int");
    typed_getter!(get_bool, opt_bool, Bool, bool, "bool");
    typed_getter!(get_text, opt_text, Text, String, "text");
    typed_getter!(get_real_list, opt_real_list, RealList, Vec<f64>, "real-list");
    typed_getter!(get_int_list, opt_int_list, IntList, Vec<i64>, "int-list");
    typed_getter!(get_text_list, opt_text_list, TextList, Vec<String>, "text-list");
    typed_getter!(get_pairs, opt_pairs, Pairs, Vec<(String, String)>, "pair-list");
    typed_getter!(get_handle, opt_handle, Handle, Handle, "handle");

    /// Retrieve `key` as a real. An integer value widens to a real, so a
    /// map built with `{"x": 2}` satisfies `get_real("x") == 2.0`.
    pub fn get_real(&self, key: &str) -> Result<f64, HetError> {
        match self.entries.get(key) {
            None => Err(HetError::KeyMissing(key.into())),
            Some(HetValue::Real(v)) => Ok(*v),
            Some(HetValue::Int(v)) => Ok(*v as f64),
            Some(other) => Err(HetError::VariantMismatch {
                key: key.into(),
                expected: "real",
                found: other.variant_name(),
            }),
        }
    }

    /// Like [`Self::get_real`] but absent keys yield `None`.
    pub fn opt_real(&self, key: &str) -> Result<Option<f64>, HetError> {
        match self.entries.get(key) {
            None => Ok(None),
            _ => self.get_real(key).map(Some),
        }
    }
}

impl<K: Into<String>, V: Into<HetValue>> FromIterator<(K, V)> for HetMap {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn insert_and_typed_retrieval() {
        let mut m = HetMap::new();
        assert!(!m.insert("int-key", 1));
        assert!(!m.insert("double-key", 2.0));
        assert!(!m.insert("vector-key", vec![1.0, 2.0]));
        assert!(!m.insert("string-key", "hello"));

        assert_eq!(m.get_int("int-key").unwrap(), 1);
        assert_eq!(m.get_real("double-key").unwrap(), 2.0);
        assert_eq!(m.get_real_list("vector-key").unwrap(), vec![1.0, 2.0]);
        assert_eq!(m.get_text("string-key").unwrap(), "hello");
    }

    #[test]
    fn overwrite_is_reported() {
        let mut m = HetMap::new();
        assert!(!m.insert("double-key", 2.0));
        assert!(m.insert("double-key", 3.0));
        assert_eq!(m.get_real("double-key").unwrap(), 3.0);
    }

    #[test]
    fn int_widens_to_real_but_not_conversely() {
        let mut m = HetMap::new();
        m.insert("n", 7);
        assert_eq!(m.get_real("n").unwrap(), 7.0);
        assert_eq!(
            m.get_int("n").unwrap(),
            7,
            "int retrieval of an int is unaffected"
        );

        m.insert("x", 7.5);
        let err = m.get_int("x").unwrap_err();
        assert_eq!(
            err,
            HetError::VariantMismatch {
                key: "x".into(),
                expected: "int",
                found: "real",
            }
        );
    }

    #[test]
    fn missing_key_and_variant_mismatch() {
        let mut m = HetMap::new();
        m.insert("flag", true);
        assert_eq!(m.get_int("absent").unwrap_err(), HetError::KeyMissing("absent".into()));
        assert!(matches!(
            m.get_text("flag").unwrap_err(),
            HetError::VariantMismatch { expected: "text", found: "bool", .. }
        ));
        assert!(m.get_bool("flag").unwrap());
    }

    #[test]
    fn initializer_list_construction() {
        let m = HetMap::from_pairs([("int-key", HetValue::Int(1)), ("double-key", HetValue::Real(2.0))]);
        assert_eq!(m.len(), 2);
        assert_eq!(m.get_int("int-key").unwrap(), 1);
        assert_eq!(m.get_real("double-key").unwrap(), 2.0);
    }

    #[test]
    fn optional_getters_distinguish_absent_from_mismatched() {
        let mut m = HetMap::new();
        m.insert("s", "text value");
        assert_eq!(m.opt_real("absent").unwrap(), None);
        assert!(m.opt_real("s").is_err());
        assert_eq!(m.opt_text("s").unwrap().as_deref(), Some("text value"));
    }

    #[test]
    fn pair_list_round_trip() {
        let mut m = HetMap::new();
        m.insert(
            "wiring",
            vec![("a".to_string(), "0".to_string()), ("b".to_string(), "1".to_string())],
        );
        assert_eq!(m.get_pairs("wiring").unwrap().len(), 2);
    }
}
