use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::term::{rename, Term};

/// `Id(params) = body`. Parameters occur free in `body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub params: Vec<String>,
    pub body: Term,
}

impl Definition {
    /// Body with parameters replaced by `args`.
    pub fn instantiate(&self, args: &[String]) -> Term {
        let map: BTreeMap<String, String> = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        rename(&self.body, &map)
    }
}

/// An infinite family of definitions generated on demand, e.g. one
/// definition per tape contents.
pub trait DefFamily: fmt::Debug + Send + Sync {
    /// Does `name` belong to this family?
    fn owns(&self, name: &str) -> bool;
    fn generate(&self, name: &str) -> Option<Definition>;
    /// Directive line that reinstalls this family when parsing.
    fn directive(&self) -> String;
}

#[derive(Debug, Default)]
pub struct DefTable {
    explicit: BTreeMap<String, Arc<Definition>>,
    families: Vec<Arc<dyn DefFamily>>,
    cache: Mutex<HashMap<String, Arc<Definition>>>,
}

impl Clone for DefTable {
    fn clone(&self) -> Self {
        DefTable {
            explicit: self.explicit.clone(),
            families: self.families.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl DefTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, def: Definition) {
        self.explicit.insert(name.to_owned(), Arc::new(def));
    }

    pub fn add_family(&mut self, family: Arc<dyn DefFamily>) {
        self.families.push(family);
    }

    pub fn families(&self) -> &[Arc<dyn DefFamily>] {
        &self.families
    }

    pub fn explicit(&self) -> impl Iterator<Item = (&str, &Definition)> {
        self.explicit.iter().map(|(k, v)| (k.as_str(), v.as_ref()))
    }

    pub fn lookup(&self, name: &str) -> Option<Arc<Definition>> {
        if let Some(d) = self.explicit.get(name) {
            return Some(d.clone());
        }
        let family = self.families.iter().find(|f| f.owns(name))?;
        let mut cache = self.cache.lock().expect("definition cache poisoned");
        if let Some(d) = cache.get(name) {
            return Some(d.clone());
        }
        let d = Arc::new(family.generate(name)?);
        cache.insert(name.to_owned(), d.clone());
        Some(d)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.lookup(name).map(|d| d.params.len())
    }
}
